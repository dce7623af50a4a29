#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <mcchan/mcchan.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnexpected = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSingularity = 3;
constexpr int kExitNoCrossing = 4;
constexpr int kExitInstability = 5;
constexpr int kExitValidation = 6;

struct BodeArgs {
    std::string config;
    std::string out;
};

struct CutoffArgs {
    std::string config;
    std::string system;
    double threshold_db = -6.0;
};

struct DesignArgs {
    double mu = 0.0;
    double omega_b = 0.0;
    double threshold_db = -6.0;
};

struct SimulateArgs {
    std::string config;
    std::string input;
    std::string out;
    double amplitude = 1.0;
    double omega = 0.0;
    double area = 1.0;
    double width = 0.0;
};

struct ValidateArgs {
    std::string config;
    std::vector<double> omegas;
};

void write_file_or_throw(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw mcchan::ConfigError(path + ": cannot open output file");
    out << bytes;
    out.flush();
    if (!out)
        throw mcchan::ConfigError(path + ": write failed");
}

int run_bode(const BodeArgs& args) {
    const mcchan::ChannelConfig cfg = mcchan::load_channel_config(args.config);
    const mcchan::DiffusionChannel chan = cfg.channel();
    const mcchan::BoundaryLayer bl = mcchan::passive_boundary(cfg.membrane());
    const auto rows = mcchan::compute_sweep_rows(chan, bl, cfg.sweep);
    std::ostringstream csv;
    mcchan::write_bode_csv(csv, rows);
    write_file_or_throw(args.out, csv.str());
    return kExitOk;
}

int run_cutoff(const CutoffArgs& args) {
    const mcchan::ChannelConfig cfg = mcchan::load_channel_config(args.config);
    const mcchan::DiffusionChannel chan = cfg.channel();
    const mcchan::BoundaryLayer bl = mcchan::passive_boundary(cfg.membrane());
    const double wmin = cfg.sweep.wmin;
    const double wmax = cfg.sweep.wmax;

    if (args.system == "diffusion") {
        const auto cut = mcchan::diffusion_cutoff(chan, args.threshold_db);
        std::printf("omega_c = %.6g rad/s\n", cut.omega_c);
        return kExitOk;
    }

    mcchan::FrequencyResponse eval;
    if (args.system == "transmission")
        eval = [&](double w) { return mcchan::eval_rational(bl.transmission, {0.0, w}); };
    else if (args.system == "flux-feedback")
        eval = [&](double w) { return mcchan::flux_feedback_tf(bl, chan, {0.0, w}); };
    else if (args.system == "boundary")
        eval = [&](double w) { return mcchan::boundary_tf(bl, chan, {0.0, w}); };
    else
        eval = [&](double w) { return mcchan::channel_tf(bl, chan, {0.0, w}); };

    const auto cut = mcchan::find_cutoff(eval, wmin, wmax, 400, args.threshold_db);
    std::printf("omega_c = %.6g rad/s\n", cut.omega_c);
    if (args.system == "channel") {
        const auto cls = mcchan::classify_limiting_subsystem(chan, bl, args.threshold_db);
        std::printf("omega_boundary = %.6g rad/s\n", cls.boundary.omega_c);
        std::printf("omega_diffusion = %.6g rad/s\n", cls.diffusion.omega_c);
        std::printf("verdict = %s\n",
                    cls.limiter == mcchan::LimitingSubsystem::DiffusionLimited
                        ? "DiffusionLimited"
                        : "BoundaryLimited");
    }
    return kExitOk;
}

int run_design(const DesignArgs& args) {
    const double l_max = mcchan::max_distance(args.mu, args.omega_b, args.threshold_db);
    std::printf("L_max = %.6g um\n", l_max);
    return kExitOk;
}

int run_simulate(const SimulateArgs& args) {
    const mcchan::ChannelConfig cfg = mcchan::load_channel_config(args.config);
    if (!cfg.sim)
        throw mcchan::ConfigError(args.config + ": 'sim' block required for simulate");

    mcchan::InputSignal input;
    if (args.input == "step") {
        input = mcchan::InputSignal::step(args.amplitude);
    } else if (args.input == "sine") {
        if (!(args.omega > 0.0))
            throw mcchan::ConfigError("simulate: sine input requires --omega > 0");
        input = mcchan::InputSignal::sine(args.amplitude, args.omega);
    } else {
        input = mcchan::InputSignal::impulse(args.area, args.width);
    }

    const mcchan::SimConfig sim{cfg.channel(), cfg.membrane(), cfg.sim->nx,
                                cfg.sim->dt,   cfg.sim->t_end, input};
    const mcchan::SimResult res = mcchan::simulate(sim);
    std::ostringstream csv;
    mcchan::write_sim_csv(csv, res);
    write_file_or_throw(args.out, csv.str());
    return kExitOk;
}

int run_validate(const ValidateArgs& args) {
    const mcchan::ChannelConfig cfg = mcchan::load_channel_config(args.config);
    const auto rep =
        mcchan::validate_against_analytic(cfg.channel(), cfg.membrane(), args.omegas);

    std::printf("%12s %13s %13s %12s %13s %13s %14s  %s\n", "omega_rad_s", "gain_ref",
                "gain_fdtd", "gain_err_pct", "phase_ref_deg", "phase_fdtd_dg", "phase_err_deg",
                "status");
    for (const auto& row : rep.rows) {
        if (row.ok)
            std::printf("%12.6g %13.8g %13.8g %12.4g %13.6g %13.6g %14.4g  %s\n", row.omega,
                        row.analytic_gain, row.fdtd_gain, 100.0 * row.gain_rel_err,
                        row.analytic_phase_deg, row.fdtd_phase_deg, row.phase_err_deg, "ok");
        else
            std::printf("%12.6g %13s %13s %12s %13s %13s %14s  FAILED: %s\n", row.omega, "-",
                        "-", "-", "-", "-", "-", row.message.c_str());
    }
    std::printf("max_gain_err_pct = %.4g\n", 100.0 * rep.max_gain_rel_err);
    std::printf("max_phase_err_deg = %.4g\n", rep.max_phase_err_deg);
    std::printf("failed = %d\n", rep.n_failed);

    const bool pass =
        rep.n_failed == 0 && rep.max_gain_rel_err < 0.02 && rep.max_phase_err_deg < 3.0;
    return pass ? kExitOk : kExitValidation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frequency-response and simulation tools for a diffusive molecular "
                 "communication channel"};
    app.require_subcommand(1);

    BodeArgs bode_args;
    CLI::App* bode = app.add_subcommand("bode", "Sweep the channel gain/phase to a CSV file");
    bode->add_option("-c,--config", bode_args.config, "channel config JSON")->required();
    bode->add_option("-o,--out", bode_args.out, "output CSV path")->required();

    CutoffArgs cutoff_args;
    CLI::App* cutoff = app.add_subcommand("cutoff", "Locate a -6 dB cutoff frequency");
    cutoff->add_option("-c,--config", cutoff_args.config, "channel config JSON")->required();
    cutoff->add_option("-s,--system", cutoff_args.system, "subsystem to analyze")
        ->required()
        ->check(CLI::IsMember({"channel", "diffusion", "boundary", "transmission",
                               "flux-feedback"}));
    cutoff->add_option("--threshold-db", cutoff_args.threshold_db,
                       "gain threshold in dB (default -6)");

    DesignArgs design_args;
    CLI::App* design =
        app.add_subcommand("design", "Longest channel meeting a bandwidth target");
    design->add_option("--mu", design_args.mu, "diffusion coefficient, um^2/s")
        ->required()
        ->check(CLI::PositiveNumber);
    design->add_option("--omega-b", design_args.omega_b, "required band edge, rad/s")
        ->required()
        ->check(CLI::PositiveNumber);
    design->add_option("--threshold-db", design_args.threshold_db,
                       "gain threshold in dB (default -6)");

    SimulateArgs sim_args;
    CLI::App* simulate =
        app.add_subcommand("simulate", "Run the explicit time-domain solver to a CSV file");
    simulate->add_option("-c,--config", sim_args.config, "channel config JSON with sim block")
        ->required();
    simulate->add_option("-i,--input", sim_args.input, "input signal kind")
        ->required()
        ->check(CLI::IsMember({"step", "sine", "impulse"}));
    simulate->add_option("-o,--out", sim_args.out, "output CSV path")->required();
    simulate->add_option("--amplitude", sim_args.amplitude, "step/sine amplitude (default 1)");
    simulate->add_option("--omega", sim_args.omega, "sine frequency, rad/s");
    simulate->add_option("--area", sim_args.area, "impulse area (default 1)");
    simulate->add_option("--width", sim_args.width, "impulse width, s (default 10*dt)");

    ValidateArgs val_args;
    CLI::App* validate =
        app.add_subcommand("validate", "Cross-check the solver against the analytic response");
    validate->add_option("-c,--config", val_args.config, "channel config JSON")->required();
    validate->add_option("--omegas", val_args.omegas, "frequencies to check, rad/s")
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (bode->parsed())
            return run_bode(bode_args);
        if (cutoff->parsed())
            return run_cutoff(cutoff_args);
        if (design->parsed())
            return run_design(design_args);
        if (simulate->parsed())
            return run_simulate(sim_args);
        if (validate->parsed())
            return run_validate(val_args);
    } catch (const mcchan::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const mcchan::SingularityError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSingularity;
    } catch (const mcchan::NoCrossingError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNoCrossing;
    } catch (const mcchan::InstabilityError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInstability;
    } catch (const mcchan::FitError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUnexpected;
    }
    return kExitUnexpected;
}
