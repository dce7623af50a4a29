// Acceptance suite for the channel library. Each criterion prints one
// [PASS]/[FAIL] line; the exit code is the number of failed criteria.

#include <mcchan/mcchan.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <random>
#include <string>
#include <vector>

using namespace mcchan;

namespace {

int g_failed = 0;

void report(int id, bool ok, const std::string& what) {
    std::printf("[%s] %d. %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
    if (!ok)
        ++g_failed;
}

template <typename Fn>
void criterion(int id, const char* label, Fn&& fn) {
    try {
        std::string detail;
        const bool ok = fn(detail);
        report(id, ok, std::string(label) + (detail.empty() ? "" : " (" + detail + ")"));
    } catch (const std::exception& e) {
        report(id, false, std::string(label) + " (exception: " + e.what() + ")");
    }
}

double rel_err(Complex a, Complex b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

const DiffusionChannel table_channel{490.0, 100.0};
const PassiveMembrane table_membrane{0.05, 9.9};

} // namespace

int main() {
    criterion(1, "design constants fall out of the dimensionless cutoff", [](std::string& d) {
        const auto t0 = std::chrono::steady_clock::now();
        const DimensionlessCutoff c = dimensionless_cutoff();
        const double elapsed_ms = ms_since(t0);

        const double scaled =
            diffusion_cutoff(table_channel).omega_c * table_channel.L * table_channel.L /
            table_channel.mu;
        const double design = std::sqrt(2.0) * c.w_hat;

        char buf[160];
        std::snprintf(buf, sizeof buf, "w* = %.6f, omega L^2/mu = %.4f, sqrt(2) w* = %.4f, %.3f ms",
                      c.w_hat, scaled, design, elapsed_ms);
        d = buf;
        return std::abs(c.w_hat - 1.440) <= 0.005 && std::abs(scaled - 4.14) <= 0.02 &&
               std::abs(design - 2.03) <= 0.01 && elapsed_ms < 1.0;
    });

    criterion(2, "dimensionless gain decreases strictly under a certified bound",
              [](std::string& d) {
                  bool ok = monotonicity_bound(0.0) == 1.0;
                  double prev = dimensionless_gain(20.0 / 1000.0);
                  for (int i = 1; i <= 1000; ++i) {
                      const double w = 20.0 * double(i) / 1000.0;
                      const double g = dimensionless_gain(w);
                      if (i > 1 && !(g < prev))
                          ok = false;
                      if (!(monotonicity_bound(w) < 1.0))
                          ok = false;
                      prev = g;
                  }
                  d = "1000-point grid on (0, 20]";
                  return ok;
              });

    criterion(3, "transmission cutoff lands on the analytic lag corner", [](std::string& d) {
        const RationalTf g1 = transmission_tf(table_membrane);
        const CutoffResult c = find_cutoff(
            [&](double w) { return eval_rational(g1, Complex(0.0, w)); }, 1e-4, 10.0);
        char buf[80];
        std::snprintf(buf, sizeof buf, "omega_1 = %.6g rad/s", c.omega_c);
        d = buf;
        return std::abs(c.omega_c - 0.0866) / 0.0866 <= 0.005;
    });

    criterion(4, "diffusion cutoff of the reference channel", [](std::string& d) {
        const double w = diffusion_cutoff(table_channel).omega_c;
        char buf[80];
        std::snprintf(buf, sizeof buf, "omega_D = %.6g rad/s", w);
        d = buf;
        return std::abs(w - 0.2032) / 0.2032 <= 0.005;
    });

    criterion(5, "subsystem cutoffs are ordered and the flux loop dips", [](std::string& d) {
        const BoundaryLayer bl = passive_boundary(table_membrane);
        const double w_ff =
            find_cutoff([&](double w) { return flux_feedback_tf(bl, table_channel, Complex(0.0, w)); },
                        1e-4, 10.0)
                .omega_c;
        const double w_1 =
            find_cutoff([&](double w) { return eval_rational(bl.transmission, Complex(0.0, w)); },
                        1e-4, 10.0)
                .omega_c;
        const double w_d = diffusion_cutoff(table_channel).omega_c;

        double dip_w = 0.0;
        double dip_gain = 1e300;
        for (int i = 0; i <= 2000; ++i) {
            const double w = 1e-3 * std::pow(1e3, double(i) / 2000.0);
            const double g =
                std::abs(flux_feedback_tf(bl, table_channel, Complex(0.0, w)));
            if (g < dip_gain) {
                dip_gain = g;
                dip_w = w;
            }
        }

        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "omega_FF = %.4g < omega_1 = %.4g < omega_D = %.4g, dip at %.4g rad/s",
                      w_ff, w_1, w_d, dip_w);
        d = buf;
        return w_ff < w_1 && w_1 < w_d && dip_w >= 0.03 && dip_w <= 0.12;
    });

    criterion(6, "limiting-subsystem verdicts and the distance bound", [](std::string& d) {
        const auto t0 = std::chrono::steady_clock::now();
        const BoundaryLayer bl = passive_boundary(table_membrane);
        const DiffusionChannel near{490.0, 10.0};
        const DiffusionChannel far{490.0, 1000.0};

        const ChannelClassification c_near = classify_limiting_subsystem(near, bl);
        const ChannelClassification c_mid = classify_limiting_subsystem(table_channel, bl);
        const ChannelClassification c_far = classify_limiting_subsystem(far, bl);
        const double bound = max_distance(table_channel.mu, c_mid.boundary.omega_c);
        const double elapsed_ms = ms_since(t0);

        char buf[120];
        std::snprintf(buf, sizeof buf, "L_max(omega_B) = %.4g um, %.1f ms", bound, elapsed_ms);
        d = buf;
        return c_near.limiter == LimitingSubsystem::BoundaryLimited &&
               c_mid.limiter == LimitingSubsystem::BoundaryLimited &&
               c_far.limiter == LimitingSubsystem::DiffusionLimited &&
               bound > 100.0 && bound < 1000.0 && elapsed_ms < 1000.0;
    });

    criterion(7, "algebraic identities across evaluation paths", [](std::string& d) {
        std::mt19937 rng(9001);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const BoundaryLayer bl = passive_boundary(table_membrane);
        const double k = table_membrane.k;
        const double mu_hat = table_membrane.mu_hat;

        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double sigma = unit(rng) < 0.3 ? 0.0 : std::pow(10.0, -3.0 + 3.0 * unit(rng));
            const double mag = std::pow(10.0, -4.0 + 4.7 * unit(rng));
            const double omega = (unit(rng) < 0.5 ? -1.0 : 1.0) * mag;
            const Complex s(sigma, omega);
            const double r = table_channel.L * unit(rng);

            worst = std::max(worst, rel_err(concentration_tf_composed(table_channel, r, s),
                                            concentration_tf(table_channel, r, s)));

            const Complex closed =
                k / (s + k - mu_hat * sender_gradient_tf(table_channel, s));
            worst = std::max(worst, rel_err(boundary_tf(bl, table_channel, s), closed));

            const Complex q = std::sqrt(s / table_channel.mu);
            worst = std::max(worst, rel_err(sender_gradient_tf(table_channel, s),
                                            -q * std::tanh(table_channel.L * q)));

            const double total = gain_db(channel_tf(bl, table_channel, s));
            const double parts = gain_db(eval_rational(bl.transmission, s)) +
                                 gain_db(flux_feedback_tf(bl, table_channel, s)) +
                                 gain_db(receiver_concentration_tf(table_channel, s));
            worst = std::max(worst,
                             std::abs(total - parts) / std::max(1.0, std::abs(total)));
        }
        char buf[80];
        std::snprintf(buf, sizeof buf, "worst relative error %.3g over 100 samples", worst);
        d = buf;
        return worst < 1e-12;
    });

    criterion(8, "discretized solver matches the analytic response and converges",
              [](std::string& d) {
                  const auto t0 = std::chrono::steady_clock::now();
                  const std::vector<double> omegas{3e-3, 1e-2, 3e-2, 1e-1};

                  const ValidationReport coarse =
                      validate_against_analytic(table_channel, table_membrane, omegas, 1);
                  const ValidationReport fine =
                      validate_against_analytic(table_channel, table_membrane, omegas, 2);
                  const double elapsed_s = ms_since(t0) / 1000.0;

                  const double ratio =
                      fine.max_gain_rel_err > 0.0
                          ? coarse.max_gain_rel_err / fine.max_gain_rel_err
                          : 1e300;
                  char buf[200];
                  std::snprintf(buf, sizeof buf,
                                "gain err %.3g%%, phase err %.3g deg, refinement gain %.2fx, %.1f s",
                                100.0 * coarse.max_gain_rel_err, coarse.max_phase_err_deg, ratio,
                                elapsed_s);
                  d = buf;
                  return coarse.n_failed == 0 && fine.n_failed == 0 &&
                         coarse.max_gain_rel_err < 0.02 && coarse.max_phase_err_deg < 3.0 &&
                         ratio >= 1.5 && elapsed_s < 300.0;
              });

    criterion(9, "time-domain sanity: settling, rest, linearity", [](std::string& d) {
        SimConfig step{table_channel, table_membrane, 40, 0.002, 600.0, InputSignal::step(1.0)};
        const SimResult rs = simulate(step);
        const bool settles = std::abs(rs.receiver_series.back() - 1.0) <= 0.005;

        SimConfig rest = step;
        rest.input = InputSignal::step(0.0);
        rest.t_end = 50.0;
        const SimResult rr = simulate(rest);
        bool quiet = rr.field_min == 0.0 && rr.field_max == 0.0;
        for (double v : rr.v_series)
            quiet = quiet && v == 0.0;

        SimConfig lin{table_channel, table_membrane, 24, 0.005, 150.0,
                      InputSignal::sine(1.0, 0.05)};
        const SimResult r1 = simulate(lin);
        lin.input = InputSignal::sine(2.0, 0.05);
        const SimResult r2 = simulate(lin);
        double maxdev = 0.0;
        double scale = 0.0;
        for (std::size_t i = 0; i < r1.receiver_series.size(); ++i) {
            maxdev = std::max(maxdev,
                              std::abs(r2.receiver_series[i] - 2.0 * r1.receiver_series[i]));
            scale = std::max(scale, std::abs(r2.receiver_series[i]));
        }
        const bool linear = maxdev <= 1e-9 * scale;

        char buf[160];
        std::snprintf(buf, sizeof buf, "step end %.5f, scaling deviation %.3g",
                      rs.receiver_series.back(), scale > 0.0 ? maxdev / scale : 0.0);
        d = buf;
        return settles && quiet && linear;
    });

    std::printf("acceptance: %d/9 criteria passed\n", 9 - g_failed);
    return g_failed;
}
