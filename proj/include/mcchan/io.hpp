#ifndef MCCHAN_IO_HPP
#define MCCHAN_IO_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "boundary.hpp"
#include "diffusion_tf.hpp"
#include "errors.hpp"
#include "fdtd.hpp"
#include "response.hpp"

namespace mcchan {

struct SweepSpec {
    double wmin = 1e-4;
    double wmax = 1e1;
    int points = 400;
};

struct SimSpec {
    int nx;
    double dt;
    double t_end;
};

/// Physical parameters plus optional sweep and simulation blocks, as read
/// from a JSON config file.
struct ChannelConfig {
    double mu;     ///< um^2/s
    double L;      ///< um
    double k;      ///< 1/s
    double mu_hat; ///< um/s
    SweepSpec sweep;
    std::optional<SimSpec> sim;

    DiffusionChannel channel() const { return DiffusionChannel(mu, L); }
    PassiveMembrane membrane() const { return PassiveMembrane(k, mu_hat); }
};

namespace detail {

inline std::pair<int, int> line_col_of(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

inline double number_field(const nlohmann::json& obj, const std::string& key,
                           const std::string& origin) {
    if (!obj.contains(key))
        throw ConfigError(origin + ": missing field '" + key + "'");
    if (!obj[key].is_number())
        throw ConfigError(origin + ": field '" + key + "' must be a number");
    return obj[key].get<double>();
}

inline void reject_unknown_keys(const nlohmann::json& obj,
                                std::initializer_list<const char*> known,
                                const std::string& origin, const std::string& scope) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool found = false;
        for (const char* k : known)
            if (it.key() == k)
                found = true;
        if (!found)
            throw ConfigError(origin + ": unknown field '" + it.key() + "'" + scope);
    }
}

} // namespace detail

/// Parse and validate a config document. `origin` names the source (a file
/// path, typically) for error messages; parse errors carry line and column.
inline ChannelConfig parse_channel_config(const std::string& text, const std::string& origin) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = detail::line_col_of(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ConfigError(origin + ": parse error at line " + std::to_string(line) +
                          ", column " + std::to_string(col));
    }
    if (!doc.is_object())
        throw ConfigError(origin + ": top level must be a JSON object");
    detail::reject_unknown_keys(
        doc, {"mu_um2_per_s", "L_um", "k_per_s", "mu_hat_um_per_s", "sweep", "sim"}, origin, "");

    ChannelConfig cfg{};
    cfg.mu = detail::number_field(doc, "mu_um2_per_s", origin);
    cfg.L = detail::number_field(doc, "L_um", origin);
    cfg.k = detail::number_field(doc, "k_per_s", origin);
    cfg.mu_hat = detail::number_field(doc, "mu_hat_um_per_s", origin);
    if (!(cfg.mu > 0.0))
        throw ConfigError(origin + ": 'mu_um2_per_s' must be > 0");
    if (!(cfg.L > 0.0))
        throw ConfigError(origin + ": 'L_um' must be > 0");
    if (!(cfg.k > 0.0))
        throw ConfigError(origin + ": 'k_per_s' must be > 0");
    if (!(cfg.mu_hat >= 0.0))
        throw ConfigError(origin + ": 'mu_hat_um_per_s' must be >= 0");

    if (doc.contains("sweep")) {
        const auto& sw = doc["sweep"];
        if (!sw.is_object())
            throw ConfigError(origin + ": 'sweep' must be an object");
        detail::reject_unknown_keys(sw, {"wmin", "wmax", "points"}, origin, " in 'sweep'");
        cfg.sweep.wmin = detail::number_field(sw, "wmin", origin);
        cfg.sweep.wmax = detail::number_field(sw, "wmax", origin);
        const double pts = detail::number_field(sw, "points", origin);
        if (!(cfg.sweep.wmin > 0.0) || !(cfg.sweep.wmax > cfg.sweep.wmin))
            throw ConfigError(origin + ": sweep bounds must satisfy 0 < wmin < wmax");
        if (pts < 2.0 || pts != std::floor(pts) || pts > 1e7)
            throw ConfigError(origin + ": 'sweep.points' must be an integer >= 2");
        cfg.sweep.points = static_cast<int>(pts);
    }

    if (doc.contains("sim")) {
        const auto& sm = doc["sim"];
        if (!sm.is_object())
            throw ConfigError(origin + ": 'sim' must be an object");
        detail::reject_unknown_keys(sm, {"nx", "dt", "t_end"}, origin, " in 'sim'");
        SimSpec spec{};
        const double nx = detail::number_field(sm, "nx", origin);
        spec.dt = detail::number_field(sm, "dt", origin);
        spec.t_end = detail::number_field(sm, "t_end", origin);
        if (nx < 16.0 || nx != std::floor(nx) || nx > 1e6)
            throw ConfigError(origin + ": 'sim.nx' must be an integer >= 16");
        if (!(spec.dt > 0.0))
            throw ConfigError(origin + ": 'sim.dt' must be > 0");
        if (!(spec.t_end > 0.0))
            throw ConfigError(origin + ": 'sim.t_end' must be > 0");
        spec.nx = static_cast<int>(nx);
        cfg.sim = spec;
    }

    return cfg;
}

inline ChannelConfig load_channel_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(path + ": cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_channel_config(buf.str(), path);
}

/// Shortest decimal form with 9 significant digits.
inline std::string format_sig9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

/// One row of the frequency-sweep CSV: the end-to-end gain, its three
/// cascade factors, and the unwrapped end-to-end phase.
struct SweepCsvRow {
    double omega;
    double gain_db_channel;
    double gain_db_g1;
    double gain_db_gff;
    double gain_db_gd;
    double phase_deg_channel;
};

/// Evaluate the channel and its cascade factors over a log grid. The rows
/// satisfy gain_db_channel = gain_db_g1 + gain_db_gff + gain_db_gd up to
/// rounding, and the channel phase is unwrapped across rows.
inline std::vector<SweepCsvRow> compute_sweep_rows(const DiffusionChannel& chan,
                                                   const BoundaryLayer& bl,
                                                   const SweepSpec& sweep) {
    const std::vector<double> grid = detail::log_grid(sweep.wmin, sweep.wmax, sweep.points);
    std::vector<SweepCsvRow> rows;
    rows.reserve(grid.size());
    double prev_phase = 0.0;
    bool first = true;
    for (double w : grid) {
        const Complex s(0.0, w);
        const Complex g1 = eval_rational(bl.transmission, s);
        const Complex gff = flux_feedback_tf(bl, chan, s);
        const Complex gd = receiver_concentration_tf(chan, s);
        const Complex ch = g1 * gff * gd;
        double phase = std::arg(ch) * 180.0 / std::numbers::pi;
        if (!first)
            phase = detail::unwrap_step(prev_phase, phase);
        rows.push_back({w, gain_db(ch), gain_db(g1), gain_db(gff), gain_db(gd), phase});
        prev_phase = phase;
        first = false;
    }
    return rows;
}

inline void write_bode_csv(std::ostream& os, const std::vector<SweepCsvRow>& rows) {
    os << "omega_rad_s,gain_db_channel,gain_db_g1,gain_db_gff,gain_db_gd,phase_deg_channel\n";
    for (const SweepCsvRow& r : rows)
        os << format_sig9(r.omega) << ',' << format_sig9(r.gain_db_channel) << ','
           << format_sig9(r.gain_db_g1) << ',' << format_sig9(r.gain_db_gff) << ','
           << format_sig9(r.gain_db_gd) << ',' << format_sig9(r.phase_deg_channel) << '\n';
}

inline void write_sim_csv(std::ostream& os, const SimResult& res) {
    os << "t_s,v,u_L\n";
    for (std::size_t i = 0; i < res.times.size(); ++i)
        os << format_sig9(res.times[i]) << ',' << format_sig9(res.v_series[i]) << ','
           << format_sig9(res.receiver_series[i]) << '\n';
}

} // namespace mcchan

#endif
