#ifndef MCCHAN_RESPONSE_HPP
#define MCCHAN_RESPONSE_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "boundary.hpp"
#include "diffusion_tf.hpp"
#include "errors.hpp"

namespace mcchan {

/// Frequency response evaluated on the imaginary axis, omega in rad/s.
using FrequencyResponse = std::function<Complex(double)>;

struct BodePoint {
    double omega;     ///< rad/s
    double gain_db;
    double phase_deg; ///< unwrapped
};

/// Result of a threshold-crossing search. The bracket is the final bisection
/// interval, so bracket_lo < omega_c < bracket_hi always holds.
struct CutoffResult {
    double omega_c;
    double bracket_lo;
    double bracket_hi;
    int iterations;
};

enum class LimitingSubsystem { BoundaryLimited, DiffusionLimited };

struct ChannelClassification {
    LimitingSubsystem limiter;
    CutoffResult boundary;  ///< cutoff of the boundary system alone
    CutoffResult diffusion; ///< cutoff of the diffusion path alone
};

inline double gain_db(Complex v) {
    const double mag = std::abs(v);
    if (mag == 0.0)
        throw std::domain_error("gain_db: zero magnitude has no decibel value");
    if (!std::isfinite(mag))
        throw std::invalid_argument("gain_db: non-finite magnitude");
    return 20.0 * std::log10(mag);
}

namespace detail {

inline std::vector<double> log_grid(double wmin, double wmax, int n) {
    if (!(wmin > 0.0) || !(wmax > wmin))
        throw std::invalid_argument("frequency band must satisfy 0 < wmin < wmax");
    if (n < 2)
        throw std::invalid_argument("frequency grid needs at least 2 points");
    std::vector<double> w(static_cast<std::size_t>(n));
    const double ratio = wmax / wmin;
    for (int i = 0; i < n; ++i)
        w[static_cast<std::size_t>(i)] = wmin * std::pow(ratio, double(i) / double(n - 1));
    w.front() = wmin;
    w.back() = wmax;
    return w;
}

/// Shift `raw` by multiples of 360 until it sits within 180 of `prev`.
inline double unwrap_step(double prev, double raw) {
    double p = raw;
    while (p - prev > 180.0)
        p -= 360.0;
    while (prev - p > 180.0)
        p += 360.0;
    return p;
}

inline Complex eval_tagged(const FrequencyResponse& f, double omega) {
    try {
        return f(omega);
    } catch (const SingularityError& e) {
        throw SingularityError(std::string(e.what()) + " (omega = " + std::to_string(omega) + " rad/s)");
    }
}

} // namespace detail

/// Sample a frequency response on a log grid and unwrap the phase so that
/// consecutive points never jump by more than 180 degrees.
inline std::vector<BodePoint> bode_sweep(const FrequencyResponse& f,
                                         double wmin, double wmax, int n) {
    const std::vector<double> grid = detail::log_grid(wmin, wmax, n);
    std::vector<BodePoint> pts;
    pts.reserve(grid.size());
    double prev_phase = 0.0;
    bool first = true;
    for (double w : grid) {
        const Complex v = detail::eval_tagged(f, w);
        double phase = std::arg(v) * 180.0 / std::numbers::pi;
        if (!first)
            phase = detail::unwrap_step(prev_phase, phase);
        pts.push_back({w, gain_db(v), phase});
        prev_phase = phase;
        first = false;
    }
    return pts;
}

/// Receiver-end gain of the diffusion path in the dimensionless frequency
/// w_hat = L sqrt(omega / (2 mu)):
///
///   g(w_hat) = 2 exp(-w_hat) / sqrt(1 + 2 exp(-2 w_hat) cos(2 w_hat) + exp(-4 w_hat)).
///
/// g(0) = 1 and g decreases strictly, approaching 2 exp(-w_hat).
inline double dimensionless_gain(double w_hat) {
    if (!(w_hat >= 0.0))
        throw std::invalid_argument("dimensionless_gain: w_hat must be >= 0");
    const double e1 = std::exp(-w_hat);
    const double e2 = std::exp(-2.0 * w_hat);
    const double e4 = std::exp(-4.0 * w_hat);
    return 2.0 * e1 / std::sqrt(1.0 + 2.0 * e2 * std::cos(2.0 * w_hat) + e4);
}

/// F(w_hat) = exp(-4 w_hat) + 2 exp(-2 w_hat) sin(2 w_hat). F(0) = 1 and
/// F < 1 for every w_hat > 0, which is what makes dimensionless_gain strictly
/// decreasing: g'(w_hat) is proportional to F(w_hat) - 1.
inline double monotonicity_bound(double w_hat) {
    if (!(w_hat >= 0.0))
        throw std::invalid_argument("monotonicity_bound: w_hat must be >= 0");
    return std::exp(-4.0 * w_hat) + 2.0 * std::exp(-2.0 * w_hat) * std::sin(2.0 * w_hat);
}

/// Root of g(w_hat) = threshold in dimensionless frequency, found by bisection.
struct DimensionlessCutoff {
    double w_hat;
    double bracket_lo;
    double bracket_hi;
    int iterations;
};

/// Solve g(w_hat) = 10^(threshold_db / 20). Monotonicity makes plain bisection
/// exact; the default -6 dB root sits near w_hat = 1.44.
inline DimensionlessCutoff dimensionless_cutoff(double threshold_db = -6.0) {
    if (!(threshold_db < 0.0))
        throw std::invalid_argument("dimensionless_cutoff: threshold must be below 0 dB");
    const double target = std::pow(10.0, threshold_db / 20.0);
    double lo = 0.0;
    double hi = 1.0;
    while (dimensionless_gain(hi) > target)
        hi *= 2.0;
    int iters = 0;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        (dimensionless_gain(mid) > target ? lo : hi) = mid;
        ++iters;
    }
    return {0.5 * (lo + hi), lo, hi, iters};
}

/// Cutoff of the diffusion path alone, mapped back to physical frequency:
/// omega = 2 mu w_hat^2 / L^2.
inline CutoffResult diffusion_cutoff(const DiffusionChannel& chan, double threshold_db = -6.0) {
    const DimensionlessCutoff d = dimensionless_cutoff(threshold_db);
    const double scale = 2.0 * chan.mu / (chan.L * chan.L);
    return {scale * d.w_hat * d.w_hat,
            scale * d.bracket_lo * d.bracket_lo,
            scale * d.bracket_hi * d.bracket_hi,
            d.iterations};
}

/// Smallest omega in [wmin, wmax] where |f| falls to the threshold. A log-spaced
/// scan brackets the first downward crossing (the gain need not be monotone),
/// then geometric bisection refines it to 1e-9 relative width.
inline CutoffResult find_cutoff(const FrequencyResponse& f,
                                double wmin, double wmax,
                                int n_scan = 400, double threshold_db = -6.0) {
    const std::vector<double> grid = detail::log_grid(wmin, wmax, n_scan);
    const double target = std::pow(10.0, threshold_db / 20.0);
    if (!(std::abs(detail::eval_tagged(f, wmin)) > target))
        throw std::invalid_argument("find_cutoff: gain already at or below the threshold at wmin");
    double lo = wmin;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double w = grid[i];
        if (std::abs(detail::eval_tagged(f, w)) <= target) {
            double hi = w;
            int iters = 0;
            while (hi / lo - 1.0 > 1e-9) {
                const double mid = std::sqrt(lo * hi);
                (std::abs(detail::eval_tagged(f, mid)) > target ? lo : hi) = mid;
                ++iters;
            }
            return {std::sqrt(lo * hi), lo, hi, iters};
        }
        lo = w;
    }
    throw NoCrossingError("find_cutoff: gain never reached the threshold in the scanned band");
}

/// Longest channel whose diffusion path still passes the band edge omega_b at
/// the given threshold: L_max = sqrt(2) * w_hat_star * sqrt(mu / omega_b),
/// with w_hat_star recomputed from the dimensionless cutoff root.
inline double max_distance(double mu, double omega_b, double threshold_db = -6.0) {
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("max_distance: mu must be positive and finite");
    if (!(omega_b > 0.0) || !std::isfinite(omega_b))
        throw std::invalid_argument("max_distance: omega_b must be positive and finite");
    const double w_star = dimensionless_cutoff(threshold_db).w_hat;
    return std::sqrt(2.0) * w_star * std::sqrt(mu / omega_b);
}

/// Compare the standalone cutoffs of the two cascaded subsystems and report
/// which one caps the end-to-end bandwidth. The boundary cutoff is searched
/// over [1e-5, 1e2] rad/s; errors from either search propagate.
inline ChannelClassification classify_limiting_subsystem(const DiffusionChannel& chan,
                                                         const BoundaryLayer& bl,
                                                         double threshold_db = -6.0) {
    const CutoffResult diff = diffusion_cutoff(chan, threshold_db);
    const CutoffResult bound = find_cutoff(
        [&](double w) { return boundary_tf(bl, chan, Complex(0.0, w)); },
        1e-5, 1e2, 400, threshold_db);
    const LimitingSubsystem lim = diff.omega_c < bound.omega_c
                                      ? LimitingSubsystem::DiffusionLimited
                                      : LimitingSubsystem::BoundaryLimited;
    return {lim, bound, diff};
}

} // namespace mcchan

#endif
