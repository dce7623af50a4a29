#ifndef MCCHAN_BOUNDARY_HPP
#define MCCHAN_BOUNDARY_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "diffusion_tf.hpp"
#include "errors.hpp"

namespace mcchan {

/// Proper rational transfer function num(s)/den(s), coefficients in ascending
/// powers of s. Trailing zero numerator coefficients are trimmed, so the zero
/// function is represented by an empty numerator.
struct RationalTf {
    std::vector<double> num;
    std::vector<double> den;

    RationalTf(std::vector<double> num_, std::vector<double> den_)
        : num(std::move(num_)), den(std::move(den_)) {
        while (!num.empty() && num.back() == 0.0)
            num.pop_back();
        if (den.empty() || den.back() == 0.0)
            throw std::invalid_argument("RationalTf: denominator needs a nonzero leading coefficient");
        if (num.size() > den.size())
            throw std::invalid_argument("RationalTf: improper (numerator degree exceeds denominator)");
        for (double c : num)
            if (!std::isfinite(c))
                throw std::invalid_argument("RationalTf: non-finite numerator coefficient");
        for (double c : den)
            if (!std::isfinite(c))
                throw std::invalid_argument("RationalTf: non-finite denominator coefficient");
    }
};

/// First-order membrane between the signal y and the channel boundary:
/// dv/dt = k (y - v) + mu_hat * du/dr|_{r=0}.
struct PassiveMembrane {
    double k;      ///< permeation rate, 1/s
    double mu_hat; ///< flux coupling coefficient, um/s

    PassiveMembrane(double k_, double mu_hat_) : k(k_), mu_hat(mu_hat_) {
        if (!(k >= 0.0) || !std::isfinite(k))
            throw std::invalid_argument("PassiveMembrane: k must be >= 0 and finite");
        if (!(mu_hat >= 0.0) || !std::isfinite(mu_hat))
            throw std::invalid_argument("PassiveMembrane: mu_hat must be >= 0 and finite");
    }
};

namespace detail {

inline Complex horner(const std::vector<double>& coeffs, Complex s) {
    Complex acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;)
        acc = acc * s + coeffs[i];
    return acc;
}

} // namespace detail

inline Complex eval_rational(const RationalTf& tf, Complex s) {
    const Complex num = detail::horner(tf.num, s);
    const Complex den = detail::horner(tf.den, s);
    if (std::abs(den) < 1e-12 * std::max(1.0, std::abs(num)))
        throw SingularityError("eval_rational: denominator vanishes at the requested s");
    return num / den;
}

/// Signal-to-boundary transmission k/(s + k). Requires k > 0; the lag is
/// otherwise degenerate (zero numerator over a pole at the origin).
inline RationalTf transmission_tf(const PassiveMembrane& mem) {
    if (!(mem.k > 0.0))
        throw std::invalid_argument("transmission_tf: k must be > 0");
    return RationalTf({mem.k}, {mem.k, 1.0});
}

/// Flux-to-boundary coupling mu_hat/(s + k). mu_hat = 0 yields the zero function.
inline RationalTf flux_coupling_tf(const PassiveMembrane& mem) {
    if (!(mem.k > 0.0))
        throw std::invalid_argument("flux_coupling_tf: k must be > 0");
    return RationalTf({mem.mu_hat}, {mem.k, 1.0});
}

/// Boundary layer as a pair of rational blocks: the forward path from the
/// signal and the feedback path from the sender-end concentration gradient.
struct BoundaryLayer {
    RationalTf transmission;
    RationalTf flux_coupling;
};

inline BoundaryLayer passive_boundary(const PassiveMembrane& mem) {
    return BoundaryLayer{transmission_tf(mem), flux_coupling_tf(mem)};
}

namespace detail {

inline Complex flux_loop_factor(const BoundaryLayer& bl, const DiffusionChannel& chan, Complex s) {
    const Complex loop = 1.0 - eval_rational(bl.flux_coupling, s) * sender_gradient_tf(chan, s);
    if (std::abs(loop) < 1e-12)
        throw SingularityError("boundary flux loop is singular at the requested s");
    return loop;
}

} // namespace detail

/// Closed flux feedback loop 1 / (1 - G2(s) * G_F(s, 0)): how much the medium's
/// back-flux reshapes whatever the forward path injects at the boundary.
inline Complex flux_feedback_tf(const BoundaryLayer& bl, const DiffusionChannel& chan, Complex s) {
    return 1.0 / detail::flux_loop_factor(bl, chan, s);
}

/// Full boundary system, signal y to boundary concentration v:
/// G_B(s) = G1(s) / (1 - G2(s) * G_F(s, 0)).
inline Complex boundary_tf(const BoundaryLayer& bl, const DiffusionChannel& chan, Complex s) {
    return eval_rational(bl.transmission, s) / detail::flux_loop_factor(bl, chan, s);
}

/// End-to-end channel, signal y to receiver concentration u(t, L):
/// the boundary system cascaded with the receiver-end diffusion response.
inline Complex channel_tf(const BoundaryLayer& bl, const DiffusionChannel& chan, Complex s) {
    return receiver_concentration_tf(chan, s) * boundary_tf(bl, chan, s);
}

} // namespace mcchan

#endif
