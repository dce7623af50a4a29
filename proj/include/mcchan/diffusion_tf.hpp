#ifndef MCCHAN_DIFFUSION_TF_HPP
#define MCCHAN_DIFFUSION_TF_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "errors.hpp"

namespace mcchan {

using Complex = std::complex<double>;

/// Bounded 1-D diffusion medium: du/dt = mu * d2u/dr2 on r in [0, L],
/// driven by the concentration at r = 0 and closed by a zero-flux wall at r = L.
struct DiffusionChannel {
    double mu; ///< diffusion coefficient, um^2/s
    double L;  ///< channel length, um

    DiffusionChannel(double mu_, double L_) : mu(mu_), L(L_) {
        if (!(mu > 0.0) || !std::isfinite(mu))
            throw std::invalid_argument("DiffusionChannel: mu must be positive and finite");
        if (!(L > 0.0) || !std::isfinite(L))
            throw std::invalid_argument("DiffusionChannel: L must be positive and finite");
    }
};

namespace detail {

inline void require_right_half_plane(Complex s, const char* fn) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
        throw std::invalid_argument(std::string(fn) + ": s must be finite");
    if (s.real() < 0.0)
        throw std::domain_error(std::string(fn) + ": Re(s) must be >= 0");
}

/// Principal square root of s/mu. Re(sqrt) >= 0 on the closed right half plane,
/// so every exp(-d * wavenumber) with d >= 0 has magnitude <= 1.
inline Complex diffusion_wavenumber(const DiffusionChannel& chan, Complex s) {
    return std::sqrt(s / chan.mu);
}

inline Complex checked(Complex v, const char* fn) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::overflow_error(std::string(fn) + ": evaluation overflowed");
    return v;
}

} // namespace detail

/// One-way propagation factor exp(-d * sqrt(s/mu)) over a travel distance d >= 0.
/// Building block for the image-sum form of the bounded-channel responses.
inline Complex diffusion_element(const DiffusionChannel& chan, double distance, Complex s) {
    detail::require_right_half_plane(s, "diffusion_element");
    if (!(distance >= 0.0) || !std::isfinite(distance))
        throw std::invalid_argument("diffusion_element: distance must be >= 0 and finite");
    return detail::checked(std::exp(-distance * detail::diffusion_wavenumber(chan, s)),
                           "diffusion_element");
}

/// Concentration response at position r to the concentration imposed at r = 0:
///
///   G_D(s, r) = (exp(-r q) + exp((r - 2L) q)) / (1 + exp(-2L q)),  q = sqrt(s/mu).
///
/// The direct wave plus its reflection off the zero-flux wall, normalized by the
/// wall-to-sender round trip. Dimensionless; |G_D| <= 1 on the imaginary axis.
inline Complex concentration_tf(const DiffusionChannel& chan, double r, Complex s) {
    detail::require_right_half_plane(s, "concentration_tf");
    if (!(r >= 0.0) || !(r <= chan.L))
        throw std::invalid_argument("concentration_tf: r must lie in [0, L]");
    const Complex q = detail::diffusion_wavenumber(chan, s);
    const Complex den = 1.0 + std::exp(-2.0 * chan.L * q);
    if (std::abs(den) < 1e-300)
        throw SingularityError("concentration_tf: reflection denominator vanished");
    return detail::checked((std::exp(-r * q) + std::exp((r - 2.0 * chan.L) * q)) / den,
                           "concentration_tf");
}

/// Same response assembled from diffusion_element blocks,
///
///   (E(r) + E(2L - r)) / (1 + E(2L)),  E(d) = exp(-d sqrt(s/mu)),
///
/// mirroring the feedback structure of the bounded medium. Agrees with
/// concentration_tf to rounding; kept as an independent evaluation path.
inline Complex concentration_tf_composed(const DiffusionChannel& chan, double r, Complex s) {
    if (!(r >= 0.0) || !(r <= chan.L))
        throw std::invalid_argument("concentration_tf_composed: r must lie in [0, L]");
    const Complex direct = diffusion_element(chan, r, s);
    const Complex reflected = diffusion_element(chan, 2.0 * chan.L - r, s);
    const Complex round_trip = diffusion_element(chan, 2.0 * chan.L, s);
    const Complex den = 1.0 + round_trip;
    if (std::abs(den) < 1e-300)
        throw SingularityError("concentration_tf_composed: reflection denominator vanished");
    return detail::checked((direct + reflected) / den, "concentration_tf_composed");
}

/// Spatial-gradient response du/dr at position r to the concentration at r = 0:
///
///   G_F(s, r) = sqrt(s/mu) * (-exp(-r q) + exp((r - 2L) q)) / (1 + exp(-2L q)).
///
/// Units 1/um. The r = 0 value closes the flux feedback loop of the boundary layer.
inline Complex gradient_tf(const DiffusionChannel& chan, double r, Complex s) {
    detail::require_right_half_plane(s, "gradient_tf");
    if (!(r >= 0.0) || !(r <= chan.L))
        throw std::invalid_argument("gradient_tf: r must lie in [0, L]");
    const Complex q = detail::diffusion_wavenumber(chan, s);
    const Complex den = 1.0 + std::exp(-2.0 * chan.L * q);
    if (std::abs(den) < 1e-300)
        throw SingularityError("gradient_tf: reflection denominator vanished");
    return detail::checked(q * (-std::exp(-r * q) + std::exp((r - 2.0 * chan.L) * q)) / den,
                           "gradient_tf");
}

/// Receiver-end concentration response, G_D at r = L:
///
///   G_D(s, L) = 2 exp(-L q) / (1 + exp(-2L q)) = 1 / cosh(L q).
///
/// For L sqrt(|s|/mu) >> 1 this decays like 2 exp(-L sqrt(s/mu)).
inline Complex receiver_concentration_tf(const DiffusionChannel& chan, Complex s) {
    detail::require_right_half_plane(s, "receiver_concentration_tf");
    const Complex q = detail::diffusion_wavenumber(chan, s);
    const Complex den = 1.0 + std::exp(-2.0 * chan.L * q);
    if (std::abs(den) < 1e-300)
        throw SingularityError("receiver_concentration_tf: reflection denominator vanished");
    return detail::checked(2.0 * std::exp(-chan.L * q) / den, "receiver_concentration_tf");
}

/// Sender-end gradient response, G_F at r = 0:
///
///   G_F(s, 0) = sqrt(s/mu) * (exp(-2L q) - 1) / (1 + exp(-2L q))
///             = -sqrt(s/mu) * tanh(L sqrt(s/mu)).
///
/// Negative real part at s > 0: the medium always drains the boundary.
inline Complex sender_gradient_tf(const DiffusionChannel& chan, Complex s) {
    detail::require_right_half_plane(s, "sender_gradient_tf");
    const Complex q = detail::diffusion_wavenumber(chan, s);
    const Complex e2 = std::exp(-2.0 * chan.L * q);
    const Complex den = 1.0 + e2;
    if (std::abs(den) < 1e-300)
        throw SingularityError("sender_gradient_tf: reflection denominator vanished");
    return detail::checked(q * (e2 - 1.0) / den, "sender_gradient_tf");
}

} // namespace mcchan

#endif
