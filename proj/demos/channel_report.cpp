// Walk one channel through the whole API: transfer functions, cutoffs,
// classification, design bound, and a time-domain cross-check.
#include <cstdio>
#include <numbers>

#include <mcchan/mcchan.hpp>

int main() {
    const mcchan::DiffusionChannel chan(490.0, 100.0);
    const mcchan::PassiveMembrane mem(0.05, 9.9);
    const mcchan::BoundaryLayer bl = mcchan::passive_boundary(mem);

    std::printf("channel: mu = %g um^2/s, L = %g um, k = %g 1/s, mu_hat = %g um/s\n\n",
                chan.mu, chan.L, mem.k, mem.mu_hat);

    // Sweep densely so the phase unwraps cleanly, print every fortieth point.
    const auto sweep = mcchan::bode_sweep(
        [&](double w) { return mcchan::channel_tf(bl, chan, {0.0, w}); }, 1e-4, 1e1, 401);
    std::printf("%12s %12s %12s\n", "omega", "gain_db", "phase_deg");
    for (std::size_t i = 0; i < sweep.size(); i += 40)
        std::printf("%12.4g %12.4f %12.2f\n", sweep[i].omega, sweep[i].gain_db,
                    sweep[i].phase_deg);

    const auto cls = mcchan::classify_limiting_subsystem(chan, bl);
    std::printf("\nboundary cutoff  = %.6g rad/s\n", cls.boundary.omega_c);
    std::printf("diffusion cutoff = %.6g rad/s\n", cls.diffusion.omega_c);
    std::printf("limited by       = %s\n",
                cls.limiter == mcchan::LimitingSubsystem::DiffusionLimited ? "diffusion"
                                                                           : "boundary");
    std::printf("max distance for the boundary band edge = %.6g um\n",
                mcchan::max_distance(chan.mu, cls.boundary.omega_c));

    const double omega = 0.01;
    const double dx = chan.L / 24;
    const mcchan::SimConfig sim{chan, mem, 24,
                                mcchan::kStabilitySafety * dx * dx / (2.0 * chan.mu), 6500.0,
                                mcchan::InputSignal::sine(1.0, omega)};
    const auto fit = mcchan::sinusoid_response(sim, omega, 1.0);
    const auto analytic = mcchan::channel_tf(bl, chan, {0.0, omega});
    std::printf("\nsolver vs analytic at omega = %g rad/s: |G| %.5f vs %.5f, phase %.2f vs %.2f deg\n",
                omega, fit.ratio, std::abs(analytic), fit.phase_deg,
                std::arg(analytic) * 180.0 / std::numbers::pi);
    return 0;
}
