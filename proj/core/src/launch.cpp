#include "coorbital/launch.hpp"

#include "coorbital/action_angle.hpp"
#include "coorbital/errors.hpp"
#include "coorbital/freq_analysis.hpp"
#include "coorbital/resonant_frame.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace coorbital {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Continue `angle` (given modulo 2 pi) from the previous unwrapped value.
double unwrap(double previous, double angle) { return previous + std::remainder(angle - previous, kTwoPi); }

// Strongest component whose frequency is not the mean (zero) term.
double dominant_frequency(const std::vector<std::complex<double>>& s, double dt, double floor) {
    const auto comps = fundamental_frequencies(s, dt, 4);
    for (const auto& c : comps) {
        if (std::abs(c.frequency) > floor) return std::abs(c.frequency);
    }
    return 0.0;
}

}  // namespace

LaunchReport launch_from_torus(const MassConfig& cfg, const LaunchOptions& opt) {
    const DerivedConstants c = derive_constants(cfg);
    const double fast = fast_period(cfg);
    const double dt = opt.dt > 0.0 ? opt.dt : fast / 200.0;
    const double t_end = opt.periods * fast;

    const double theta = 0.0;
    const HorseshoeTorus torus = torus_embedding(opt.delta, std::span<const double>(&theta, 1), c, cfg);
    const CartesianState s0 = poincare_to_cartesian(torus.point(0, 0.0), c);

    IntegrationOptions io;
    io.sample_stride = std::max<std::size_t>(1, opt.sample_stride);
    io.rk_tolerance = opt.rk_tolerance;
    const double out_dt = opt.scheme == Scheme::splitting ? dt : dt * static_cast<double>(io.sample_stride);

    LaunchReport rep;
    rep.trajectory = integrate(s0, cfg, t_end, out_dt, opt.scheme, io);
    rep.nu_model = torus.omega[0];
    rep.upsilon_model = torus.omega[1];

    const Trajectory& tr = rep.trajectory;
    const double e0 = tr.energy_series.front();
    const double c0 = tr.angmom_series.front();
    const std::size_t n = tr.times.size();
    rep.zeta1.resize(n);
    rep.zeta2.resize(n);
    std::vector<double> lam1(n), lam2(n);
    double d0 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const PoincareState p = cartesian_to_poincare(tr.states[k], c);
        const ResonantState r = to_resonant(p, c);
        const double d = dalembert_integral(r);
        if (k == 0) {
            d0 = d;
            lam1[0] = p.lambda1;
            lam2[0] = p.lambda2;
            rep.zeta1[0] = torus.F_samples[0];  // in (0, 2 pi)
        } else {
            lam1[k] = unwrap(lam1[k - 1], p.lambda1);
            lam2[k] = unwrap(lam2[k - 1], p.lambda2);
            rep.zeta1[k] = unwrap(rep.zeta1[k - 1], p.lambda1 - p.lambda2);
        }
        rep.zeta2[k] = lam2[k];
        rep.energy_drift = std::max(rep.energy_drift, std::abs(tr.energy_series[k] - e0) / std::abs(e0));
        rep.angmom_drift = std::max(rep.angmom_drift, std::abs(tr.angmom_series[k] - c0) / std::abs(c0));
        rep.dalembert_drift = std::max(rep.dalembert_drift, std::abs(d - d0) / std::abs(c0));
    }

    const auto [lo, hi] = std::minmax_element(rep.zeta1.begin(), rep.zeta1.end());
    rep.libration_amplitude = *hi - *lo;
    rep.librates = *lo > 0.0 && *hi < kTwoPi;

    if (n < 256) return rep;
    const double sample_dt = tr.times[1] - tr.times[0];
    // drop a short final sample if the last step was shortened
    std::size_t m = n;
    if (std::abs((tr.times[n - 1] - tr.times[n - 2]) - sample_dt) > 1e-9 * sample_dt) --m;

    std::vector<std::complex<double>> libration(m), fast_phase(m), heavy(m);
    const bool first_heavier = cfg.m1 >= cfg.m2;
    for (std::size_t k = 0; k < m; ++k) {
        libration[k] = rep.zeta1[k] - std::numbers::pi;
        fast_phase[k] = std::polar(1.0, rep.zeta2[k]);
        heavy[k] = std::polar(1.0, first_heavier ? lam1[k] : lam2[k]);
    }
    const double span = sample_dt * static_cast<double>(m);
    const double floor = 2.0 * kTwoPi / span;  // two bins: below this a frequency is not resolved
    rep.nu_measured = dominant_frequency(libration, sample_dt, floor);
    rep.upsilon_measured = dominant_frequency(fast_phase, sample_dt, floor);

    const ResidualResult qr = quasiperiodic_residual(heavy, sample_dt, {rep.nu_measured, rep.upsilon_measured});
    rep.residual = qr.residual;
    rep.residual_condition = qr.condition_number;
    rep.residual_ill_conditioned = qr.ill_conditioned;
    return rep;
}

}  // namespace coorbital
