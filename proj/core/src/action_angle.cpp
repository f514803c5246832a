#include "coorbital/action_angle.hpp"

#include "coorbital/errors.hpp"
#include "coorbital/resonant_frame.hpp"
#include "coorbital/separatrix.hpp"
#include "quadrature.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace coorbital {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kWellCurvature = 7.0 / 24.0;

void check_mode_range(double delta, QuadratureMode mode) {
    const bool ok = mode == QuadratureMode::direct ? (delta >= kDirectMinDelta && delta <= kDirectMaxDelta)
                                                   : (delta >= kSplitMinDelta && delta <= kSplitMaxDelta);
    if (!ok || !std::isfinite(delta)) {
        throw DomainError("delta = " + std::to_string(delta) + " outside the range of the " +
                          (mode == QuadratureMode::direct ? "direct" : "split") + " quadrature");
    }
}

// Breakpoints in u = sqrt(phi - phi_min) placed at distances sqrt(delta) * 10^j
// below pi, so each piece sees the saddle on its own length scale.
std::vector<double> saddle_breaks(double phi_lo, double delta) {
    const double span = kPi - phi_lo;
    std::vector<double> psi;
    for (double p = std::sqrt(delta); p < 0.5 * span; p *= 10.0) psi.push_back(p);
    std::vector<double> u{0.0};
    for (auto it = psi.rbegin(); it != psi.rend(); ++it) u.push_back(std::sqrt(span - *it));
    u.push_back(std::sqrt(span));
    return u;
}

// (7/24) psi^2 - (1 + F(pi + psi)), without cancellation
double well_defect(double psi) {
    const double t = 0.25 * psi;
    double t_minus_sin;
    if (std::abs(t) > 0.3) {
        t_minus_sin = t - std::sin(t);
    } else {
        const double t2 = t * t;
        double term = t * t2 / 6.0;
        t_minus_sin = term;
        for (int k = 2; k < 12; ++k) {
            term *= -t2 / ((2.0 * k) * (2.0 * k + 1.0));
            t_minus_sin += term;
        }
    }
    const double st = std::sin(t);
    const double s = 2.0 * st * st;
    const double num = 14.0 * t_minus_sin * (t + st) - 0.875 * psi * psi * s + s * s * (12.0 - 4.0 * s);
    return num / (3.0 * (1.0 - s));
}

detail::QuadratureResult direct_integral(double delta) {
    const LevelPotential U(delta);
    auto f = [&](double u) { return 2.0 * u / std::sqrt(U.above_min(u * u)); };
    return detail::integrate(f, saddle_breaks(U.phi_min(), delta));
}

detail::QuadratureResult split_integral(double delta) {
    const LevelPotential U(delta);
    // piece 1: phi_min .. pi/3
    const double u_third = std::sqrt(kPi / 3.0 - U.phi_min());
    auto near_min = [&](double u) { return 2.0 * u / std::sqrt(U.above_min(u * u)); };
    const auto p1 = detail::integrate(near_min, 0.0, u_third);

    // piece 3: pi/3 .. pi, in psi = phi - pi
    auto correction = [&](double psi) {
        const double u_full = U.from_opposition(psi);
        const double u_well = delta + kWellCurvature * psi * psi;
        const double su = std::sqrt(u_full), sw = std::sqrt(u_well);
        // divided step by step: the product underflows for tiny delta
        return well_defect(psi) / su / sw / (su + sw);
    };
    std::vector<double> breaks{-2.0 * kPi / 3.0};
    std::vector<double> inner;
    for (double p = std::sqrt(delta); p < 1.0; p *= 10.0) inner.push_back(-p);
    std::reverse(inner.begin(), inner.end());
    breaks.insert(breaks.end(), inner.begin(), inner.end());
    breaks.push_back(0.0);
    const auto p3 = detail::integrate(correction, breaks);

    return {p1.value + parabolic_well_integral(delta) + p3.value, p1.error + p3.error};
}

double nu_from_integral(double integral, const DerivedConstants& c, const MassConfig& cfg) {
    return kPi * cfg.upsilon0 * std::sqrt(cfg.epsilon * c.A * c.B) / integral;
}

double area_integral(double delta) {
    const LevelPotential U(delta);
    auto f = [&](double u) { return 2.0 * u * std::sqrt(std::max(0.0, U.above_min(u * u))); };
    return detail::integrate(f, saddle_breaks(U.phi_min(), delta)).value;
}

double nu_derivative(double delta, const DerivedConstants& c, const MassConfig& cfg, QuadratureMode mode) {
    const QuadratureMode m = delta < kSplitSwitchDelta ? QuadratureMode::split : mode;
    auto nu_at = [&](double x) {
        const double d = std::exp(x);
        const double I = m == QuadratureMode::split ? split_integral(d).value : direct_integral(d).value;
        return nu_from_integral(I, c, cfg);
    };
    const double x = std::log(delta);
    auto stencil = [&](double h) {
        return (nu_at(x - 2 * h) - 8.0 * nu_at(x - h) + 8.0 * nu_at(x + h) - nu_at(x + 2 * h)) / (12.0 * h);
    };
    const double h = std::log(1.05);
    const double coarse = stencil(h), fine = stencil(0.5 * h);
    return (16.0 * fine - coarse) / 15.0 / delta;
}

}  // namespace

double parabolic_well_integral(double delta) {
    return std::sqrt(24.0 / 7.0) * std::asinh(std::sqrt(7.0 / 54.0) * kPi / std::sqrt(delta));
}

ReducedIntegral reduced_period_integral(double delta, QuadratureMode mode) {
    check_mode_range(delta, mode);
    const auto r = mode == QuadratureMode::direct ? direct_integral(delta) : split_integral(delta);
    return {r.value, r.error};
}

FrequencyRecord period(double delta, const DerivedConstants& c, const MassConfig& cfg, QuadratureMode mode) {
    const ReducedIntegral I = reduced_period_integral(delta, mode);
    FrequencyRecord rec;
    rec.delta = delta;
    rec.T = 2.0 * I.value / (cfg.upsilon0 * std::sqrt(cfg.epsilon * c.A * c.B));
    rec.nu = 2.0 * kPi / rec.T;
    rec.nu_prime = nu_derivative(delta, c, cfg, mode);
    rec.J1 = 2.0 / kPi * std::sqrt(cfg.epsilon * c.B / c.A) * area_integral(delta);
    return rec;
}

double nu_asymptotic(double delta, const DerivedConstants& c, const MassConfig& cfg) {
    return cfg.upsilon0 * std::sqrt(cfg.epsilon) * c.K / std::abs(std::log(delta));
}

double action_J1(double delta, const DerivedConstants& c, const MassConfig& cfg) {
    check_mode_range(delta, QuadratureMode::direct);
    return 2.0 / kPi * std::sqrt(cfg.epsilon * c.B / c.A) * area_integral(delta);
}

namespace {

using Planar = std::array<double, 2>;  // (phi, q) with I1 = sqrt(eps B / A) q

struct MechanicalRun {
    std::vector<Planar> samples;
    double period_tau = 0.0;
    double closure = 0.0;
    double energy_error = 0.0;
};

// Integrates d phi/d tau = -2 q, d q/d tau = -F'(phi) with tau = upsilon0 sqrt(eps A B) t.
// Samples at the sorted times taus; measures the period when asked.
MechanicalRun run_mechanical(double delta, const std::vector<double>& taus, bool measure_period) {
    namespace odeint = boost::numeric::odeint;
    const double phi0 = phi_min(delta);
    const double level = 1.0 + delta;
    auto rhs = [](const Planar& x, Planar& dx, double) {
        dx[0] = -2.0 * x[1];
        dx[1] = -coupling_potential_slope(x[0]);
    };
    auto energy_of = [&](const Planar& x) {
        return std::abs(x[1] * x[1] - coupling_potential(x[0]) - level) / level;
    };

    MechanicalRun run;
    run.samples.resize(taus.size());
    const double tau_end = std::max(taus.empty() ? 0.0 : taus.back(), 0.0);

    auto st = odeint::make_dense_output(1e-15, 1e-13, odeint::runge_kutta_dopri5<Planar>());
    st.initialize(Planar{phi0, 0.0}, 0.0, 1e-3);
    std::size_t next = 0;
    while (next < taus.size() && taus[next] <= 0.0) run.samples[next++] = Planar{phi0, 0.0};

    bool period_found = !measure_period;
    double guard_tau = 10.0 * tau_end + 1e3;
    while (next < taus.size() || !period_found) {
        const double t_prev = st.current_time();
        const double q_prev = st.current_state()[1];
        st.do_step(rhs);
        const Planar& now = st.current_state();
        run.energy_error = std::max(run.energy_error, energy_of(now));
        while (next < taus.size() && taus[next] <= st.current_time()) {
            st.calc_state(taus[next], run.samples[next]);
            ++next;
        }
        if (!period_found && q_prev > 0.0 && now[1] <= 0.0) {
            double lo = t_prev, hi = st.current_time();
            Planar probe;
            for (int it = 0; it < 80 && hi - lo > 1e-15 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                st.calc_state(mid, probe);
                (probe[1] > 0.0 ? lo : hi) = mid;
            }
            run.period_tau = 0.5 * (lo + hi);
            st.calc_state(run.period_tau, probe);
            run.closure = std::hypot(probe[0] - phi0, probe[1]);
            period_found = true;
        }
        if (st.current_time() > guard_tau) throw NumericalError("mechanical orbit did not close");
    }
    return run;
}

}  // namespace

HorseshoeProfile horseshoe_profile(double delta, std::size_t n, const DerivedConstants& c, const MassConfig& cfg) {
    check_mode_range(delta, QuadratureMode::direct);
    if (n < 16) throw DomainError("horseshoe_profile: n must be at least 16");
    const double tau_scale = cfg.upsilon0 * std::sqrt(cfg.epsilon * c.A * c.B);
    const double action_scale = std::sqrt(cfg.epsilon * c.B / c.A);

    const MechanicalRun probe = run_mechanical(delta, {}, true);
    std::vector<double> taus(n);
    for (std::size_t k = 0; k < n; ++k) {
        taus[k] = probe.period_tau * static_cast<double>(k) / static_cast<double>(n - 1);
    }
    const MechanicalRun run = run_mechanical(delta, taus, false);

    HorseshoeProfile out;
    out.period = probe.period_tau / tau_scale;
    out.closure_error = probe.closure;
    out.energy_error = std::max(probe.energy_error, run.energy_error);
    out.times.resize(n);
    out.zeta1.resize(n);
    out.Z1.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.times[k] = taus[k] / tau_scale;
        out.zeta1[k] = run.samples[k][0];
        out.Z1[k] = action_scale * run.samples[k][1];
    }
    return out;
}

PoincareState HorseshoeTorus::point(std::size_t i, double theta2) const {
    const double z = G_samples.at(i) * std::sqrt(epsilon);
    PoincareState s;
    s.lambda1 = c1 + theta2 + (1.0 - kappa) * F_samples[i];
    s.lambda2 = c2 + theta2 - kappa * F_samples[i];
    s.Lambda1 = c3 + z;
    s.Lambda2 = c4 - z;
    return s;
}

HorseshoeTorus torus_embedding(double delta, std::span<const double> theta_grid, const DerivedConstants& c,
                               const MassConfig& cfg) {
    check_mode_range(delta, QuadratureMode::direct);
    const double integral = reduced_period_integral(delta, QuadratureMode::direct).value;
    const double period_tau = 2.0 * integral;

    // the orbit is periodic, so each angle maps into one period
    std::vector<std::size_t> order(theta_grid.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> phase(theta_grid.size());
    for (std::size_t i = 0; i < theta_grid.size(); ++i) {
        const double th = theta_grid[i] - 2.0 * kPi * std::floor(theta_grid[i] / (2.0 * kPi));
        phase[i] = th / (2.0 * kPi) * period_tau;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return phase[a] < phase[b]; });
    std::vector<double> taus(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) taus[k] = phase[order[k]];
    const MechanicalRun run = run_mechanical(delta, taus, false);

    HorseshoeTorus t;
    t.delta = delta;
    t.kappa = c.kappa;
    t.c3 = c.lambda10;
    t.c4 = c.lambda20;
    t.epsilon = cfg.epsilon;
    t.theta1_grid.assign(theta_grid.begin(), theta_grid.end());
    t.F_samples.resize(order.size());
    t.G_samples.resize(order.size());
    const double action_scale = std::sqrt(cfg.epsilon * c.B / c.A);
    const double level = level_energy(delta, c, cfg);
    for (std::size_t k = 0; k < order.size(); ++k) {
        const std::size_t i = order[k];
        t.F_samples[i] = run.samples[k][0];
        const double z1 = action_scale * run.samples[k][1];
        t.G_samples[i] = z1 / std::sqrt(cfg.epsilon);
        const double h = mechanical_H1(z1, t.F_samples[i], c, cfg);
        t.energy_defect = std::max(t.energy_defect, std::abs(h - level) / std::abs(level));
    }
    t.omega = {nu_from_integral(integral, c, cfg), cfg.upsilon0};
    return t;
}

}  // namespace coorbital
