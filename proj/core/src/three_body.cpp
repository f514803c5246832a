#include "coorbital/three_body.hpp"

#include "coorbital/errors.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <numbers>

namespace coorbital {

namespace {

void check_configuration(const CartesianState& s) {
    if (norm2(s.r1) == 0.0 || norm2(s.r2) == 0.0) throw DomainError("planet at the central body");
    if (norm2(s.r1 - s.r2) == 0.0) throw DomainError("planets collide");
}

double hill_radius(const MassConfig& cfg, const DerivedConstants& c) { return std::cbrt(cfg.epsilon) * c.a_star; }

using FlatState = std::array<double, 8>;

FlatState flatten(const CartesianState& s) {
    return {s.p1.x, s.p1.y, s.p2.x, s.p2.y, s.r1.x, s.r1.y, s.r2.x, s.r2.y};
}

CartesianState unflatten(const FlatState& f) {
    return {{f[0], f[1]}, {f[2], f[3]}, {f[4], f[5]}, {f[6], f[7]}};
}

void record(Trajectory& tr, double t, const CartesianState& s, const MassConfig& cfg) {
    tr.times.push_back(t);
    tr.states.push_back(s);
    tr.energy_series.push_back(hamiltonian_energy(s, cfg));
    tr.angmom_series.push_back(angular_momentum(s));
}

}  // namespace

EnergyParts energy_parts(const CartesianState& s, const MassConfig& cfg) {
    check_configuration(s);
    const DerivedConstants c = derive_constants(cfg);
    EnergyParts e;
    e.keplerian = norm2(s.p1) / (2.0 * c.mhat1) - c.mu1 * c.mhat1 / norm(s.r1) + norm2(s.p2) / (2.0 * c.mhat2) -
                  c.mu2 * c.mhat2 / norm(s.r2);
    e.perturbation = cfg.epsilon * (dot(s.p1, s.p2) / cfg.m0 - cfg.m1 * cfg.m2 / norm(s.r1 - s.r2));
    return e;
}

double keplerian_energy(const CartesianState& s, const MassConfig& cfg) { return energy_parts(s, cfg).keplerian; }
double perturbation_energy(const CartesianState& s, const MassConfig& cfg) {
    return energy_parts(s, cfg).perturbation;
}
double hamiltonian_energy(const CartesianState& s, const MassConfig& cfg) { return energy_parts(s, cfg).total(); }

StateDerivative equations_of_motion(const CartesianState& s, const MassConfig& cfg) {
    check_configuration(s);
    const DerivedConstants c = derive_constants(cfg);
    const double eps = cfg.epsilon;
    const double r1 = norm(s.r1), r2 = norm(s.r2);
    const Vec2 d = s.r1 - s.r2;
    const double dn = norm(d);
    const double a1 = c.mu1 * c.mhat1 / (r1 * r1 * r1);
    const double a2 = c.mu2 * c.mhat2 / (r2 * r2 * r2);
    const double ai = eps * cfg.m1 * cfg.m2 / (dn * dn * dn);

    StateDerivative out;
    out.dr1 = (1.0 / c.mhat1) * s.p1 + (eps / cfg.m0) * s.p2;
    out.dr2 = (1.0 / c.mhat2) * s.p2 + (eps / cfg.m0) * s.p1;
    out.dp1 = -a1 * s.r1 - ai * d;
    out.dp2 = -a2 * s.r2 + ai * d;
    return out;
}

double angular_momentum(const CartesianState& s) { return cross(s.r1, s.p1) + cross(s.r2, s.p2); }

double fast_period(const MassConfig& cfg) { return 2.0 * std::numbers::pi / cfg.upsilon0; }

SplittingIntegrator::SplittingIntegrator(const MassConfig& cfg) : cfg_(cfg), c_(derive_constants(cfg)) {}

namespace {

void add_compensated(double& x, double& carry, double dx) {
    const double y = dx - carry;
    const double t = x + y;
    carry = (t - x) - y;
    x = t;
}

void add_compensated(Vec2& x, Vec2& carry, const Vec2& dx) {
    add_compensated(x.x, carry.x, dx.x);
    add_compensated(x.y, carry.y, dx.y);
}

}  // namespace

void SplittingIntegrator::kick(CartesianState& s, CartesianState& carry, double h) const {
    const Vec2 d = s.r1 - s.r2;
    const double dn2 = norm2(d);
    const double f = h * cfg_.epsilon * cfg_.m1 * cfg_.m2 / (dn2 * std::sqrt(dn2));
    add_compensated(s.p1, carry.p1, -f * d);
    add_compensated(s.p2, carry.p2, f * d);
}

void SplittingIntegrator::couple(CartesianState& s, CartesianState& carry, double h) const {
    // H = eps p1.p2/m0 leaves the momenta unchanged
    const double f = h * cfg_.epsilon / cfg_.m0;
    const Vec2 d1 = f * s.p2, d2 = f * s.p1;
    add_compensated(s.r1, carry.r1, d1);
    add_compensated(s.r2, carry.r2, d2);
}

void SplittingIntegrator::drift(CartesianState& s, CartesianState& carry, double h) const {
    Vec2 dr1, dv1, dr2, dv2;
    kepler_increment(s.r1, (1.0 / c_.mhat1) * s.p1, c_.mu1, h, dr1, dv1);
    kepler_increment(s.r2, (1.0 / c_.mhat2) * s.p2, c_.mu2, h, dr2, dv2);
    add_compensated(s.r1, carry.r1, dr1);
    add_compensated(s.r2, carry.r2, dr2);
    add_compensated(s.p1, carry.p1, c_.mhat1 * dv1);
    add_compensated(s.p2, carry.p2, c_.mhat2 * dv2);
}

void SplittingIntegrator::second_order_step(CartesianState& s, CartesianState& carry, double h) const {
    kick(s, carry, 0.5 * h);
    couple(s, carry, 0.5 * h);
    drift(s, carry, h);
    couple(s, carry, 0.5 * h);
    kick(s, carry, 0.5 * h);
}

void SplittingIntegrator::step(CartesianState& s, CartesianState& carry, double h) const {
    static const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
    static const double w0 = -std::cbrt(2.0) * w1;
    second_order_step(s, carry, w1 * h);
    second_order_step(s, carry, w0 * h);
    second_order_step(s, carry, w1 * h);
}

void SplittingIntegrator::step(CartesianState& s, double h) const {
    CartesianState carry{};
    step(s, carry, h);
}

namespace {

Trajectory integrate_splitting(const CartesianState& s0, const MassConfig& cfg, double t_end, double dt,
                               const IntegrationOptions& opt) {
    const DerivedConstants c = derive_constants(cfg);
    if (dt > fast_period(cfg) / 50.0 * (1.0 + 1e-12)) {
        throw DomainError("splitting step must not exceed a fiftieth of the fast period");
    }
    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    const double h = t_end / static_cast<double>(n_steps);
    const std::size_t stride = std::max<std::size_t>(1, opt.sample_stride);
    const double r_hill = hill_radius(cfg, c);

    SplittingIntegrator stepper(cfg);
    Trajectory tr;
    CartesianState s = s0, carry{};
    record(tr, 0.0, s, cfg);
    for (std::size_t i = 1; i <= n_steps; ++i) {
        stepper.step(s, carry, h);
        const double t = static_cast<double>(i) * h;
        if (opt.hill_guard && norm(s.r1 - s.r2) < r_hill) {
            record(tr, t, s, cfg);
            tr.completed = false;
            tr.abort_reason = "planet separation fell below eps^(1/3) a_star at t = " + std::to_string(t);
            return tr;
        }
        if (i % stride == 0 || i == n_steps) record(tr, t, s, cfg);
    }
    return tr;
}

Trajectory integrate_rk(const CartesianState& s0, const MassConfig& cfg, double t_end, double dt,
                        const IntegrationOptions& opt) {
    namespace odeint = boost::numeric::odeint;
    const DerivedConstants c = derive_constants(cfg);
    const double r_hill = hill_radius(cfg, c);

    auto rhs = [&cfg](const FlatState& x, FlatState& dxdt, double /*t*/) {
        const StateDerivative d = equations_of_motion(unflatten(x), cfg);
        dxdt = {d.dp1.x, d.dp1.y, d.dp2.x, d.dp2.y, d.dr1.x, d.dr1.y, d.dr2.x, d.dr2.y};
    };

    auto stepper = odeint::make_dense_output(opt.rk_tolerance, opt.rk_tolerance,
                                             odeint::runge_kutta_dopri5<FlatState>());
    const double first_step = std::min(dt, fast_period(cfg) / 1000.0);
    stepper.initialize(flatten(s0), 0.0, first_step);

    Trajectory tr;
    record(tr, 0.0, s0, cfg);
    const auto n_samples = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    std::size_t next = 1;
    const double step_floor = 1e-12 * fast_period(cfg);

    while (next <= n_samples) {
        stepper.do_step(rhs);
        const FlatState& now = stepper.current_state();
        const CartesianState cs = unflatten(now);
        if (opt.hill_guard && norm(cs.r1 - cs.r2) < r_hill) {
            record(tr, stepper.current_time(), cs, cfg);
            tr.completed = false;
            tr.abort_reason = "planet separation fell below eps^(1/3) a_star at t = " +
                              std::to_string(stepper.current_time());
            return tr;
        }
        while (next <= n_samples) {
            const double ts = next == n_samples ? t_end : static_cast<double>(next) * dt;
            if (ts > stepper.current_time()) break;
            FlatState xs;
            stepper.calc_state(ts, xs);
            record(tr, ts, unflatten(xs), cfg);
            ++next;
        }
        if (stepper.current_time_step() < step_floor) {
            tr.completed = false;
            tr.abort_reason = "step size fell below the rejection floor";
            return tr;
        }
    }
    return tr;
}

}  // namespace

Trajectory integrate(const CartesianState& s0, const MassConfig& cfg, double t_end, double dt, Scheme scheme,
                     const IntegrationOptions& options) {
    if (!(dt > 0.0)) throw DomainError("integrate: dt must be positive");
    if (!(t_end > 0.0)) throw DomainError("integrate: t_end must be positive");
    check_configuration(s0);
    return scheme == Scheme::splitting ? integrate_splitting(s0, cfg, t_end, dt, options)
                                       : integrate_rk(s0, cfg, t_end, dt, options);
}

}  // namespace coorbital
