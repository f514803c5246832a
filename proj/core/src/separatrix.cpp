#include "coorbital/separatrix.hpp"

#include "coorbital/errors.hpp"
#include "coorbital/resonant_frame.hpp"

#include <cmath>
#include <numbers>

namespace coorbital {

namespace {

constexpr double kPi = std::numbers::pi;

double cubic(double X, double b) { return (4.0 * X * X - b) * X + 1.0; }

void check_delta(double delta) {
    if (!std::isfinite(delta) || delta <= -2.0 / 3.0 || delta > kMaxEnergyShift) {
        throw DomainError("energy shift delta = " + std::to_string(delta) + " outside (-2/3, 10]");
    }
}

double min_root(double delta) {
    check_delta(delta);
    const double b = 5.0 + 3.0 * delta;
    double lo = 0.0, hi = std::sqrt(b / 12.0);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (cubic(mid, b) > 0.0 ? lo : hi) = mid;
    }
    double X = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
        const double d = 12.0 * X * X - b;
        if (d == 0.0) break;
        X -= cubic(X, b) / d;
    }
    if (!(X > 0.0 && X < 1.0) || std::abs(cubic(X, b)) > 1e-14) {
        throw DomainError("no root of the turning-point cubic in (0, 1)");
    }
    return X;
}

// Larger root of the cubic for tadpole levels: the turning angle nearest to
// opposition, between the equilateral point and pi.
double outer_turning_angle(double delta) {
    check_delta(delta);
    const double b = 5.0 + 3.0 * delta;
    double lo = std::sqrt(b / 12.0), hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        (cubic(mid, b) < 0.0 ? lo : hi) = mid;
    }
    return 2.0 * std::asin(0.5 * (lo + hi));
}

}  // namespace

double phi_min(double delta) { return 2.0 * std::asin(min_root(delta)); }

double phi_min_slope_constant() {
    const double r2 = std::numbers::sqrt2;
    return 3.0 * (r2 - 1.0) / ((3.0 * r2 - 2.0) * std::sqrt(1.0 + 2.0 * r2));
}

double one_plus_coupling(double psi) {
    const double s4 = std::sin(0.25 * psi);
    const double s = 2.0 * s4 * s4;
    return s * (7.0 + s * (4.0 * s - 12.0)) / (3.0 * (1.0 - s));
}

LevelPotential::LevelPotential(double delta)
    : delta_(delta), root_(min_root(delta)), b_(5.0 + 3.0 * delta) {
    phi_min_ = 2.0 * std::asin(root_);
}

double LevelPotential::factored(double phi, double offset) const {
    const double X = std::sin(0.5 * phi);
    const double gap = 2.0 * std::cos(0.25 * (phi + phi_min_)) * std::sin(0.25 * offset);  // X - root
    return gap * (b_ - 4.0 * (X * X + X * root_ + root_ * root_)) / (3.0 * X);
}

double LevelPotential::near_saddle(double phi) const { return delta_ + one_plus_coupling(phi - kPi); }

double LevelPotential::operator()(double phi) const {
    const double folded = kPi - std::abs(kPi - phi);  // U is even about pi
    if (folded < 2.0) return factored(folded, folded - phi_min_);
    return near_saddle(folded);
}

double LevelPotential::from_opposition(double psi) const {
    if (std::abs(psi) < kPi - 2.0) return delta_ + one_plus_coupling(psi);
    return (*this)(kPi + psi);
}

double LevelPotential::above_min(double offset) const {
    const double phi = phi_min_ + offset;
    if (phi < 2.0) return factored(phi, offset);
    return (*this)(phi);
}

double level_energy(double delta, const DerivedConstants& c, const MassConfig& cfg) {
    return -cfg.epsilon * cfg.upsilon0 * c.B * (1.0 + delta);
}

double energy_shift(double I1, double phi1, const DerivedConstants& c, const MassConfig& cfg) {
    return -mechanical_H1(I1, phi1, c, cfg) / (cfg.epsilon * cfg.upsilon0 * c.B) - 1.0;
}

std::vector<LevelCurveSample> level_curve(double delta, std::size_t n, const DerivedConstants& c,
                                          const MassConfig& cfg) {
    if (n < 2) throw DomainError("level_curve: n must be at least 2");
    const LevelPotential U(delta);
    const double scale = std::sqrt(cfg.epsilon * c.B / c.A);
    const double lo = std::nextafter(U.phi_min(), 4.0);
    const double hi = delta < 0.0 ? outer_turning_angle(delta) : kPi;
    std::vector<LevelCurveSample> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(n - 1);
        const double phi = k + 1 == n ? hi : lo + t * (hi - lo);
        const double I1 = scale * std::sqrt(std::max(0.0, U(phi)));
        out[k] = {delta, phi, I1, mechanical_H1(I1, phi, c, cfg)};
    }
    return out;
}

std::string_view to_string(Region r) {
    switch (r) {
        case Region::L4_tadpole: return "L4_tadpole";
        case Region::L5_tadpole: return "L5_tadpole";
        case Region::separatrix: return "separatrix";
        case Region::horseshoe: return "horseshoe";
        case Region::nonresonant: return "nonresonant";
    }
    return "unknown";
}

Region classify(double I1, double phi1, const DerivedConstants& c, const MassConfig& cfg,
                const ClassifyOptions& options) {
    const double delta = energy_shift(I1, phi1, c, cfg);
    if (std::abs(I1) > options.validity_band * std::sqrt(cfg.epsilon * c.B / c.A)) return Region::nonresonant;
    if (std::abs(delta) <= options.separatrix_tolerance) return Region::separatrix;
    if (delta > 0.0) return Region::horseshoe;
    const double folded = phi1 - 2.0 * kPi * std::floor(phi1 / (2.0 * kPi));
    return folded < kPi ? Region::L4_tadpole : Region::L5_tadpole;
}

std::vector<Equilibrium> lagrange_equilibria(const DerivedConstants& c, const MassConfig& cfg) {
    const double ups = cfg.upsilon0, eps = cfg.epsilon;
    auto make = [&](std::string name, double phi) {
        Equilibrium e;
        e.name = std::move(name);
        e.phi1 = phi;
        e.I1 = 0.0;
        e.delta = energy_shift(0.0, phi, c, cfg);
        const double g_I = -2.0 * ups * c.A * e.I1;
        const double g_phi = ups * eps * c.B * coupling_potential_slope(phi);
        e.gradient_norm = std::hypot(g_I, g_phi);
        const double hess_det = (-2.0 * ups * c.A) * (ups * eps * c.B * coupling_potential_curvature(phi));
        e.kind = hess_det > 0.0 ? EquilibriumKind::center : EquilibriumKind::saddle;
        return e;
    };
    return {make("L4", kPi / 3.0), make("L3", kPi), make("L5", 5.0 * kPi / 3.0)};
}

double libration_amplitude(double delta) {
    if (!(delta >= 0.0)) throw DomainError("libration_amplitude: delta must be non-negative");
    return 2.0 * kPi - 2.0 * phi_min(delta);
}

}  // namespace coorbital
