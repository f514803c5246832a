#include "coorbital/resonant_frame.hpp"

#include "coorbital/errors.hpp"
#include "coorbital/parallel.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace coorbital {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double distance_from_collision(double phi) { return std::abs(std::remainder(phi, kTwoPi)); }

void guard_singularity(double phi) {
    if (!std::isfinite(phi) || distance_from_collision(phi) < 1e-8) {
        throw SingularityError("mechanical functions are singular at phi = 0 mod 2 pi");
    }
}

double chord(double phi) { return 2.0 * std::abs(std::sin(0.5 * phi)); }

}  // namespace

ResonantState to_resonant(const PoincareState& s, const DerivedConstants& c) {
    ResonantState r;
    r.Z1 = s.Lambda1 - c.lambda10;
    r.Z2 = (s.Lambda1 - c.lambda10) + (s.Lambda2 - c.lambda20);
    r.zeta1 = s.lambda1 - s.lambda2;
    r.zeta2 = s.lambda2;
    r.x1 = s.x1;
    r.x2 = s.x2;
    return r;
}

PoincareState from_resonant(const ResonantState& s, const DerivedConstants& c) {
    PoincareState p;
    p.Lambda1 = c.lambda10 + s.Z1;
    p.Lambda2 = c.lambda20 + (s.Z2 - s.Z1);
    p.lambda1 = s.zeta1 + s.zeta2;
    p.lambda2 = s.zeta2;
    p.x1 = s.x1;
    p.x2 = s.x2;
    return p;
}

UncoupledState to_uncoupled(const ResonantState& s, const DerivedConstants& c) {
    return {s.Z1 - c.kappa * s.Z2, s.Z2, s.zeta1, s.zeta2 + c.kappa * s.zeta1, s.x1, s.x2};
}

ResonantState from_uncoupled(const UncoupledState& s, const DerivedConstants& c) {
    return {s.I1 + c.kappa * s.I2, s.I2, s.phi1, s.phi2 - c.kappa * s.phi1, s.w1, s.w2};
}

double dalembert_integral(const ResonantState& s) { return s.Z2 - std::norm(s.x1) - std::norm(s.x2); }

MechanicalFunctions mechanical_functions(double phi) {
    guard_singularity(phi);
    using cd = std::complex<double>;
    MechanicalFunctions m;
    const double cphi = std::cos(phi);
    m.D = chord(phi);
    const double d5 = 1.0 / std::pow(m.D, 5);
    m.F = 2.0 / 3.0 * (cphi - 1.0 / m.D);
    m.A_tilde = 0.25 * d5 * (5.0 * std::cos(2.0 * phi) - 13.0 + 8.0 * cphi) - cphi;
    const cd e1 = std::polar(1.0, -phi);
    const cd e2 = e1 * e1;
    const cd e3 = e2 * e1;
    m.B_tilde = e2 - 0.125 * d5 * (e3 + 16.0 * e2 - 26.0 * e1 + 9.0 * std::conj(e1));
    return m;
}

double coupling_potential(double phi) {
    guard_singularity(phi);
    return 2.0 / 3.0 * (std::cos(phi) - 1.0 / chord(phi));
}

double coupling_potential_slope(double phi) {
    guard_singularity(phi);
    const double d = chord(phi);
    const double s = std::sin(phi);
    return 2.0 / 3.0 * (-s + s / (d * d * d));
}

double coupling_potential_curvature(double phi) {
    guard_singularity(phi);
    const double d = chord(phi);
    const double s = std::sin(phi), cphi = std::cos(phi);
    const double d3 = d * d * d;
    return 2.0 / 3.0 * (-cphi + cphi / d3 - 3.0 * s * s / (d3 * d * d));
}

double mechanical_H1(double I1, double phi1, const DerivedConstants& c, const MassConfig& cfg) {
    return cfg.upsilon0 * (-c.A * I1 * I1 + cfg.epsilon * c.B * coupling_potential(phi1));
}

double keplerian_resonant_energy(double Z1, double Z2, const DerivedConstants& c) {
    const double L1 = c.lambda10 + Z1;
    const double L2 = c.lambda20 + (Z2 - Z1);
    if (!(L1 > 0.0) || !(L2 > 0.0)) throw DomainError("resonant actions give non-positive Lambda");
    const double k1 = c.mhat1 * c.mhat1 * c.mhat1 * c.mu1 * c.mu1;
    const double k2 = c.mhat2 * c.mhat2 * c.mhat2 * c.mu2 * c.mu2;
    return -0.5 * (k1 / (L1 * L1) + k2 / (L2 * L2));
}

double averaged_perturbation_circular(double Z1, double Z2, double zeta1, const MassConfig& cfg,
                                      const DerivedConstants& c, std::size_t n_nodes, double collision_guard) {
    if (n_nodes < 64) throw DomainError("averaged_perturbation_circular: at least 64 nodes required");
    // slack so grid points placed exactly on the guard are accepted
    if (distance_from_collision(zeta1) < collision_guard * (1.0 - 1e-12)) {
        throw DomainError("zeta1 = " + std::to_string(zeta1) + " is inside the collision guard");
    }
    const double L1 = c.lambda10 + Z1;
    const double L2 = c.lambda20 + (Z2 - Z1);

    auto integrand = [&](double zeta2) {
        const PhasePoint a = poincare_planet_to_cartesian(L1, zeta1 + zeta2, {}, c.mu1, c.mhat1);
        const PhasePoint b = poincare_planet_to_cartesian(L2, zeta2, {}, c.mu2, c.mhat2);
        return cfg.epsilon * (dot(a.p, b.p) / cfg.m0 - cfg.m1 * cfg.m2 / norm(a.r - b.r));
    };

    constexpr std::size_t kMaxNodes = std::size_t{1} << 14;
    std::size_t n = n_nodes;
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) sum += integrand(kTwoPi * static_cast<double>(k) / static_cast<double>(n));
    double value = sum / static_cast<double>(n);

    while (2 * n <= kMaxNodes) {
        // the refined grid adds the midpoints of the current one
        double mid = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            mid += integrand(kTwoPi * (static_cast<double>(k) + 0.5) / static_cast<double>(n));
        }
        sum += mid;
        n *= 2;
        const double refined = sum / static_cast<double>(n);
        const bool converged = std::abs(refined - value) <= 1e-13 * std::abs(refined) + 1e-300;
        value = refined;
        if (converged) return value;
    }
    throw NumericalError("averaged_perturbation_circular: no convergence with 2^14 nodes");
}

double averaged_hamiltonian_circular(double Z1, double Z2, double zeta1, const MassConfig& cfg,
                                     const DerivedConstants& c, double collision_guard) {
    return keplerian_resonant_energy(Z1, Z2, c) +
           averaged_perturbation_circular(Z1, Z2, zeta1, cfg, c, 64, collision_guard);
}

std::vector<PortraitRow> portrait_grid(PortraitModel model, std::size_t n, double zmax, const MassConfig& cfg,
                                       const DerivedConstants& c, unsigned threads, double collision_guard) {
    if (n < 2) throw DomainError("portrait_grid: n must be at least 2");
    if (!(zmax > 0.0)) throw DomainError("portrait_grid: zmax must be positive");
    std::vector<PortraitRow> rows(n * n);
    const double z_lo = collision_guard, z_hi = kTwoPi - collision_guard;
    const double step_zeta = (z_hi - z_lo) / static_cast<double>(n - 1);
    const double step_Z = 2.0 * zmax / static_cast<double>(n - 1);

    parallel_for(n, threads, [&](std::size_t i) {
        const double zeta1 = z_lo + step_zeta * static_cast<double>(i);
        for (std::size_t j = 0; j < n; ++j) {
            const double Z1 = -zmax + step_Z * static_cast<double>(j);
            const double H = model == PortraitModel::mechanical
                                 ? mechanical_H1(Z1, zeta1, c, cfg)
                                 : averaged_hamiltonian_circular(Z1, 0.0, zeta1, cfg, c, collision_guard);
            rows[i * n + j] = {zeta1, Z1, H};
        }
    });
    return rows;
}

}  // namespace coorbital
