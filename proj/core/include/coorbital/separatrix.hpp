#pragma once

#include "coorbital/system_params.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace coorbital {

// Largest energy shift accepted by the level-set routines. The co-orbital
// band of real satellite pairs lies well above the near-separatrix regime.
inline constexpr double kMaxEnergyShift = 10.0;

// Smallest angle reached on the level h = -eps upsilon0 B (1 + delta):
// 2 asin(X) with X the smallest positive root of 4X^3 - (5 + 3 delta) X + 1.
double phi_min(double delta);

// c0 in phi_min(delta) = phi_min(0) - c0 delta + O(delta^2).
double phi_min_slope_constant();

// U(phi) = 1 + delta + F(phi), evaluated without cancellation near the turning
// point phi_min and near the saddle at pi, for any delta down to 1e-300.
class LevelPotential {
public:
    explicit LevelPotential(double delta);

    double operator()(double phi) const;
    // U at phi = phi_min + offset, accurate when offset is tiny.
    double above_min(double offset) const;
    // U at phi = pi + psi, accurate when |psi| is below the resolution of pi.
    double from_opposition(double psi) const;

    double delta() const { return delta_; }
    double phi_min() const { return phi_min_; }

private:
    double factored(double phi, double offset) const;
    double near_saddle(double phi) const;

    double delta_;
    double phi_min_;
    double root_;  // sin(phi_min / 2)
    double b_;     // 5 + 3 delta
};

// 1 + F(pi + psi) without cancellation.
double one_plus_coupling(double psi);

// Energy of the level curve labelled by delta.
double level_energy(double delta, const DerivedConstants& c, const MassConfig& cfg);
// delta of the level through (I1, phi1).
double energy_shift(double I1, double phi1, const DerivedConstants& c, const MassConfig& cfg);

struct LevelCurveSample {
    double delta = 0.0;
    double phi1 = 0.0;
    double I1 = 0.0;
    double h = 0.0;
};

// n samples, phi uniform from just above phi_min(delta) to pi, I1 >= 0 branch.
// Tadpole levels (delta < 0) end at their outer turning point instead of pi.
std::vector<LevelCurveSample> level_curve(double delta, std::size_t n, const DerivedConstants& c,
                                          const MassConfig& cfg);

enum class Region { L4_tadpole, L5_tadpole, separatrix, horseshoe, nonresonant };
std::string_view to_string(Region r);

struct ClassifyOptions {
    double separatrix_tolerance = 1e-9;
    double validity_band = 5.0;  // multiples of sqrt(eps B / A)
};

Region classify(double I1, double phi1, const DerivedConstants& c, const MassConfig& cfg,
                const ClassifyOptions& options = {});

enum class EquilibriumKind { center, saddle };

struct Equilibrium {
    std::string name;
    double phi1 = 0.0;
    double I1 = 0.0;
    double delta = 0.0;
    EquilibriumKind kind = EquilibriumKind::center;
    double gradient_norm = 0.0;  // |grad H1| at the point
};

std::vector<Equilibrium> lagrange_equilibria(const DerivedConstants& c, const MassConfig& cfg);

// 2 pi - 2 phi_min(delta), for delta >= 0.
double libration_amplitude(double delta);

}  // namespace coorbital
