#pragma once

#include "coorbital/kepler.hpp"
#include "coorbital/system_params.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace coorbital {

// direct: one singular quadrature of 1/sqrt(U) after phi = phi_min + u^2.
// split: regular piece near phi_min + closed-form parabolic well + regular
// correction, usable down to delta = 1e-300.
enum class QuadratureMode { direct, split };

inline constexpr double kDirectMinDelta = 1e-8;
inline constexpr double kDirectMaxDelta = 10.0;
inline constexpr double kSplitMinDelta = 1e-300;
inline constexpr double kSplitMaxDelta = 0.3;
// below this, derivative stencils always use split mode
inline constexpr double kSplitSwitchDelta = 1e-6;

struct ReducedIntegral {
    double value = 0.0;
    double error = 0.0;
};

// Integral of 1/sqrt(U_delta) from phi_min to pi.
ReducedIntegral reduced_period_integral(double delta, QuadratureMode mode);

// The closed-form piece: integral of 1/sqrt(delta + 7 psi^2/24) for psi in [-2 pi/3, 0].
double parabolic_well_integral(double delta);

struct FrequencyRecord {
    double delta = 0.0;
    double T = 0.0;
    double nu = 0.0;
    double nu_prime = 0.0;  // d nu / d delta
    double J1 = 0.0;
};

FrequencyRecord period(double delta, const DerivedConstants& c, const MassConfig& cfg,
                       QuadratureMode mode = QuadratureMode::direct);

// Leading separatrix asymptote upsilon0 sqrt(eps) K / |ln delta|.
double nu_asymptotic(double delta, const DerivedConstants& c, const MassConfig& cfg);

// Action of the horseshoe level: enclosed area / (2 pi).
double action_J1(double delta, const DerivedConstants& c, const MassConfig& cfg);

struct HorseshoeProfile {
    std::vector<double> times;
    std::vector<double> zeta1;
    std::vector<double> Z1;
    double period = 0.0;         // measured by the integration
    double closure_error = 0.0;  // state mismatch after one measured period
    double energy_error = 0.0;   // max relative drift of the level energy
};

// One period of the mechanical flow from (I1, phi1) = (0, phi_min), sampled at
// n equally spaced times including both endpoints.
HorseshoeProfile horseshoe_profile(double delta, std::size_t n, const DerivedConstants& c, const MassConfig& cfg);

struct HorseshoeTorus {
    double delta = 0.0;
    double kappa = 0.0;
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
    double epsilon = 0.0;
    std::vector<double> theta1_grid;
    std::vector<double> F_samples;  // zeta1 profile
    std::vector<double> G_samples;  // G, with Z1 = sqrt(eps) G on the profile
    std::array<double, 2> omega{};  // (nu, upsilon)
    double energy_defect = 0.0;     // max relative error of the level energy over the grid

    PoincareState point(std::size_t i, double theta2) const;
};

HorseshoeTorus torus_embedding(double delta, std::span<const double> theta_grid, const DerivedConstants& c,
                               const MassConfig& cfg);

}  // namespace coorbital
