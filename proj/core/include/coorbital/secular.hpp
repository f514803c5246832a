#pragma once

#include "coorbital/action_angle.hpp"
#include "coorbital/system_params.hpp"

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace coorbital {

struct AveragedCoefficients {
    double A_bar = 0.0;
    double B_bar = 0.0;
    double error = 0.0;  // summed quadrature error estimate of the numerators
};

// Time averages of A_tilde and Re B_tilde along the horseshoe level delta.
AveragedCoefficients averaged_AB(double delta, const DerivedConstants& c, const MassConfig& cfg,
                                 QuadratureMode mode);

// Time average of Im B_tilde around the full level curve; zero by the
// reflection symmetry about pi.
double imaginary_B_average(double delta);

// A_tilde - 7/8 and Re B_tilde - 7/8 at phi, accurate near the saddle.
std::array<double, 2> secular_offsets(double phi);

struct SeparatrixConstants {
    double C_A = 0.0;  // sqrt(7/6) times C_A_integral
    double C_B = 0.0;
    double c2 = 0.0;   // 2 (C_A - C_B)
    double C_A_integral = 0.0;  // integral of (A_tilde - 7/8)/sqrt(U_0) from the separatrix turning point to pi
    double C_B_integral = 0.0;
    double quadrature_error = 0.0;
};

SeparatrixConstants separatrix_constants(const DerivedConstants& c, const MassConfig& cfg);

struct SecularSpectrum {
    double delta = 0.0;
    double A_bar = 0.0, B_bar = 0.0;
    double g1 = 0.0;  // branch tending to (7/8) eps upsilon0 (m1 + m2)/m0
    double g2 = 0.0;  // branch vanishing like 1/|ln delta|
    std::array<std::array<double, 2>, 2> Q{};
    std::array<double, 2> eigenvalues{};  // of Q, same order as (g1, g2)
    double quadrature_error = 0.0;
};

// split mode below delta = 1e-6, direct above.
SecularSpectrum secular_eigs(double delta, const DerivedConstants& c, const MassConfig& cfg);

// Roots (larger, smaller) of lambda^2 - (m1+m2)/(m1 m2) A lambda - (B^2 - A^2)/(m1 m2).
std::array<double, 2> characteristic_roots(double A_bar, double B_bar, double m1, double m2);

struct LadderRow {
    double epsilon = 0.0;
    double delta = 0.0;
    double upsilon = 0.0;
    double nu = 0.0;
    double g1 = 0.0, g2 = 0.0;
};

struct FrequencyLadder {
    std::vector<LadderRow> rows;
    // nu/upsilon and max|g|/nu strictly decrease along decreasing epsilon
    bool separated = false;
};

// Rows are reported in the order given; the monotonicity flag is evaluated
// after sorting by decreasing epsilon.
FrequencyLadder frequency_ladder(std::span<const double> epsilons, const std::function<double(double)>& delta_rule,
                                 const MassConfig& cfg);

double default_delta_rule(double epsilon);  // eps^(1/10)

struct MelnikovResult {
    double min_divisor = 0.0;
    std::array<long, 2> k{};
    std::array<long, 2> l{};
    double min_secular = 0.0;  // min(|Omega1|, |Omega2|, |Omega1 - Omega2|)
};

inline constexpr long kMaxMelnikovBound = 1000000;

// Exact minimum of |k.omega + l.Omega| over 0 < max|k_i| <= K0, |l1| + |l2| <= 2.
MelnikovResult melnikov_min_divisor(std::array<double, 2> omega, std::array<double, 2> Omega, long K0);

}  // namespace coorbital
