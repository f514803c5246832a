#pragma once

#include <filesystem>
#include <numbers>
#include <string_view>

namespace coorbital {

// Physical configuration. Planetary masses are eps*m1 and eps*m2; the
// small parameter is kept separate so that sweeps in eps leave m1, m2 fixed.
// G = 1 throughout.
struct MassConfig {
    double m0 = 1.0;
    double m1 = 1.0;
    double m2 = 1.0;
    double epsilon = 1e-3;
    double upsilon0 = 2.0 * std::numbers::pi;  // mean motion at exact resonance
};

// Everything the reduction needs, computed once from a MassConfig.
struct DerivedConstants {
    double mu1 = 0, mu2 = 0;          // m0 + eps*m_j
    double mhat1 = 0, mhat2 = 0;      // m0*m_j/(m0 + eps*m_j)
    double lambda10 = 0, lambda20 = 0;  // actions at exact resonance
    double a10 = 0, a20 = 0;          // semi-major axes at exact resonance
    double a_star = 0;                // common axis m0^(1/3) upsilon0^(-2/3)
    double lambda1_star = 0, lambda2_star = 0;  // actions with both axes equal to a_star
    double kappa = 0;                 // m1/(m1 + m2)
    double A = 0, B = 0, D = 0, E = 0;
    double K = 0;                     // sqrt(7 pi^2 A B / 6)
};

// Throws ConfigError unless every field is finite and strictly positive.
void validate(const MassConfig& cfg);

// The customary labelling puts the lighter planet first. Nothing in the
// library depends on it, so it is reported rather than enforced.
bool lighter_planet_first(const MassConfig& cfg);

DerivedConstants derive_constants(const MassConfig& cfg);

// Linear stability of the equilateral configurations for point masses
// (central, planet1, planet2). Zero planetary masses are allowed here.
bool gascheau_stable(double central, double planet1, double planet2);
bool gascheau_stable(const MassConfig& cfg);

MassConfig with_epsilon(MassConfig cfg, double epsilon);

// "key = value" lines with keys m0, m1, m2, epsilon, upsilon0, all required.
// '#' starts a comment. Throws ConfigError on anything else.
MassConfig parse_config(std::string_view text);
MassConfig load_config(const std::filesystem::path& path);

}  // namespace coorbital
