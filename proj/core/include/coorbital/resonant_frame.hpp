#pragma once

#include "coorbital/kepler.hpp"
#include "coorbital/system_params.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace coorbital {

// Resonant actions measured from exact resonance; zeta1 = lambda1 - lambda2, zeta2 = lambda2.
struct ResonantState {
    double Z1 = 0.0, Z2 = 0.0;
    double zeta1 = 0.0, zeta2 = 0.0;
    std::complex<double> x1{}, x2{};
};

// Chart that decouples the semi-fast degree of freedom: I1 = Z1 - kappa Z2, phi2 = zeta2 + kappa zeta1.
struct UncoupledState {
    double I1 = 0.0, I2 = 0.0;
    double phi1 = 0.0, phi2 = 0.0;
    std::complex<double> w1{}, w2{};
};

ResonantState to_resonant(const PoincareState& s, const DerivedConstants& c);
PoincareState from_resonant(const ResonantState& s, const DerivedConstants& c);
UncoupledState to_uncoupled(const ResonantState& s, const DerivedConstants& c);
ResonantState from_uncoupled(const UncoupledState& s, const DerivedConstants& c);

// Z2 - |x1|^2 - |x2|^2: total angular momentum minus Lambda10 + Lambda20.
double dalembert_integral(const ResonantState& s);

struct MechanicalFunctions {
    double F = 0.0;          // coupling potential (2/3)(cos phi - 1/D)
    double A_tilde = 0.0;    // diagonal secular coefficient
    std::complex<double> B_tilde{};  // off-diagonal secular coefficient
    double D = 0.0;          // chord length sqrt(2 - 2 cos phi)
};

// Throws SingularityError within 1e-8 of phi = 0 mod 2 pi.
MechanicalFunctions mechanical_functions(double phi);
double coupling_potential(double phi);
double coupling_potential_slope(double phi);
double coupling_potential_curvature(double phi);

// upsilon0 (-A I1^2 + eps B F(phi1))
double mechanical_H1(double I1, double phi1, const DerivedConstants& c, const MassConfig& cfg);

inline constexpr double kDefaultCollisionGuard = 0.05;

// Average over zeta2 of the perturbation for circular orbits, by the
// trapezoidal rule with doubling from n_nodes until successive values agree.
double averaged_perturbation_circular(double Z1, double Z2, double zeta1, const MassConfig& cfg,
                                      const DerivedConstants& c, std::size_t n_nodes = 64,
                                      double collision_guard = kDefaultCollisionGuard);

// Keplerian part plus the averaged perturbation.
double averaged_hamiltonian_circular(double Z1, double Z2, double zeta1, const MassConfig& cfg,
                                     const DerivedConstants& c, double collision_guard = kDefaultCollisionGuard);

double keplerian_resonant_energy(double Z1, double Z2, const DerivedConstants& c);

enum class PortraitModel { mechanical, averaged };

struct PortraitRow {
    double zeta1 = 0.0;
    double Z1 = 0.0;
    double H = 0.0;
};

// n x n grid with zeta1 in [guard, 2 pi - guard] (outer) and Z1 in [-zmax, zmax] (inner), at Z2 = 0.
std::vector<PortraitRow> portrait_grid(PortraitModel model, std::size_t n, double zmax, const MassConfig& cfg,
                                       const DerivedConstants& c, unsigned threads = 1,
                                       double collision_guard = kDefaultCollisionGuard);

}  // namespace coorbital
