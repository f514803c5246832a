#pragma once

#include "coorbital/system_params.hpp"
#include "coorbital/vec2.hpp"

#include <complex>

namespace coorbital {

struct OrbitalElements {
    double a = 1.0;       // semi-major axis
    double e = 0.0;       // eccentricity
    double lambda = 0.0;  // mean longitude
    double varpi = 0.0;   // longitude of pericentre
};

struct PhasePoint {
    Vec2 r;  // heliocentric position
    Vec2 p;  // momentum, p = mhat * velocity in the Keplerian part
};

// Poincare chart: actions Lambda_j, mean longitudes lambda_j and complex
// eccentricity variables x_j = sqrt(Lambda_j) sqrt(1 - sqrt(1 - e_j^2)) exp(i varpi_j).
struct PoincareState {
    double Lambda1 = 0.0, Lambda2 = 0.0;
    double lambda1 = 0.0, lambda2 = 0.0;
    std::complex<double> x1{}, x2{};
};

// Momenta first, matching the trajectory CSV column order.
struct CartesianState {
    Vec2 p1, p2;
    Vec2 r1, r2;
};

inline constexpr double kMaxEccentricity = 0.9;

// Eccentric anomaly E with E - e sin E = M, on the branch containing M.
double solve_kepler(double M, double e);

PhasePoint elements_to_cartesian(const OrbitalElements& el, double mu, double mhat);
OrbitalElements cartesian_to_elements(const PhasePoint& s, double mu, double mhat);

// One planet of the chart. Regular at e = 0: no angle is ever divided by e.
PhasePoint poincare_planet_to_cartesian(double Lambda, double lambda, std::complex<double> x, double mu,
                                        double mhat);
void cartesian_planet_to_poincare(const PhasePoint& s, double mu, double mhat, double& Lambda, double& lambda,
                                  std::complex<double>& x);

CartesianState poincare_to_cartesian(const PoincareState& s, const DerivedConstants& c);
// Mean longitudes come back in (-pi, pi].
PoincareState cartesian_to_poincare(const CartesianState& s, const DerivedConstants& c);

// Exact elliptic two-body propagation of (r, v) over dt with gravitational
// parameter mu, using Gauss f and g functions. Throws DomainError if unbound.
void kepler_drift(Vec2& r, Vec2& v, double mu, double dt);

// Same propagation returned as increments (r(dt) - r, v(dt) - v), so callers
// can accumulate them with compensated summation.
void kepler_increment(const Vec2& r, const Vec2& v, double mu, double dt, Vec2& dr, Vec2& dv);

}  // namespace coorbital
