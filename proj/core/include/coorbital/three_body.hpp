#pragma once

#include "coorbital/kepler.hpp"
#include "coorbital/system_params.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace coorbital {

// Heliocentric positions with barycentric momenta. The Hamiltonian splits as
// two Kepler problems plus eps*(p1.p2/m0 - m1 m2/|r1 - r2|).
struct EnergyParts {
    double keplerian = 0.0;
    double perturbation = 0.0;
    double total() const { return keplerian + perturbation; }
};

struct StateDerivative {
    Vec2 dp1, dp2;
    Vec2 dr1, dr2;
};

EnergyParts energy_parts(const CartesianState& s, const MassConfig& cfg);
double keplerian_energy(const CartesianState& s, const MassConfig& cfg);
double perturbation_energy(const CartesianState& s, const MassConfig& cfg);
double hamiltonian_energy(const CartesianState& s, const MassConfig& cfg);

StateDerivative equations_of_motion(const CartesianState& s, const MassConfig& cfg);

// Sum of r_j x p_j (z-component).
double angular_momentum(const CartesianState& s);

enum class Scheme { splitting, rk_adaptive };

struct IntegrationOptions {
    std::size_t sample_stride = 1;  // splitting: keep every stride-th step
    double rk_tolerance = 1e-12;    // rk_adaptive: relative and absolute local tolerance
    bool hill_guard = true;         // abort when |r1 - r2| < eps^(1/3) a_star
};

struct Trajectory {
    std::vector<double> times;
    std::vector<CartesianState> states;
    std::vector<double> energy_series;
    std::vector<double> angmom_series;
    bool completed = true;
    std::string abort_reason;  // empty when completed
};

// Fourth-order symplectic splitting: exact Kepler drifts, the exact flow of
// the momentum coupling and interaction kicks, composed symmetrically and
// lifted to order four by the triple jump.
class SplittingIntegrator {
public:
    explicit SplittingIntegrator(const MassConfig& cfg);

    // Negative h runs the map backwards. The carry overload keeps the
    // rounding error of every update in `carry` (Kahan summation) and should
    // be used for long runs; the plain overload starts from a zero carry.
    void step(CartesianState& s, double h) const;
    void step(CartesianState& s, CartesianState& carry, double h) const;
    void second_order_step(CartesianState& s, CartesianState& carry, double h) const;

private:
    void kick(CartesianState& s, CartesianState& carry, double h) const;
    void couple(CartesianState& s, CartesianState& carry, double h) const;
    void drift(CartesianState& s, CartesianState& carry, double h) const;

    MassConfig cfg_;
    DerivedConstants c_;
};

// For splitting, dt is the step (shrunk slightly so it divides t_end). For
// rk_adaptive, dt is the output spacing; steps are chosen by the error control.
Trajectory integrate(const CartesianState& s0, const MassConfig& cfg, double t_end, double dt, Scheme scheme,
                     const IntegrationOptions& options = {});

double fast_period(const MassConfig& cfg);

}  // namespace coorbital
