#pragma once

#include "coorbital/system_params.hpp"
#include "coorbital/three_body.hpp"

#include <complex>
#include <string>
#include <vector>

namespace coorbital {

struct LaunchOptions {
    double delta = 0.05;
    double periods = 1000.0;   // in fast periods 2 pi / upsilon0
    double dt = 0.0;           // 0: fast period / 200
    Scheme scheme = Scheme::splitting;
    std::size_t sample_stride = 10;
    double rk_tolerance = 1e-12;
};

struct LaunchReport {
    Trajectory trajectory;
    std::vector<double> zeta1;  // unwrapped, sample by sample
    std::vector<double> zeta2;

    double energy_drift = 0.0;     // max |E - E0| / |E0|
    double angmom_drift = 0.0;     // max |C - C0| / |C0|
    double dalembert_drift = 0.0;  // max |D - D0| / |C0|

    double nu_model = 0.0, upsilon_model = 0.0;
    double nu_measured = 0.0, upsilon_measured = 0.0;

    bool librates = false;          // zeta1 never reaches conjunction
    double libration_amplitude = 0.0;  // max zeta1 - min zeta1 (rad)

    double residual = 0.0;  // quasi-periodic residual of the heavier planet's exp(i lambda)
    double residual_condition = 0.0;
    bool residual_ill_conditioned = false;
};

// Starts the full problem on the model torus at theta = (0, 0) and measures
// conserved-quantity drifts, libration and the recovered frequencies.
LaunchReport launch_from_torus(const MassConfig& cfg, const LaunchOptions& options);

}  // namespace coorbital
