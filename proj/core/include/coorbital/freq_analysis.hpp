#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace coorbital {

struct FrequencyComponent {
    double frequency = 0.0;            // angular frequency, rad per time unit
    std::complex<double> amplitude{};  // referenced to the first sample
};

struct FrequencyAnalysisOptions {
    // After extraction, re-refine every frequency against the signal with the
    // other components removed, then refit all amplitudes together.
    bool joint_refinement = true;
};

// Iterative windowed peak extraction on a uniformly sampled complex signal
// (at least 256 samples, at most 6 components). Components weaker than 1e-10
// of the strongest are not reported. Sorted by decreasing |amplitude|.
std::vector<FrequencyComponent> fundamental_frequencies(std::span<const std::complex<double>> samples, double dt,
                                                        std::size_t n_freq,
                                                        const FrequencyAnalysisOptions& options = {});

struct ResidualResult {
    double residual = 0.0;        // |s - P s| / |s|
    double condition_number = 0.0;
    bool ill_conditioned = false;  // near-resonant basis: the projection is unreliable
};

// Least-squares projection onto exp(i (k1 w1 + k2 w2) t), |k1|, |k2| <= max_order.
ResidualResult quasiperiodic_residual(std::span<const std::complex<double>> samples, double dt,
                                      std::array<double, 2> omega, int max_order = 3);

}  // namespace coorbital
