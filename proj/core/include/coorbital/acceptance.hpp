#pragma once

#include "coorbital/system_params.hpp"

#include <string>
#include <vector>

namespace coorbital {

struct CheckResult {
    int id = 0;
    std::string title;
    bool passed = false;
    bool informational = false;  // reported, never counted
    double seconds = 0.0;
    std::string detail;
};

// The reference configuration: m0 = 1, m1 = 1, m2 = 0.3, eps = 1e-3, upsilon0 = 2 pi.
MassConfig reference_config();
// Saturn with Janus and Epimetheus in units of Saturn's mass and the 17 h orbit.
MassConfig janus_epimetheus_config();

std::vector<CheckResult> run_acceptance(const MassConfig& cfg);

}  // namespace coorbital
