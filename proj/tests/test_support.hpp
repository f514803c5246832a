#pragma once

#include "coorbital/system_params.hpp"

#include <cmath>
#include <numbers>

namespace coorbital::test {

inline constexpr double kPi = std::numbers::pi;

// Star of unit mass with planets 1 and 0.3 (in units of epsilon).
inline MassConfig reference() { return {1.0, 1.0, 0.3, 1e-3, 2.0 * kPi}; }

inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace coorbital::test
