#pragma once

// Globally adaptive Gauss-Kronrod quadrature (bisect the interval with the
// largest error estimate until the summed estimate meets the tolerance).

#include "coorbital/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

namespace coorbital::detail {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

inline constexpr double kQuadratureTolerance = 1e-14;
inline constexpr std::size_t kMaxSubintervals = 20000;

template <class F>
QuadratureResult kronrod_rule(F& f, double a, double b) {
    using kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;
    using gauss = boost::math::quadrature::gauss<double, 15>;
    static const auto& x = kronrod::abscissa();
    static const auto& wk = kronrod::weights();
    static const auto& wg = gauss::weights();
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    // Gauss nodes sit at the even Kronrod indices; index 0 is the midpoint.
    const double f0 = f(mid);
    double k = wk[0] * f0, g = wg[0] * f0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double s = f(mid - half * x[i]) + f(mid + half * x[i]);
        k += wk[i] * s;
        if (i % 2 == 0) g += wg[i / 2] * s;
    }
    return {k * half, std::abs((k - g) * half)};
}

// breaks must be increasing; pieces of zero length are skipped. Throws
// NumericalError when the estimate cannot be brought below 1e-8 relative.
template <class F>
QuadratureResult integrate(F&& f, const std::vector<double>& breaks, double rel_tol = kQuadratureTolerance,
                           double abs_tol = 0.0) {
    struct Piece {
        double a, b, value, error;
        bool operator<(const Piece& o) const { return error < o.error; }
    };
    std::priority_queue<Piece> heap;
    double total = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i])) continue;
        const QuadratureResult r = kronrod_rule(f, breaks[i], breaks[i + 1]);
        heap.push({breaks[i], breaks[i + 1], r.value, r.error});
        total += r.value;
        total_err += r.error;
    }

    std::size_t count = heap.size();
    while (!heap.empty() && total_err > std::max(abs_tol, rel_tol * std::abs(total)) && count < kMaxSubintervals) {
        const Piece worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // interval at machine resolution
        heap.pop();
        const QuadratureResult left = kronrod_rule(f, worst.a, mid);
        const QuadratureResult right = kronrod_rule(f, mid, worst.b);
        heap.push({worst.a, mid, left.value, left.error});
        heap.push({mid, worst.b, right.value, right.error});
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        ++count;
    }

    // re-sum to shed the drift of the running updates
    total = 0.0;
    total_err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        total_err += heap.top().error;
        heap.pop();
    }
    if (!std::isfinite(total)) throw NumericalError("quadrature produced a non-finite value");
    if (total_err > std::max(abs_tol, 1e-8 * std::abs(total))) {
        throw NumericalError("quadrature did not converge (error estimate " + std::to_string(total_err) + ")");
    }
    return {total, total_err};
}

template <class F>
QuadratureResult integrate(F&& f, double a, double b, double rel_tol = kQuadratureTolerance) {
    return integrate(f, std::vector<double>{a, b}, rel_tol);
}

}  // namespace coorbital::detail
