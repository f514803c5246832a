#include "coorbital/secular.hpp"

#include "coorbital/errors.hpp"
#include "coorbital/resonant_frame.hpp"
#include "coorbital/separatrix.hpp"
#include "quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

namespace coorbital {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSaddleValue = 7.0 / 8.0;

std::vector<double> saddle_breaks(double phi_lo, double delta) {
    const double span = kPi - phi_lo;
    std::vector<double> u{0.0};
    if (delta > 0.0) {
        std::vector<double> psi;
        for (double p = std::sqrt(delta); p < 0.5 * span; p *= 10.0) psi.push_back(p);
        for (auto it = psi.rbegin(); it != psi.rend(); ++it) u.push_back(std::sqrt(span - *it));
    } else {
        u.push_back(std::sqrt(0.5 * span));
    }
    u.push_back(std::sqrt(span));
    return u;
}

struct Numerators {
    double A = 0.0, B = 0.0, error = 0.0;
};

// Integrals over [phi_min, pi] of a(phi)/sqrt(U) and b(phi)/sqrt(U).
template <class Fa, class Fb>
Numerators weighted_integrals(const LevelPotential& U, Fa&& a, Fb&& b) {
    const auto breaks = saddle_breaks(U.phi_min(), U.delta());
    auto fa = [&](double u) {
        const double phi = U.phi_min() + u * u;
        return 2.0 * u * a(phi) / std::sqrt(U.above_min(u * u));
    };
    auto fb = [&](double u) {
        const double phi = U.phi_min() + u * u;
        return 2.0 * u * b(phi) / std::sqrt(U.above_min(u * u));
    };
    const auto ra = detail::integrate(fa, breaks);
    const auto rb = detail::integrate(fb, breaks);
    return {ra.value, rb.value, ra.error + rb.error};
}

}  // namespace

std::array<double, 2> secular_offsets(double phi) {
    const double psi = phi - kPi;
    const double sh = std::sin(0.5 * psi);
    const double v = 2.0 * sh * sh;  // 1 - cos psi
    const double em = std::expm1(2.5 * std::log1p(-0.5 * v));  // cos^5(psi/2) - 1
    const double c5 = 1.0 + em;
    const double off_a = (16.0 * em - 12.0 * v + 10.0 * v * v) / (128.0 * c5) - v;
    const double off_b = -4.0 * v + 2.0 * v * v + (32.0 * em + v * (72.0 - v * (20.0 + 4.0 * v))) / (256.0 * c5);
    return {off_a, off_b};
}

AveragedCoefficients averaged_AB(double delta, const DerivedConstants&, const MassConfig&, QuadratureMode mode) {
    const ReducedIntegral I = reduced_period_integral(delta, mode);
    const LevelPotential U(delta);
    AveragedCoefficients out;
    if (mode == QuadratureMode::direct) {
        const Numerators n = weighted_integrals(
            U, [](double phi) { return mechanical_functions(phi).A_tilde; },
            [](double phi) { return mechanical_functions(phi).B_tilde.real(); });
        out.A_bar = n.A / I.value;
        out.B_bar = n.B / I.value;
        out.error = n.error + I.error;
    } else {
        const Numerators n = weighted_integrals(
            U, [](double phi) { return secular_offsets(phi)[0]; }, [](double phi) { return secular_offsets(phi)[1]; });
        out.A_bar = kSaddleValue + n.A / I.value;
        out.B_bar = kSaddleValue + n.B / I.value;
        out.error = n.error + I.error;
    }
    return out;
}

double imaginary_B_average(double delta) {
    const ReducedIntegral I = reduced_period_integral(delta, QuadratureMode::direct);
    const LevelPotential U(delta);
    const double lo = U.phi_min(), hi = 2.0 * kPi - U.phi_min();
    const auto breaks = saddle_breaks(lo, delta);
    auto left = [&](double u) {
        return 2.0 * u * mechanical_functions(lo + u * u).B_tilde.imag() / std::sqrt(U.above_min(u * u));
    };
    auto right = [&](double u) {
        return 2.0 * u * mechanical_functions(hi - u * u).B_tilde.imag() / std::sqrt(U.above_min(u * u));
    };
    const double total = detail::integrate(left, breaks).value + detail::integrate(right, breaks).value;
    return total / (2.0 * I.value);
}

SeparatrixConstants separatrix_constants(const DerivedConstants&, const MassConfig&) {
    const LevelPotential U(0.0);
    const Numerators n = weighted_integrals(
        U, [](double phi) { return secular_offsets(phi)[0]; }, [](double phi) { return secular_offsets(phi)[1]; });
    const double scale = std::sqrt(7.0 / 6.0);
    SeparatrixConstants out;
    out.C_A_integral = n.A;
    out.C_B_integral = n.B;
    out.C_A = scale * n.A;
    out.C_B = scale * n.B;
    out.c2 = 2.0 * (out.C_A - out.C_B);
    out.quadrature_error = scale * n.error;
    return out;
}

std::array<double, 2> characteristic_roots(double A_bar, double B_bar, double m1, double m2) {
    const double P = m1 * m2;
    const double trace = (m1 + m2) / P * A_bar;
    const double det = (A_bar - B_bar) * (A_bar + B_bar) / P;
    const double disc = std::sqrt(A_bar * A_bar * (m1 - m2) * (m1 - m2) + 4.0 * P * B_bar * B_bar) / P;
    const double big = 0.5 * (trace + disc);
    return {big, det / big};
}

SecularSpectrum secular_eigs(double delta, const DerivedConstants& c, const MassConfig& cfg) {
    const QuadratureMode mode = delta < kSplitSwitchDelta ? QuadratureMode::split : QuadratureMode::direct;
    const AveragedCoefficients ab = averaged_AB(delta, c, cfg, mode);
    const double m1 = cfg.m1, m2 = cfg.m2;

    Eigen::Matrix2d Q;
    Q << ab.A_bar / m1, ab.B_bar / std::sqrt(m1 * m2), ab.B_bar / std::sqrt(m1 * m2), ab.A_bar / m2;
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(Q, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("secular eigen-solve failed");
    const Eigen::Vector2d ev = solver.eigenvalues();  // ascending

    SecularSpectrum s;
    s.delta = delta;
    s.A_bar = ab.A_bar;
    s.B_bar = ab.B_bar;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) s.Q[i][j] = Q(i, j);
    }
    s.eigenvalues = {ev(1), ev(0)};
    const double scale = cfg.epsilon * cfg.upsilon0 * m1 * m2 / cfg.m0;
    s.g1 = scale * ev(1);
    s.g2 = scale * ev(0);
    s.quadrature_error = ab.error;
    if (s.g1 == s.g2) throw NumericalError("secular spectrum is degenerate");
    return s;
}

double default_delta_rule(double epsilon) { return std::pow(epsilon, 0.1); }

FrequencyLadder frequency_ladder(std::span<const double> epsilons, const std::function<double(double)>& delta_rule,
                                 const MassConfig& cfg) {
    FrequencyLadder out;
    for (const double eps : epsilons) {
        const MassConfig ce = with_epsilon(cfg, eps);
        const DerivedConstants c = derive_constants(ce);
        LadderRow row;
        row.epsilon = eps;
        row.delta = delta_rule(eps);
        row.upsilon = ce.upsilon0;
        const QuadratureMode mode = row.delta < kSplitSwitchDelta ? QuadratureMode::split : QuadratureMode::direct;
        row.nu = period(row.delta, c, ce, mode).nu;
        const SecularSpectrum s = secular_eigs(row.delta, c, ce);
        row.g1 = s.g1;
        row.g2 = s.g2;
        out.rows.push_back(row);
    }

    std::vector<LadderRow> sorted = out.rows;
    std::sort(sorted.begin(), sorted.end(), [](const LadderRow& a, const LadderRow& b) { return a.epsilon > b.epsilon; });
    out.separated = true;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        const auto& p = sorted[i - 1];
        const auto& q = sorted[i];
        const double slow_p = std::max(std::abs(p.g1), std::abs(p.g2)) / p.nu;
        const double slow_q = std::max(std::abs(q.g1), std::abs(q.g2)) / q.nu;
        if (!(q.nu / q.upsilon < p.nu / p.upsilon) || !(slow_q < slow_p)) out.separated = false;
    }
    return out;
}

MelnikovResult melnikov_min_divisor(std::array<double, 2> omega, std::array<double, 2> Omega, long K0) {
    if (K0 < 1) throw DomainError("melnikov_min_divisor: K0 must be at least 1");
    if (K0 > kMaxMelnikovBound) throw DomainError("melnikov_min_divisor: K0 above the 1e6 cap");
    for (double v : {omega[0], omega[1], Omega[0], Omega[1]}) {
        if (!std::isfinite(v)) throw DomainError("melnikov_min_divisor: non-finite frequency");
    }

    // Among equal minima prefer the shortest (k, l), then the sign-canonical one.
    auto key = [](long k1, long k2, long l1, long l2) {
        const long len = std::labs(k1) + std::labs(k2) + std::labs(l1) + std::labs(l2);
        const long first = k1 != 0 ? k1 : (k2 != 0 ? k2 : (l1 != 0 ? l1 : l2));
        return std::make_tuple(len, first > 0 ? 0 : 1, -k1, -k2, -l1, -l2);
    };

    MelnikovResult best;
    best.min_divisor = std::numeric_limits<double>::infinity();
    auto offer = [&](long k1, long k2, long l1, long l2) {
        if (k1 == 0 && k2 == 0) return;
        if (k2 < -K0 || k2 > K0) return;
        const double v = std::abs(static_cast<double>(k1) * omega[0] + static_cast<double>(k2) * omega[1] +
                                  static_cast<double>(l1) * Omega[0] + static_cast<double>(l2) * Omega[1]);
        if (v < best.min_divisor ||
            (v == best.min_divisor && key(k1, k2, l1, l2) < key(best.k[0], best.k[1], best.l[0], best.l[1]))) {
            best.min_divisor = v;
            best.k = {k1, k2};
            best.l = {l1, l2};
        }
    };

    for (long l1 = -2; l1 <= 2; ++l1) {
        for (long l2 = -2; l2 <= 2; ++l2) {
            if (std::labs(l1) + std::labs(l2) > 2) continue;
            const double shift = static_cast<double>(l1) * Omega[0] + static_cast<double>(l2) * Omega[1];
            for (long k1 = -K0; k1 <= K0; ++k1) {
                const double c = static_cast<double>(k1) * omega[0] + shift;
                if (omega[1] == 0.0) {
                    offer(k1, k1 == 0 ? 1 : 0, l1, l2);
                    continue;
                }
                // |c + k2 omega2| is V-shaped in k2: the box minimum is the clamped nearest integer
                const double target = std::clamp(-c / omega[1], static_cast<double>(-K0), static_cast<double>(K0));
                const long k2 = std::lround(target);
                for (long d = -1; d <= 1; ++d) offer(k1, k2 + d, l1, l2);
                if (k1 == 0 && std::labs(k2) <= 1) {
                    offer(0, 1, l1, l2);
                    offer(0, -1, l1, l2);
                }
            }
        }
    }
    best.min_secular = std::min({std::abs(Omega[0]), std::abs(Omega[1]), std::abs(Omega[0] - Omega[1])});
    return best;
}

}  // namespace coorbital
