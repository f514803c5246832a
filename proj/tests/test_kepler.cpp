#include "coorbital/errors.hpp"
#include "coorbital/kepler.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace coorbital;
using coorbital::test::kPi;

namespace {

double fixed_point_kepler(double M, double e) {
    double E = M;
    for (int i = 0; i < 500; ++i) E = M + e * std::sin(E);
    return E;
}

double angle_gap(double a, double b) { return std::abs(std::remainder(a - b, 2.0 * kPi)); }

}  // namespace

TEST(SolveKepler, Examples) {
    EXPECT_EQ(solve_kepler(0.0, 0.3), 0.0);
    EXPECT_DOUBLE_EQ(solve_kepler(1.0, 0.0), 1.0);
    const double E = solve_kepler(1.0, 0.1);
    EXPECT_NEAR(E, 1.08860, 1e-5);
    EXPECT_NEAR(E, fixed_point_kepler(1.0, 0.1), 1e-14);
    EXPECT_LE(std::abs(E - 0.1 * std::sin(E) - 1.0), 1e-14);
}

TEST(SolveKepler, ResidualOverTheDomain) {
    for (double e : {0.0, 0.05, 0.3, 0.6, 0.9}) {
        for (double M = -20.0; M <= 20.0; M += 0.37) {
            const double E = solve_kepler(M, e);
            EXPECT_LE(std::abs(E - e * std::sin(E) - M), 1e-13 * std::max(1.0, std::abs(M))) << M << " " << e;
        }
    }
    EXPECT_THROW(solve_kepler(1.0, 0.95), DomainError);
    EXPECT_THROW(solve_kepler(1.0, -0.1), DomainError);
    EXPECT_THROW(solve_kepler(std::nan(""), 0.1), DomainError);
}

TEST(Elements, CircularUnitOrbit) {
    auto s = elements_to_cartesian({1.0, 0.0, 0.0, 0.0}, 1.0, 1.0);
    EXPECT_NEAR(s.r.x, 1.0, 1e-15);
    EXPECT_NEAR(s.r.y, 0.0, 1e-15);
    EXPECT_NEAR(s.p.x, 0.0, 1e-15);
    EXPECT_NEAR(s.p.y, 1.0, 1e-15);
    s = elements_to_cartesian({1.0, 0.0, kPi / 2, 0.0}, 1.0, 1.0);
    EXPECT_NEAR(s.r.x, 0.0, 1e-15);
    EXPECT_NEAR(s.r.y, 1.0, 1e-15);
    EXPECT_NEAR(s.p.x, -1.0, 1e-15);
    EXPECT_NEAR(s.p.y, 0.0, 1e-15);
}

TEST(Elements, VisVivaAtPericentre) {
    const auto s = elements_to_cartesian({1.0, 0.1, 0.0, 0.0}, 1.0, 1.0);
    EXPECT_NEAR(s.r.x, 0.9, 1e-15);
    EXPECT_NEAR(s.r.y, 0.0, 1e-15);
    EXPECT_NEAR(norm(s.p), std::sqrt(2.0 / 0.9 - 1.0), 1e-14);
    EXPECT_NEAR(norm(s.p), 1.10554, 1e-5);
}

TEST(Elements, RoundTrip) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const OrbitalElements el{0.5 + u(rng), 0.01 + 0.8 * u(rng), 2 * kPi * u(rng) - kPi, 2 * kPi * u(rng) - kPi};
        const double mu = 0.5 + u(rng), mhat = 0.1 + u(rng);
        const auto back = cartesian_to_elements(elements_to_cartesian(el, mu, mhat), mu, mhat);
        EXPECT_NEAR(back.a, el.a, 1e-12);
        EXPECT_NEAR(back.e, el.e, 1e-12);
        EXPECT_LE(angle_gap(back.lambda, el.lambda), 1e-11);
        EXPECT_LE(angle_gap(back.varpi, el.varpi), 1e-10);
    }
}

TEST(Poincare, CircularBranchAtResonance) {
    const auto c = derive_constants(test::reference());
    const PoincareState p{c.lambda10, c.lambda20, 0.4, 0.4 - kPi / 3.0, {}, {}};
    const auto s = poincare_to_cartesian(p, c);
    EXPECT_NEAR(norm(s.r1), c.a10, 1e-14);
    EXPECT_NEAR(norm(s.r2), c.a20, 1e-14);
    const double chord = std::sqrt(c.a10 * c.a10 + c.a20 * c.a20 - 2 * c.a10 * c.a20 * std::cos(kPi / 3.0));
    EXPECT_NEAR(norm(s.r1 - s.r2), chord, 1e-14);
}

TEST(Poincare, RoundTripRandomStates) {
    const auto c = derive_constants(test::reference());
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        PoincareState p;
        p.Lambda1 = c.lambda10 * (0.9 + 0.2 * u(rng));
        p.Lambda2 = c.lambda20 * (0.9 + 0.2 * u(rng));
        p.lambda1 = 2 * kPi * u(rng) - kPi;
        p.lambda2 = 2 * kPi * u(rng) - kPi;
        auto ecc = [&](double L) {
            const double e = 0.3 * u(rng);
            return std::sqrt(L * (1 - std::sqrt(1 - e * e))) * std::polar(1.0, 2 * kPi * u(rng));
        };
        p.x1 = ecc(p.Lambda1);
        p.x2 = ecc(p.Lambda2);
        const auto q = cartesian_to_poincare(poincare_to_cartesian(p, c), c);
        worst = std::max({worst, std::abs(q.Lambda1 - p.Lambda1), std::abs(q.Lambda2 - p.Lambda2),
                          angle_gap(q.lambda1, p.lambda1), angle_gap(q.lambda2, p.lambda2), std::abs(q.x1 - p.x1),
                          std::abs(q.x2 - p.x2)});
    }
    EXPECT_LE(worst, 1e-12);
}

TEST(Poincare, RegularAtZeroEccentricity) {
    const auto c = derive_constants(test::reference());
    const double e = 1e-12;
    const auto x = std::sqrt(c.lambda10 * (1 - std::sqrt(1 - e * e))) * std::polar(1.0, 0.7);
    const auto a = poincare_planet_to_cartesian(c.lambda10, 1.1, 0.0, c.mu1, c.mhat1);
    const auto b = poincare_planet_to_cartesian(c.lambda10, 1.1, x, c.mu1, c.mhat1);
    EXPECT_LE(norm(a.r - b.r), 1e-9);
    EXPECT_LE(norm(a.p - b.p), 1e-9);
    double L = 0, l = 0;
    std::complex<double> xb;
    cartesian_planet_to_poincare(a, c.mu1, c.mhat1, L, l, xb);
    EXPECT_LE(std::abs(xb), 1e-12);
    EXPECT_NEAR(l, 1.1, 1e-13);
}

TEST(Poincare, DomainErrors) {
    const auto c = derive_constants(test::reference());
    EXPECT_THROW(poincare_planet_to_cartesian(-1.0, 0.0, 0.0, c.mu1, c.mhat1), DomainError);
    EXPECT_THROW(poincare_planet_to_cartesian(1.0, 0.0, 1.1, c.mu1, c.mhat1), DomainError);
}

TEST(KeplerDrift, MatchesMeanAnomalyAdvance) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        OrbitalElements el{0.3 + u(rng), 0.7 * u(rng), 2 * kPi * u(rng), 2 * kPi * u(rng)};
        const double mu = 0.5 + u(rng), dt = 20.0 * (u(rng) - 0.5);
        auto s = elements_to_cartesian(el, mu, 1.0);
        Vec2 r = s.r, v = s.p;
        kepler_drift(r, v, mu, dt);
        el.lambda += std::sqrt(mu / (el.a * el.a * el.a)) * dt;
        const auto ref = elements_to_cartesian(el, mu, 1.0);
        EXPECT_LE(norm(r - ref.r), 1e-11 * (1.0 + std::abs(dt)));
        EXPECT_LE(norm(v - ref.p), 1e-11 * (1.0 + std::abs(dt)));
    }
}

TEST(KeplerDrift, ConservesAngularMomentumAndReverses) {
    Vec2 r{0.3, 0.01}, v{0.02, 1.84};
    const Vec2 r0 = r, v0 = v;
    const double L0 = cross(r, v);
    kepler_drift(r, v, 1.0, 3.7);
    EXPECT_NEAR(cross(r, v), L0, 1e-15);
    kepler_drift(r, v, 1.0, -3.7);
    EXPECT_LE(norm(r - r0), 1e-14);
    EXPECT_LE(norm(v - v0), 1e-13);
    Vec2 fast{0.0, 10.0};
    EXPECT_THROW(kepler_drift(r, fast, 1.0, 1.0), DomainError);
}
