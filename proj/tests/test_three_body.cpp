#include "coorbital/errors.hpp"
#include "coorbital/kepler.hpp"
#include "coorbital/three_body.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace coorbital;
using coorbital::test::kPi;

namespace {

// Planets on the equilateral configuration, optionally eccentric.
CartesianState equilateral(const MassConfig& cfg, double e = 0.0) {
    const auto c = derive_constants(cfg);
    const auto x = [&](double L, double w) { return std::sqrt(L * (1 - std::sqrt(1 - e * e))) * std::polar(1.0, w); };
    return poincare_to_cartesian({c.lambda10, c.lambda20, kPi / 3.0, 0.0, x(c.lambda10, 0.3), x(c.lambda20, 2.0)}, c);
}

double max_energy_error(const Trajectory& tr) {
    double worst = 0.0;
    for (double e : tr.energy_series) worst = std::max(worst, std::abs(e / tr.energy_series.front() - 1.0));
    return worst;
}

double max_angmom_error(const Trajectory& tr) {
    double worst = 0.0;
    for (double l : tr.angmom_series) worst = std::max(worst, std::abs(l / tr.angmom_series.front() - 1.0));
    return worst;
}

double distance(const CartesianState& a, const CartesianState& b) {
    return std::max({norm(a.r1 - b.r1), norm(a.r2 - b.r2), norm(a.p1 - b.p1), norm(a.p2 - b.p2)});
}

}  // namespace

TEST(Energy, DecoupledCircularOrbits) {
    const MassConfig cfg{1.0, 1.0, 1.0, 1e-300, 1.0};
    const CartesianState s{{0.0, 1.0}, {-1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    EXPECT_NEAR(hamiltonian_energy(s, cfg), -1.0, 1e-15);
    EXPECT_LE(std::abs(perturbation_energy(s, cfg)), 1e-299);
}

TEST(Energy, AntipodalPerturbation) {
    const MassConfig cfg = test::reference();
    const auto c = derive_constants(cfg);
    const auto s = poincare_to_cartesian({c.lambda10, c.lambda20, kPi, 0.0, {}, {}}, c);
    const double expected = cfg.epsilon * (dot(s.p1, s.p2) / cfg.m0 - cfg.m1 * cfg.m2 / (c.a10 + c.a20));
    EXPECT_NEAR(perturbation_energy(s, cfg), expected, 1e-17);
    EXPECT_LT(dot(s.p1, s.p2), 0.0);
}

TEST(EquationsOfMotion, DecoupledKeplerFields) {
    const MassConfig cfg{1.0, 1.0, 0.5, 1e-300, 2.0};
    const CartesianState s{{0.1, 0.9}, {-0.4, 0.2}, {0.8, 0.3}, {-0.2, 1.1}};
    const auto d = equations_of_motion(s, cfg);
    const auto c = derive_constants(cfg);
    const double r1 = norm(s.r1), r2 = norm(s.r2);
    EXPECT_NEAR(d.dp1.x, -c.mu1 * c.mhat1 * s.r1.x / (r1 * r1 * r1), 1e-15);
    EXPECT_NEAR(d.dp2.y, -c.mu2 * c.mhat2 * s.r2.y / (r2 * r2 * r2), 1e-15);
    EXPECT_NEAR(d.dr1.x, s.p1.x / c.mhat1, 1e-15);
    EXPECT_NEAR(d.dr2.y, s.p2.y / c.mhat2, 1e-15);
}

TEST(EquationsOfMotion, AngularMomentumIsStationary) {
    const MassConfig cfg = test::reference();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const CartesianState s{{u(rng), u(rng)}, {u(rng), u(rng)}, {1.0 + 0.3 * u(rng), u(rng)}, {u(rng), -1.0 + 0.3 * u(rng)}};
        const auto d = equations_of_motion(s, cfg);
        const double rate = cross(d.dr1, s.p1) + cross(s.r1, d.dp1) + cross(d.dr2, s.p2) + cross(s.r2, d.dp2);
        EXPECT_LE(std::abs(rate), 1e-13);
    }
}

TEST(AngularMomentum, SignAndParity) {
    const CartesianState s{{0.0, 1.0}, {0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}};
    EXPECT_DOUBLE_EQ(angular_momentum(s), 1.0);
    const CartesianState t{{0.3, 0.8}, {-0.2, 0.5}, {0.7, 0.4}, {-0.9, 0.1}};
    const CartesianState m{{0.3, -0.8}, {-0.2, -0.5}, {0.7, -0.4}, {-0.9, -0.1}};
    EXPECT_DOUBLE_EQ(angular_momentum(m), -angular_momentum(t));
}

TEST(Integrate, DecoupledLimitIsPeriodic) {
    const MassConfig cfg{1.0, 1.0, 0.5, 1e-300, 2.0 * kPi};
    const auto s0 = equilateral(cfg);
    const auto tr = integrate(s0, cfg, 10.0, 0.005, Scheme::splitting);
    ASSERT_TRUE(tr.completed);
    EXPECT_NEAR(tr.times.back(), 10.0, 1e-12);
    EXPECT_LE(distance(tr.states.back(), s0), 1e-10);
    // the adaptive scheme is only as good as its local tolerance
    const auto rk = integrate(s0, cfg, 10.0, 0.5, Scheme::rk_adaptive);
    EXPECT_LE(distance(rk.states.back(), s0), 1e-7);
}

TEST(Integrate, LongRunConservation) {
    const MassConfig cfg = test::reference();
    const auto tr = integrate(equilateral(cfg), cfg, 1000.0, 1.0 / 200.0, Scheme::splitting, {.sample_stride = 50});
    ASSERT_TRUE(tr.completed);
    EXPECT_LE(max_energy_error(tr), 1e-10);
    EXPECT_LE(max_angmom_error(tr), 1e-12);
}

TEST(Integrate, FourthOrderConvergence) {
    const MassConfig cfg = test::reference();
    const auto s0 = equilateral(cfg, 0.1);
    const double coarse = max_energy_error(integrate(s0, cfg, 5.0, 1.0 / 50.0, Scheme::splitting));
    const double fine = max_energy_error(integrate(s0, cfg, 5.0, 1.0 / 100.0, Scheme::splitting));
    EXPECT_NEAR(coarse / fine, 16.0, 0.2 * 16.0) << coarse << " " << fine;
}

TEST(Integrate, TimeReversal) {
    const MassConfig cfg = test::reference();
    const auto s0 = equilateral(cfg, 0.05);
    const SplittingIntegrator stepper(cfg);
    CartesianState s = s0, carry{};
    for (int i = 0; i < 20000; ++i) stepper.step(s, carry, 0.005);
    for (int i = 0; i < 20000; ++i) stepper.step(s, carry, -0.005);
    EXPECT_LE(distance(s, s0), 1e-9);
}

TEST(Integrate, AdaptiveSchemeAgreesWithSplitting) {
    const MassConfig cfg = test::reference();
    const auto s0 = equilateral(cfg, 0.05);
    const auto a = integrate(s0, cfg, 20.0, 0.005, Scheme::splitting, {.sample_stride = 400});
    const auto b = integrate(s0, cfg, 20.0, 2.0, Scheme::rk_adaptive);
    ASSERT_EQ(a.times.size(), b.times.size());
    for (std::size_t i = 0; i < a.times.size(); ++i) {
        EXPECT_NEAR(a.times[i], b.times[i], 1e-12);
        EXPECT_LE(distance(a.states[i], b.states[i]), 1e-7);
    }
    EXPECT_LE(max_energy_error(b), 1e-9);
}

TEST(Integrate, HillGuardStopsCloseApproach) {
    const MassConfig cfg = test::reference();
    const auto c = derive_constants(cfg);
    // nearly conjunct planets drifting together
    const auto s0 = poincare_to_cartesian({c.lambda10 * 1.001, c.lambda20 * 0.999, 0.15, 0.0, {}, {}}, c);
    for (Scheme sc : {Scheme::splitting, Scheme::rk_adaptive}) {
        const auto tr = integrate(s0, cfg, 200.0, 0.01, sc);
        EXPECT_FALSE(tr.completed);
        EXPECT_FALSE(tr.abort_reason.empty());
        EXPECT_LT(norm(tr.states.back().r1 - tr.states.back().r2), std::cbrt(cfg.epsilon) * c.a_star);
    }
}

TEST(Integrate, RejectsBadArguments) {
    const MassConfig cfg = test::reference();
    const auto s0 = equilateral(cfg);
    EXPECT_THROW(integrate(s0, cfg, 1.0, 0.1, Scheme::splitting), DomainError);
    EXPECT_THROW(integrate(s0, cfg, 1.0, -0.01, Scheme::splitting), DomainError);
    EXPECT_THROW(integrate(s0, cfg, 0.0, 0.01, Scheme::rk_adaptive), DomainError);
    CartesianState bad = s0;
    bad.r2 = bad.r1;
    EXPECT_THROW(integrate(bad, cfg, 1.0, 0.01, Scheme::splitting), DomainError);
}
