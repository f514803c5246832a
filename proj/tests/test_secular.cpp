#include "coorbital/action_angle.hpp"
#include "coorbital/errors.hpp"
#include "coorbital/resonant_frame.hpp"
#include "coorbital/secular.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace coorbital;
using coorbital::test::kPi;
using coorbital::test::rel_err;

namespace {

struct Fixture : ::testing::Test {
    MassConfig cfg = test::reference();
    DerivedConstants c = derive_constants(cfg);
};

double brute_force_divisor(std::array<double, 2> w, std::array<double, 2> W, long K0) {
    double best = INFINITY;
    for (long k1 = -K0; k1 <= K0; ++k1)
        for (long k2 = -K0; k2 <= K0; ++k2)
            for (long l1 = -2; l1 <= 2; ++l1)
                for (long l2 = -2; l2 <= 2; ++l2) {
                    if ((k1 == 0 && k2 == 0) || std::labs(l1) + std::labs(l2) > 2) continue;
                    best = std::min(best, std::abs(k1 * w[0] + k2 * w[1] + l1 * W[0] + l2 * W[1]));
                }
    return best;
}

}  // namespace

using Separatrix = Fixture;

TEST_F(Separatrix, ConstantsInTheirBrackets) {
    const auto s = separatrix_constants(c, cfg);
    EXPECT_GT(s.C_A, -28.0);
    EXPECT_LT(s.C_A, -27.0);
    EXPECT_GT(s.C_B, 16.0);
    EXPECT_LT(s.C_B, 17.0);
    EXPECT_GT(s.c2, -90.0);
    EXPECT_LT(s.c2, -86.0);
    EXPECT_LT(s.c2, 0.0);
    EXPECT_EQ(s.c2 - 2.0 * (s.C_A - s.C_B), 0.0);
    EXPECT_LE(s.quadrature_error, 1e-6);
    EXPECT_NEAR(s.C_A, std::sqrt(7.0 / 6.0) * s.C_A_integral, 1e-14 * std::abs(s.C_A));
}

using Averages = Fixture;

TEST_F(Averages, OffsetsMatchDirectDifferences) {
    for (double phi = 0.5; phi < 6.0; phi += 0.37) {
        const auto m = mechanical_functions(phi);
        const auto off = secular_offsets(phi);
        EXPECT_NEAR(off[0], m.A_tilde - 0.875, 1e-12 * std::max(1.0, std::abs(m.A_tilde)));
        EXPECT_NEAR(off[1], m.B_tilde.real() - 0.875, 1e-12 * std::max(1.0, std::abs(m.B_tilde)));
    }
    // near opposition the offsets vanish quadratically
    const auto tiny = secular_offsets(kPi + 1e-6);
    EXPECT_LT(std::abs(tiny[0]), 1e-10);
    EXPECT_LT(std::abs(tiny[1]), 1e-10);
    EXPECT_NE(tiny[0], 0.0);
}

TEST_F(Averages, DirectAndSplitModesAgree) {
    const auto a = averaged_AB(1e-5, c, cfg, QuadratureMode::direct);
    const auto b = averaged_AB(1e-5, c, cfg, QuadratureMode::split);
    EXPECT_NEAR(a.A_bar, b.A_bar, 1e-8 * std::abs(a.A_bar));
    EXPECT_NEAR(a.B_bar, b.B_bar, 1e-8 * std::abs(a.B_bar));
}

TEST_F(Averages, ApproachSaddleValuesLogarithmically) {
    const auto sep = separatrix_constants(c, cfg);
    double prevA = INFINITY;
    for (double d : {1e-10, 1e-30, 1e-60, 1e-150, 1e-300}) {
        const auto ab = averaged_AB(d, c, cfg, QuadratureMode::split);
        const double L = std::abs(std::log(d));
        const double gapA = std::abs((ab.A_bar - 0.875) * L - sep.C_A);
        EXPECT_LT(gapA, prevA);
        prevA = gapA;
        EXPECT_LT(ab.A_bar, 0.875);
        EXPECT_GT(ab.B_bar, 0.875);
    }
    EXPECT_LT(prevA, 0.02 * std::abs(sep.C_A));
}

TEST_F(Averages, SmoothInLogDelta) {
    // no jumps: along a uniform log grid A_bar stays concave, B_bar convex, and
    // third differences stay below second differences
    std::vector<double> A, B;
    for (int i = 0; i <= 20; ++i) {
        const auto ab = averaged_AB(std::pow(10.0, -6.0 + 0.25 * i), c, cfg, QuadratureMode::direct);
        A.push_back(ab.A_bar);
        B.push_back(ab.B_bar);
    }
    auto second = [](const std::vector<double>& v, std::size_t i) { return v[i + 1] - 2 * v[i] + v[i - 1]; };
    for (std::size_t i = 1; i + 1 < A.size(); ++i) {
        EXPECT_LT(second(A, i), 0.0) << i;
        EXPECT_GT(second(B, i), 0.0) << i;
        if (i + 2 < A.size()) {
            EXPECT_LT(std::abs(second(A, i + 1) - second(A, i)), std::abs(second(A, i))) << i;
            EXPECT_LT(std::abs(second(B, i + 1) - second(B, i)), std::abs(second(B, i))) << i;
        }
    }
}

TEST_F(Averages, ImaginaryPartAveragesToZero) {
    for (double d : {1e-4, 0.05}) EXPECT_NEAR(imaginary_B_average(d), 0.0, 1e-12);
}

using Spectrum = Fixture;

TEST_F(Spectrum, EigenpathMatchesCharacteristicRoots) {
    for (double d : {1e-40, 1e-4, 0.05, 0.3}) {
        const auto s = secular_eigs(d, c, cfg);
        const auto roots = characteristic_roots(s.A_bar, s.B_bar, cfg.m1, cfg.m2);
        const double big = std::max(std::abs(roots[0]), std::abs(roots[1]));
        EXPECT_NEAR(s.eigenvalues[0], roots[0], 1e-12 * big);
        EXPECT_NEAR(s.eigenvalues[1], roots[1], 1e-12 * big);
        const double P = cfg.m1 * cfg.m2;
        const double trace = s.Q[0][0] + s.Q[1][1];
        const double det = s.Q[0][0] * s.Q[1][1] - s.Q[0][1] * s.Q[1][0];
        EXPECT_NEAR(trace, (cfg.m1 + cfg.m2) / P * s.A_bar, 1e-13 * std::abs(trace));
        EXPECT_NEAR(det, (s.A_bar * s.A_bar - s.B_bar * s.B_bar) / P, 1e-13 * std::max(1.0, std::abs(det)));
        EXPECT_EQ(s.Q[0][1], s.Q[1][0]);
        const double scale = cfg.epsilon * cfg.upsilon0 * cfg.m1 * cfg.m2 / cfg.m0;
        EXPECT_NEAR(s.g1, scale * s.eigenvalues[0], 1e-15);
        EXPECT_NEAR(s.g2, scale * s.eigenvalues[1], 1e-15);
    }
}

TEST_F(Spectrum, LeadingOrderFastSecularFrequency) {
    const double lead = 0.875 * cfg.epsilon * cfg.upsilon0 * (cfg.m1 + cfg.m2) / cfg.m0;
    EXPECT_NEAR(lead, 7.147e-3, 1e-6);
    const auto s = secular_eigs(1e-300, c, cfg);
    EXPECT_LT(rel_err(s.g1, lead), 0.1);
    EXPECT_LT(std::abs(s.g2), 0.2 * std::abs(s.g1));
}

TEST_F(Spectrum, SlowBranchScalesWithInverseLog) {
    // the combination stabilises; its limit carries the factor m1 m2 / (m1 + m2)^2
    const auto sep = separatrix_constants(c, cfg);
    const double M = cfg.m1 + cfg.m2;
    const double scale = cfg.epsilon * cfg.upsilon0 * M / cfg.m0;
    const double a = secular_eigs(1e-60, c, cfg).g2 * std::log(1e60) / scale;
    const double b = secular_eigs(1e-300, c, cfg).g2 * std::log(1e300) / scale;
    const double limit = sep.c2 * cfg.m1 * cfg.m2 / (M * M);
    EXPECT_LT(rel_err(b, limit), rel_err(a, limit));
    EXPECT_LT(rel_err(b, limit), 0.01);
}

TEST_F(Spectrum, LadderOrdering) {
    const std::vector<double> eps{1e-3};
    const auto one = frequency_ladder(eps, [](double) { return 1e-4; }, cfg);
    ASSERT_EQ(one.rows.size(), 1u);
    const auto& r = one.rows[0];
    EXPECT_EQ(r.upsilon, cfg.upsilon0);
    EXPECT_NEAR(nu_asymptotic(1e-4, c, cfg), 0.125, 2e-3);
    EXPECT_GT(r.nu, 0.06);
    EXPECT_LT(r.nu, 0.125);
    EXPECT_GT(std::abs(r.g1), 7e-4);
    EXPECT_LT(std::abs(r.g1), 7e-2);
    EXPECT_GT(std::abs(r.g2), 8e-3);
    EXPECT_LT(std::abs(r.g2), 8e-1);

    const std::vector<double> sweep{1e-3, 1e-5, 1e-7};
    const auto ladder = frequency_ladder(sweep, default_delta_rule, cfg);
    EXPECT_TRUE(ladder.separated);
    for (std::size_t i = 1; i < ladder.rows.size(); ++i) {
        EXPECT_LT(ladder.rows[i].nu / ladder.rows[i].upsilon, ladder.rows[i - 1].nu / ladder.rows[i - 1].upsilon);
        EXPECT_LT(std::abs(ladder.rows[i].g1) / ladder.rows[i].nu,
                  std::abs(ladder.rows[i - 1].g1) / ladder.rows[i - 1].nu);
    }
    EXPECT_NEAR(default_delta_rule(1e-10), 0.1, 1e-15);
}

TEST(Melnikov, DegenerateAndSmallExamples) {
    auto r = melnikov_min_divisor({0.0, 1.0}, {0.0, 0.0}, 3);
    EXPECT_EQ(r.min_divisor, 0.0);
    EXPECT_EQ(r.k, (std::array<long, 2>{1, 0}));
    EXPECT_EQ(r.l, (std::array<long, 2>{0, 0}));
    r = melnikov_min_divisor({std::sqrt(2.0), 1.0}, {0.0, 0.0}, 2);
    EXPECT_NEAR(r.min_divisor, std::sqrt(2.0) - 1.0, 1e-15);
    EXPECT_EQ(r.k, (std::array<long, 2>{1, -1}));
    EXPECT_THROW(melnikov_min_divisor({1, 1}, {0, 0}, 0), DomainError);
    EXPECT_THROW(melnikov_min_divisor({1, 1}, {0, 0}, kMaxMelnikovBound + 1), DomainError);
    EXPECT_THROW(melnikov_min_divisor({1, NAN}, {0, 0}, 3), DomainError);
}

TEST(Melnikov, MatchesBruteForce) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        const std::array<double, 2> w{u(rng), 5.0 * u(rng)}, W{0.01 * u(rng), 0.01 * u(rng)};
        const long K0 = 1 + i % 12;
        EXPECT_DOUBLE_EQ(melnikov_min_divisor(w, W, K0).min_divisor, brute_force_divisor(w, W, K0)) << i;
    }
}

TEST(Melnikov, SecularConditions) {
    const auto r = melnikov_min_divisor({0.2, 6.28}, {0.003, -0.001}, 50);
    EXPECT_NEAR(r.min_secular, 0.001, 1e-15);
}
