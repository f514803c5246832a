#include "coorbital/errors.hpp"
#include "coorbital/system_params.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace coorbital;
using coorbital::test::kPi;
using coorbital::test::rel_err;

TEST(DeriveConstants, ReferenceValues) {
    const auto c = derive_constants(test::reference());
    // independent evaluation of the reduction constants
    const double u = std::cbrt(2.0 * kPi);
    const double A = 1.5 * u * (1.0 + 1.0 / 0.3);
    const double B = 1.5 / u * 0.3;
    const double E = 1.5 * u / 1.3;
    EXPECT_NEAR(c.kappa, 1.0 / 1.3, 1e-15);
    EXPECT_NEAR(c.A, A, 1e-13);
    EXPECT_NEAR(c.B, B, 1e-15);
    EXPECT_NEAR(c.E, E, 1e-14);
    EXPECT_DOUBLE_EQ(c.D, 0.3);
    EXPECT_NEAR(c.K, std::sqrt(7.0 * kPi * kPi * A * B / 6.0), 1e-13);
    // rounded golden values
    EXPECT_NEAR(c.A, 11.994, 1e-3);
    EXPECT_NEAR(c.B, 0.24387, 1e-5);
    EXPECT_NEAR(c.E, 2.1292, 1e-4);
    EXPECT_NEAR(c.K, 5.8034, 1e-4);
}

TEST(DeriveConstants, UnitAxesInTheMasslessLimit) {
    const auto c = derive_constants({1.0, 1.0, 1.0, 1e-300, 1.0});
    EXPECT_DOUBLE_EQ(c.a10, 1.0);
    EXPECT_DOUBLE_EQ(c.a20, 1.0);
    EXPECT_DOUBLE_EQ(c.a_star, 1.0);
    EXPECT_DOUBLE_EQ(c.lambda10, 1.0);
    EXPECT_DOUBLE_EQ(c.lambda20, 1.0);
}

TEST(DeriveConstants, KSquaredIdentity) {
    for (const MassConfig cfg : {test::reference(), MassConfig{2.0, 0.1, 5.0, 1e-6, 0.7}, MassConfig{1, 3, 3, 0.01, 9}}) {
        const auto c = derive_constants(cfg);
        EXPECT_NEAR(c.K * c.K / (c.A * c.B), 7.0 * kPi * kPi / 6.0, 1e-13);
    }
}

TEST(DeriveConstants, FrequencyScaling) {
    const MassConfig base = test::reference();
    const auto c = derive_constants(base);
    for (double s : {0.5, 3.0, 17.0}) {
        MassConfig scaled = base;
        scaled.upsilon0 *= s;
        const auto k = derive_constants(scaled);
        EXPECT_LT(rel_err(k.a10, c.a10 * std::pow(s, -2.0 / 3.0)), 1e-12);
        EXPECT_LT(rel_err(k.a20, c.a20 * std::pow(s, -2.0 / 3.0)), 1e-12);
        EXPECT_LT(rel_err(k.a_star, c.a_star * std::pow(s, -2.0 / 3.0)), 1e-12);
        EXPECT_LT(rel_err(k.lambda10, c.lambda10 * std::pow(s, -1.0 / 3.0)), 1e-12);
        EXPECT_LT(rel_err(k.lambda20, c.lambda20 * std::pow(s, -1.0 / 3.0)), 1e-12);
    }
}

TEST(DeriveConstants, RatioForms) {
    for (const MassConfig cfg : {test::reference(), MassConfig{2.0, 0.1, 5.0, 1e-6, 0.7}}) {
        const auto c = derive_constants(cfg);
        EXPECT_LT(rel_err(c.A / c.E, (1.0 / cfg.m1 + 1.0 / cfg.m2) * (cfg.m1 + cfg.m2)), 1e-14);
        EXPECT_LT(rel_err(c.B / c.D, 1.5 / std::cbrt(cfg.upsilon0) * std::cbrt(cfg.m0 * cfg.m0)), 1e-14);
    }
}

TEST(DeriveConstants, Deterministic) {
    const auto a = derive_constants(test::reference());
    const auto b = derive_constants(test::reference());
    EXPECT_EQ(a.A, b.A);
    EXPECT_EQ(a.lambda10, b.lambda10);
    EXPECT_EQ(a.K, b.K);
}

TEST(Validate, RejectsNonPositiveOrNonFinite) {
    MassConfig cfg = test::reference();
    cfg.m1 = -1.0;
    EXPECT_THROW(derive_constants(cfg), ConfigError);
    cfg = test::reference();
    cfg.epsilon = 0.0;
    EXPECT_THROW(validate(cfg), ConfigError);
    cfg = test::reference();
    cfg.upsilon0 = std::nan("");
    EXPECT_THROW(validate(cfg), ConfigError);
    EXPECT_THROW(with_epsilon(test::reference(), -1e-3), ConfigError);
}

TEST(Gascheau, Examples) {
    EXPECT_TRUE(gascheau_stable(1.0, 1e-3, 3e-4));
    EXPECT_TRUE(gascheau_stable(test::reference()));
    EXPECT_TRUE(gascheau_stable(1.0, 0.0, 0.0));
    EXPECT_FALSE(gascheau_stable(1.0, 0.5, 0.5));
    // Routh's critical ratio for a single companion is about 0.0385
    EXPECT_TRUE(gascheau_stable(1.0, 0.038, 0.0));
    EXPECT_FALSE(gascheau_stable(1.0, 0.0402, 0.0));
    EXPECT_THROW(gascheau_stable(0.0, 0.1, 0.1), ConfigError);
}

TEST(ParseConfig, ReadsAllKeysAndComments) {
    const auto cfg = parse_config("# header\nm0 = 1\n m1=1 \nm2 = 0.3 # lighter\n\nepsilon = 1e-3\nupsilon0 = +6.5\n");
    EXPECT_EQ(cfg.m2, 0.3);
    EXPECT_EQ(cfg.epsilon, 1e-3);
    EXPECT_EQ(cfg.upsilon0, 6.5);
    EXPECT_FALSE(lighter_planet_first(cfg));
}

TEST(ParseConfig, Errors) {
    const std::string base = "m0=1\nm1=1\nm2=1\nepsilon=1e-3\nupsilon0=1\n";
    EXPECT_NO_THROW(parse_config(base));
    EXPECT_THROW(parse_config(base + "m3=1\n"), ConfigError);
    EXPECT_THROW(parse_config(base + "m1=2\n"), ConfigError);
    EXPECT_THROW(parse_config("m0=1\nm1=1\nm2=1\nepsilon=1e-3\n"), ConfigError);
    EXPECT_THROW(parse_config("m0=1\nm1=abc\nm2=1\nepsilon=1e-3\nupsilon0=1\n"), ConfigError);
    EXPECT_THROW(parse_config("m0=1\nm1 1\nm2=1\nepsilon=1e-3\nupsilon0=1\n"), ConfigError);
    EXPECT_THROW(parse_config("m0=1\nm1=-1\nm2=1\nepsilon=1e-3\nupsilon0=1\n"), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/file.cfg"), ConfigError);
}
