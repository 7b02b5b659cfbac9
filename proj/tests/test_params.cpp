#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hestonmle/errors.hpp"
#include "hestonmle/params.hpp"
#include "oracles.hpp"

using namespace hestonmle;

TEST(ValidateDomain, AcceptsFellerParameters) {
    EXPECT_TRUE(validate_domain(VolParams{1.0, 2.0, 1.0}).valid);
    EXPECT_TRUE(validate_domain(VolParams{16.6, 0.017, 0.0784}).valid);
}

TEST(ValidateDomain, NamesViolatedConstraint) {
    const auto feller = validate_domain(VolParams{1.0, 0.4, 1.0});
    EXPECT_FALSE(feller.valid);
    EXPECT_NE(feller.diagnostic.find("Feller condition violated"), std::string::npos);

    EXPECT_NE(validate_domain(VolParams{-1.0, 2.0, 1.0}).diagnostic.find("kappa"), std::string::npos);
    EXPECT_NE(validate_domain(VolParams{1.0, 0.0, 1.0}).diagnostic.find("theta"), std::string::npos);
    EXPECT_NE(validate_domain(VolParams{1.0, 2.0, 0.0}).diagnostic.find("gamma2"), std::string::npos);
}

TEST(ValidateDomain, FellerEqualityIsInvalid) {
    EXPECT_FALSE(validate_domain(VolParams{1.0, 0.5, 1.0}).valid);
}

TEST(ValidateDomain, HestonChecksCorrelation) {
    EXPECT_TRUE(validate_domain(HestonParams{{1.0, 2.0, 1.0}, 0.1, -0.54}).valid);
    EXPECT_FALSE(validate_domain(HestonParams{{1.0, 2.0, 1.0}, 0.1, 1.0}).valid);
    EXPECT_FALSE(validate_domain(HestonParams{{1.0, 2.0, 1.0}, 0.1, -1.5}).valid);
    EXPECT_THROW(require_valid(HestonParams{{1.0, 0.4, 1.0}, 0.0, 0.0}), DomainError);
}

TEST(RequireValid, CanonicalBoundsAreHardErrors) {
    EXPECT_NO_THROW(require_valid(CanonicalParams{0.936, 3.5}));
    EXPECT_THROW(require_valid(CanonicalParams{0.936, 0.5}), DomainError);
    EXPECT_THROW(require_valid(CanonicalParams{0.0, 3.5}), DomainError);
    EXPECT_THROW(require_valid(CanonicalParams{1.0, 3.5}), DomainError);
}

TEST(RequireValid, Grid) {
    EXPECT_NO_THROW(require_valid(SamplingGrid{0.1, 2}));
    EXPECT_THROW(require_valid(SamplingGrid{0.0, 10}), DomainError);
    EXPECT_THROW(require_valid(SamplingGrid{0.1, 1}), DomainError);
    EXPECT_DOUBLE_EQ((SamplingGrid{0.5, 10}.horizon()), 5.0);
}

TEST(ToCanonical, DailyIndexFit) {
    const auto c = to_canonical(VolParams{16.6, 0.017, 0.0784}, SamplingGrid{1.0 / 252.0, 252});
    EXPECT_NEAR(c.params.omega, 0.936, 5e-4);
    EXPECT_NEAR(c.params.zeta, 3.599, 5e-4);
    EXPECT_DOUBLE_EQ(c.Tbar, 16.6 / 252.0);
}

TEST(ToCanonical, IntradayFit) {
    const auto c = to_canonical(VolParams{0.48, 3.15, 0.64}, 1.0);
    EXPECT_NEAR(c.params.omega, 0.619, 5e-4);
    EXPECT_NEAR(c.params.zeta, 2.362, 5e-4);
}

TEST(ToCanonical, CanonicalSdeIsItsOwnForm) {
    for (double z : {0.6, 1.0, 3.5, 10.0}) {
        const auto c = to_canonical(canonical_vol_params(z), 0.25);
        EXPECT_DOUBLE_EQ(c.params.zeta, z);
        EXPECT_DOUBLE_EQ(c.params.omega, std::exp(-0.25));
        EXPECT_DOUBLE_EQ(c.Tbar, 0.25);
    }
}

TEST(ToCanonical, RejectsInvalid) {
    EXPECT_THROW(to_canonical(VolParams{1.0, 0.4, 1.0}, 1.0), DomainError);
    EXPECT_THROW(to_canonical(VolParams{1.0, 2.0, 1.0}, 0.0), DomainError);
}

TEST(RescaleSpace, Examples) {
    EXPECT_EQ(rescale_space(VolParams{1, 2, 1}, 1.0), (VolParams{1, 2, 1}));
    EXPECT_EQ(rescale_space(VolParams{1, 2, 1}, 365.0), (VolParams{1, 730, 365}));
    const VolParams p{16.6, 0.017, 0.0784};
    const auto q = rescale_space(p, 525600.0);
    EXPECT_NEAR(to_canonical(q, 1.0).params.zeta, to_canonical(p, 1.0).params.zeta, 1e-14 * 3.6);
    EXPECT_THROW(rescale_space(p, 0.0), DomainError);
    EXPECT_THROW(rescale_space(p, -2.0), DomainError);
}

TEST(RescaleTime, Examples) {
    EXPECT_EQ(rescale_time(VolParams{1, 2, 1}, 1.0), (ConeParams{2, 1, 0.5}));
    EXPECT_EQ(rescale_time(VolParams{2, 1, 1}, 0.5), (ConeParams{1, 1, 0.25}));
    const auto bad = rescale_time(VolParams{1, 0.4, 1}, 1.0);
    EXPECT_DOUBLE_EQ(bad.u, 0.4);
    EXPECT_DOUBLE_EQ(bad.v, 1.0);
    EXPECT_DOUBLE_EQ(bad.w, 0.5);
    EXPECT_FALSE(in_cone(bad));
    EXPECT_THROW(rescale_time(VolParams{1, 2, 1}, 0.0), DomainError);
}

TEST(ConeToParams, InverseAndErrors) {
    EXPECT_EQ(cone_to_params(ConeParams{1, 1, 0.25}, 0.5), (VolParams{2, 1, 1}));
    EXPECT_THROW(cone_to_params(ConeParams{0.4, 1, 0.5}, 1.0), DomainError);
    EXPECT_THROW(cone_to_params(ConeParams{2, 1, 0.5}, -1.0), DomainError);
}

TEST(InCone, Boundaries) {
    EXPECT_TRUE(in_cone({2, 1, 0.5}));
    EXPECT_FALSE(in_cone({0.5, 1, 0.5}));
    EXPECT_FALSE(in_cone({2, 0, 0.5}));
    EXPECT_FALSE(in_cone({2, 1, 0}));
}

TEST(MakeSeries, Validation) {
    EXPECT_NO_THROW(make_vol_series(1.0, {1, 2, 3}));
    EXPECT_THROW(make_vol_series(1.0, {1, 2}), DomainError);
    EXPECT_THROW(make_vol_series(0.0, {1, 2, 3}), DomainError);
    try {
        make_vol_series(1.0, {1, 2, 0, 4});
        FAIL();
    } catch (const NonPositiveValue& e) {
        EXPECT_EQ(e.index(), 2u);
    }
    EXPECT_THROW(make_joint_series(1.0, {1, 2, 3}, {1, 2}), DomainError);
    EXPECT_THROW(make_joint_series(1.0, {1, 2, 3}, {1, -2, 1}), NonPositiveValue);
    const auto js = make_joint_series(0.5, {1, 2, 3}, {10, 11, 12});
    EXPECT_EQ(js.vol.grid.N, 2u);
    EXPECT_DOUBLE_EQ(js.vol.grid.T, 0.5);
}

// ---- properties ---------------------------------------------------------

TEST(ParamsProperty, CanonicalInvariantUnderRescaling) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> logA(-5.0, 6.0), logs(-3.0, 3.0);
    for (int i = 0; i < 2000; ++i) {
        const auto p = oracle::random_vol_params(rng);
        const double T = std::exp(logs(rng)) * 0.1;
        const double A = std::pow(10.0, logA(rng));
        const double sigma = std::exp(logs(rng));
        const auto base = to_canonical(p, T);
        const auto spaced = to_canonical(rescale_space(p, A), T);
        EXPECT_NEAR(spaced.params.omega, base.params.omega, 1e-15);
        EXPECT_NEAR(spaced.params.zeta, base.params.zeta, 1e-14 * base.params.zeta);

        const auto timed = to_canonical(rescale(p, 1.0, sigma), T / sigma);
        EXPECT_NEAR(timed.params.omega, base.params.omega, 1e-14);
        EXPECT_NEAR(timed.params.zeta, base.params.zeta, 1e-14 * base.params.zeta);
        EXPECT_NEAR(timed.Tbar, base.Tbar, 1e-14 * base.Tbar);
    }
}

TEST(ParamsProperty, ConeMembershipIffFeller) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> lg(-4.0, 4.0);
    int violating = 0;
    for (int i = 0; i < 5000; ++i) {
        const VolParams p{std::exp(lg(rng)), std::exp(lg(rng)), std::exp(lg(rng))};
        const double sigma = std::exp(lg(rng));
        const bool feller = validate_domain(p).valid;
        violating += !feller;
        EXPECT_EQ(in_cone(rescale_time(p, sigma)), feller) << p.kappa << ' ' << p.theta << ' ' << p.gamma2;
    }
    EXPECT_GT(violating, 500);
}

TEST(ParamsProperty, TimeRescaleRoundTrip) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> lg(-3.0, 3.0);
    for (int i = 0; i < 2000; ++i) {
        const auto p = oracle::random_vol_params(rng);
        const double sigma = std::exp(lg(rng));
        const auto q = cone_to_params(rescale_time(p, sigma), sigma);
        EXPECT_NEAR(q.kappa, p.kappa, 1e-14 * p.kappa);
        EXPECT_NEAR(q.theta, p.theta, 1e-14 * p.theta);
        EXPECT_NEAR(q.gamma2, p.gamma2, 1e-14 * p.gamma2);
    }
}
