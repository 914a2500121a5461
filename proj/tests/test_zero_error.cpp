#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "rdbound/family_zero_error.hpp"
#include "rdbound/rd_core.hpp"

namespace {

using namespace rdbound;
using namespace rdbound::zero_error;

const LossOrder l1{1.0};

TEST(Label, Examples) {
    EXPECT_EQ(label(0.7, 0.3), 1);
    EXPECT_EQ(label(0.1, 0.3), -1);
    EXPECT_EQ(label(0.3, 0.3), 1);
}

TEST(Interval, Examples) {
    const std::vector<Sample> none;
    const auto empty = interval(none);
    EXPECT_EQ(empty.theta_l, 0.0);
    EXPECT_EQ(empty.theta_r, 1.0);
    const std::vector<Sample> three{{0.2, -1}, {0.9, 1}, {0.6, 1}};
    const auto iv = interval(three);
    EXPECT_EQ(iv.theta_l, 0.2);
    EXPECT_EQ(iv.theta_r, 0.6);
    const std::vector<Sample> bad{{0.5, 1}, {0.7, -1}};
    EXPECT_THROW(interval(bad), ContradictionError);
    const std::vector<Sample> zero_label{{0.5, 0}};
    EXPECT_THROW(interval(zero_label), std::domain_error);
}

TEST(Midpoint, Examples) {
    const std::vector<Sample> none;
    EXPECT_EQ(midpoint_estimator(none), 0.5);
    const std::vector<Sample> three{{0.2, -1}, {0.9, 1}, {0.6, 1}};
    EXPECT_NEAR(midpoint_estimator(three), 0.4, 1e-15);
}

TEST(Midpoint, InsideVersionSpace) {
    Rng rng = rng_stream(61, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        const double theta = uniform01(rng);
        std::vector<Sample> s(1 + trial % 20);
        for (auto& z : s) {
            z.x = uniform01(rng);
            z.y = label(z.x, theta);
        }
        const auto iv = interval(s);
        const double mid = midpoint_estimator(s);
        EXPECT_GE(mid, iv.theta_l);
        EXPECT_LE(mid, iv.theta_r);
        EXPECT_GT(theta, iv.theta_l);
        EXPECT_LE(theta, iv.theta_r);
    }
}

TEST(MutualInformationExact, Examples) {
    EXPECT_EQ(mutual_information_exact(0), 0.0);
    EXPECT_EQ(mutual_information_exact(1), 0.5);
    EXPECT_NEAR(mutual_information_exact(10), 2.0198773448773448773, 1e-14);
}

TEST(MutualInformationExact, GrowsLikeLogN) {
    const double n = 1e6;
    EXPECT_LT(std::abs(mutual_information_exact(1000000) - std::log(n) - (euler_gamma - 1.0)), 1e-5);
}

TEST(MiMonteCarlo, MatchesHarmonicForm) {
    for (std::uint64_t n : {1u, 3u, 10u, 30u}) {
        const auto mc = mi_monte_carlo(n, {.trials = 1000000, .seed = 62});
        EXPECT_LT(std::abs(mc.estimate.mean - mutual_information_exact(n)), 3.0 * mc.estimate.std_error) << n;
        EXPECT_LT(mc.estimate.std_error, 0.002);
    }
    EXPECT_THROW(mi_monte_carlo(1, {.trials = 999}), std::domain_error);
}

TEST(MiMonteCarlo, StandardErrorScalesAsInverseRoot) {
    const auto small = mi_monte_carlo(5, {.trials = 10000, .seed = 63});
    const auto large = mi_monte_carlo(5, {.trials = 1000000, .seed = 63});
    EXPECT_NEAR(small.estimate.std_error / large.estimate.std_error, 10.0, 0.5);
}

TEST(RdLower, Examples) {
    EXPECT_NEAR(rd_lower(1.0 / (2.0 * std::numbers::e), l1).printed, 0.0, 1e-15);
    EXPECT_NEAR(rd_lower(0.01, l1).printed, 2.9120230054281460586, 1e-13);
    EXPECT_EQ(rd_lower(1.0, l1).printed, 0.0);
    EXPECT_EQ(rd_lower(3.0, l1).printed, 0.0);
    EXPECT_THROW(rd_lower(0.0, l1), std::domain_error);
}

TEST(RdLower, RederivedAddsLogTwoOverP) {
    for (double p : {1.0, 2.0, 5.0}) {
        const auto r = rd_lower(1e-3, LossOrder(p));
        EXPECT_NEAR(r.rederived - r.printed, std::numbers::ln2 / p, 1e-13);
        EXPECT_NEAR(r.rederived, -generalized_gaussian_entropy(LossOrder(p), std::pow(1e-3, p) / 2.0), 1e-12);
    }
    const auto inf = rd_lower(1e-3, LossOrder::infinity());
    EXPECT_NEAR(inf.printed, -std::log(2e-3), 1e-13);
    EXPECT_EQ(inf.printed, inf.rederived);
}

// Displayed chain: H_{n+1} - 1 >= -ln(2 e L1); the inline chain drops ln 2.
TEST(RiskLower, DisplayedAndInlineChains) {
    for (std::uint64_t n : {0u, 1u, 10u, 1000u}) {
        const double displayed = risk_lower(n, l1);
        EXPECT_NEAR(rd_lower(displayed, l1).printed, mutual_information_exact(n), 1e-12);
        const double inline_chain = std::exp(-mutual_information_exact(n) - 1.0);
        EXPECT_NEAR(inline_chain / displayed, 2.0, 1e-12);
    }
    const double n = 1e6;
    EXPECT_NEAR(risk_lower(1000000, l1) * 2.0 * (n + 1.0), std::exp(-euler_gamma), 1e-6);
}

TEST(EstimatorRiskExact, StatedForm) {
    EXPECT_EQ(estimator_risk_exact(0).e_abs, 0.25);
    EXPECT_EQ(estimator_risk_exact(1).e_abs, 0.125);
    EXPECT_EQ(estimator_risk_exact(1).l1, 0.25);
    EXPECT_NEAR(estimator_risk_exact(99).l1, 1.0 / 200.0, 1e-18);
}

// Least-squares slope of ln risk on ln n over every integer 10..10^4.
TEST(EstimatorRiskExact, InverseNScaling) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double count = 0;
    for (std::uint64_t n = 10; n <= 10000; ++n) {
        const double x = std::log(static_cast<double>(n));
        const double y = std::log(estimator_risk_exact(n).l1);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        count += 1;
    }
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    EXPECT_NEAR(slope, -1.0, 0.01);
}

TEST(SampleComplexityCheck, Examples) {
    const auto sc = sample_complexity(0.01);
    EXPECT_NEAR(sc.n_sufficient, 49.0, 1e-12);
    EXPECT_NEAR(sc.n_necessary, 27.072974178344258491, 1e-12);
    for (double target : {0.001, 0.01, 0.2, 0.499}) {
        const auto s = sample_complexity(target);
        EXPECT_NEAR((s.n_sufficient + 1.0) / (s.n_necessary + 1.0), std::exp(euler_gamma), 1e-12);
        EXPECT_LE(s.n_necessary, s.n_sufficient);
    }
    EXPECT_LT(sample_complexity(0.4999999).n_sufficient, 1e-6);
    EXPECT_THROW(sample_complexity(0.5), std::domain_error);
    EXPECT_THROW(sample_complexity(0.0), std::domain_error);
}

TEST(SimulateEstimatorRisk, DecreasingInN) {
    double prev = INFINITY;
    for (std::uint64_t n : {0u, 1u, 3u, 10u, 30u, 100u}) {
        const auto est = simulate_estimator_risk(n, {.trials = 100000, .seed = 64});
        EXPECT_LT(est.mean, prev) << n;
        prev = est.mean;
    }
    EXPECT_THROW(simulate_estimator_risk(1, {.trials = 999}), std::domain_error);
}

TEST(SimulateEstimatorRisk, NoDataIsQuarter) {
    const auto est = simulate_estimator_risk(0, {.trials = 1000000, .seed = 65});
    EXPECT_LT(std::abs(est.mean - 0.25), 3.0 * est.std_error);
}

// The interval containing theta is size-biased: E[theta_r - theta_l] = 2/(n+2)
// and E|theta - midpoint| = 1/(2(n+2)).
TEST(SimulateEstimatorRisk, SizeBiasedInterval) {
    for (std::uint64_t n : {1u, 9u, 99u}) {
        const auto width = mc_mean([&](Rng& r) { return zero_error::detail::draw_problem(n, r).iv.width(); },
                                   {.trials = 1000000, .seed = 66});
        EXPECT_LT(std::abs(width.mean - 2.0 / (n + 2.0)), 3.0 * width.std_error) << n;
        const auto risk = simulate_estimator_risk(n, {.trials = 1000000, .seed = 67});
        EXPECT_LT(std::abs(risk.mean - 1.0 / (2.0 * (n + 2.0))), 3.0 * risk.std_error) << n;
    }
}

}  // namespace
