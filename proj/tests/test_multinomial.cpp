#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "rdbound/family_multinomial.hpp"
#include "rdbound/knn_entropy.hpp"

namespace {

using namespace rdbound;
using namespace rdbound::multinomial;

const LossOrder l1{1.0};

MultinomialFamily family(int d, int k, std::vector<double> gamma) { return {d, k, DirichletPrior(std::move(gamma))}; }

// Samples of (W(k e_1), ..., W(k e_{d-1})) with W = 1 / (1 + R^k).
SampleMatrix interpolation_samples(const MultinomialFamily& fam, std::size_t draws, std::uint64_t seed) {
    Rng rng = rng_stream(seed, 0);
    SampleMatrix out(draws, static_cast<std::size_t>(fam.d - 1));
    std::vector<std::int64_t> x(static_cast<std::size_t>(fam.d), 0);
    for (std::size_t r = 0; r < draws; ++r) {
        const auto theta = sample_dirichlet(fam.prior.gamma(), rng);
        for (std::size_t i = 0; i + 1 < theta.size(); ++i) {
            std::fill(x.begin(), x.end(), 0);
            x[i] = fam.k;
            out(r, i) = posterior(x, theta, fam.k);
        }
    }
    return out;
}

TEST(Family, Validates) {
    EXPECT_THROW(family(1, 1, {1.0, 1.0}), std::domain_error);
    EXPECT_THROW(family(2, 0, {1.0, 1.0}), std::domain_error);
    EXPECT_THROW(family(3, 1, {1.0, 1.0}), std::domain_error);
    const auto fam = family(4, 2, {1.0, 1.0, 1.0, 1.0});
    EXPECT_EQ(fam.spec().d_star, 3);
    EXPECT_EQ(fam.spec().d_interp, 3);
    EXPECT_EQ(fam.spec().classes, 2);
}

TEST(Posterior, Examples) {
    const std::vector<double> half{0.5, 0.5, 0.5};
    for (const auto& x : std::vector<std::vector<std::int64_t>>{{3, 0, 0}, {1, 1, 1}, {0, 2, 1}}) {
        EXPECT_NEAR(posterior(x, half, 3), 0.5, 1e-15);
    }
    const std::vector<std::int64_t> x20{2, 0};
    const std::vector<double> theta{0.8, 0.3};
    EXPECT_NEAR(posterior(x20, theta, 2), 1.0 / 17.0, 1e-15);
    const std::vector<double> tiny{1e-300, 0.5};
    EXPECT_NEAR(posterior(x20, tiny, 2), 1.0, 1e-15);
}

TEST(Posterior, LargeCountsStayFinite) {
    const std::vector<std::int64_t> x{100000, 0};
    const std::vector<double> theta{0.9, 0.2};
    const double w = posterior(x, theta, 100000);
    EXPECT_GE(w, 0.0);
    EXPECT_LT(w, 1e-300);
}

TEST(Posterior, RejectsBadInput) {
    const std::vector<std::int64_t> x{1, 1};
    const std::vector<double> edge{0.0, 0.5};
    const std::vector<double> ok{0.3, 0.5};
    EXPECT_THROW(posterior(x, edge, 2), std::domain_error);
    EXPECT_THROW(posterior(x, ok, 3), std::domain_error);
    const std::vector<std::int64_t> negative{-1, 3};
    EXPECT_THROW(posterior(negative, ok, 2), std::domain_error);
}

TEST(Posterior, InvariantUnderRelabeling) {
    Rng rng = rng_stream(41, 0);
    const std::vector<double> gamma{1.0, 2.0, 0.5, 3.0};
    for (int trial = 0; trial < 100; ++trial) {
        const auto theta = sample_dirichlet(gamma, rng);
        const auto x = sample_multinomial(6, theta, rng);
        std::vector<std::size_t> perm{2, 0, 3, 1};
        std::vector<double> theta_p(4);
        std::vector<std::int64_t> x_p(4);
        for (std::size_t i = 0; i < 4; ++i) {
            theta_p[i] = theta[perm[i]];
            x_p[i] = x[perm[i]];
        }
        EXPECT_NEAR(posterior(x, theta, 6), posterior(x_p, theta_p, 6), 1e-14);
    }
}

TEST(EntropyLower, Fixtures) {
    EXPECT_NEAR(entropy_lower(family(2, 1, {1.0, 1.0})), -1.3862943611198906188, 1e-13);
    EXPECT_NEAR(entropy_lower(family(2, 4, {2.0, 2.0})), -5.1250928025613883341, 1e-13);
    EXPECT_NEAR(entropy_lower(family(3, 2, {1.0, 1.0, 1.0})), -5.7725887222397812377, 1e-13);
}

TEST(EntropyLower, PrintedFormExample) {
    EXPECT_NEAR(entropy_lower_printed(family(2, 1, {1.0, 1.0})), -3.6951570207260220613, 1e-13);
}

TEST(EntropyLower, SymmetricPriorGivesEqualSummands) {
    for (int d : {2, 3, 5}) {
        const double one = entropy_lower(family(2, 3, {1.7, 1.7 * (d - 1)}));
        EXPECT_NEAR(entropy_lower(family(d, 3, std::vector<double>(static_cast<std::size_t>(d), 1.7))), (d - 1) * one,
                    1e-12);
    }
}

TEST(EntropyLower, StepInK) {
    const std::vector<double> gamma{0.8, 2.5, 1.2};
    const double g0 = 4.5;
    for (int k : {1, 2, 7}) {
        double expected = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double a = gamma[static_cast<std::size_t>(i)];
            expected += digamma(a) + digamma(g0 - a) - 2.0 * digamma(g0) + std::log((k + 1.0) / k);
        }
        EXPECT_NEAR(entropy_lower(family(3, k + 1, gamma)) - entropy_lower(family(3, k, gamma)), expected, 1e-12);
    }
}

TEST(EntropyLower, BelowKnnEstimate) {
    for (const auto& fam : {family(2, 1, {1.0, 1.0}), family(2, 4, {2.0, 2.0}), family(3, 2, {1.0, 1.0, 1.0})}) {
        const auto est = knn_entropy(interpolation_samples(fam, 100000, 42));
        EXPECT_LE(entropy_lower(fam), est.value + 3.0 * est.std_error) << fam.d << " " << fam.k;
    }
}

// Scalar step: V = 1 / (1 + R^k) with R beta-prime. The right side is
// assembled from closed-form h(R) plus Monte-Carlo moments of ln R.
double scalar_lemma_rhs(double a, double b, int k, bool printed, std::uint64_t seed, double& knn_value,
                        double& knn_se) {
    Rng rng = rng_stream(seed, 0);
    const std::vector<double> g{a, b};
    const std::size_t draws = 100000;
    std::vector<double> v(draws);
    double sum_log = 0.0, sum_pos = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        const double theta = sample_dirichlet(g, rng)[0];
        const double log_r = std::log(theta) - std::log1p(-theta);
        v[i] = 1.0 / (1.0 + std::exp(k * log_r));
        sum_log += log_r;
        sum_pos += std::max(log_r, 0.0);
    }
    const auto est = knn_entropy(SampleMatrix::column(v));
    knn_value = est.value;
    knn_se = est.std_error;
    const double h_theta = dirichlet_entropy(DirichletPrior(g));
    const double h_r = h_theta - 2.0 * (digamma(b) - digamma(a + b));
    const double e_log = sum_log / draws, e_pos = sum_pos / draws;
    const double log2_term = printed ? (2.0 / k) * std::numbers::ln2 : 2.0 * std::numbers::ln2;
    const double pos_weight = printed ? 2.0 : 2.0 * k;
    return h_r + std::log(static_cast<double>(k)) - log2_term - pos_weight * e_pos + (k - 1.0) * e_log;
}

TEST(ScalarEntropyStep, PrintedFormAtUnitK) {
    for (const auto& ab : std::vector<std::pair<double, double>>{{1.0, 1.0}, {2.0, 2.0}, {0.7, 3.0}}) {
        double h = 0.0, se = 0.0;
        const double rhs = scalar_lemma_rhs(ab.first, ab.second, 1, true, 43, h, se);
        EXPECT_GE(h, rhs - 3.0 * se) << ab.first << "," << ab.second;
    }
}

TEST(ScalarEntropyStep, CorrectedFormAtLargerK) {
    for (int k : {2, 4}) {
        for (const auto& ab : std::vector<std::pair<double, double>>{{1.0, 1.0}, {2.0, 2.0}}) {
            double h = 0.0, se = 0.0;
            const double rhs = scalar_lemma_rhs(ab.first, ab.second, k, false, 44, h, se);
            EXPECT_GE(h, rhs - 3.0 * se) << k;
        }
    }
}

TEST(MutualInformation, Examples) {
    const auto fam = family(2, 1, {1.0, 1.0});
    EXPECT_NEAR(mutual_information(100, fam), 1.5370729695094002875, 1e-13);
    const auto wide = family(4, 3, {0.5, 1.0, 2.0, 4.0});
    EXPECT_NEAR(mutual_information(2000, wide) - mutual_information(1000, wide), 1.5 * std::numbers::ln2, 1e-12);
    EXPECT_NEAR(mutual_information(100, family(4, 6, {0.5, 1.0, 2.0, 4.0})) - mutual_information(100, wide),
                1.5 * std::numbers::ln2, 1e-12);
    EXPECT_THROW(mutual_information(0, fam), std::domain_error);
}

TEST(MutualInformation, EqualsClarkeBarronComposition) {
    for (const auto& fam : {family(2, 1, {1.0, 1.0}), family(3, 5, {0.4, 2.0, 1.1}), family(5, 2, {1, 2, 3, 4, 5})}) {
        for (std::uint64_t n : {1u, 100u, 1000000u}) {
            EXPECT_NEAR(mutual_information(n, fam), mi_clarke_barron(n, fisher_summary(fam)), 1e-12);
        }
    }
}

TEST(RdBoundsCheck, Identities) {
    const auto fam = family(3, 2, {1.0, 2.0, 1.0});
    const double h = entropy_lower(fam);
    for (double dist : {1e-5, 1e-4, 1e-3}) {
        const auto b = rd_bounds(dist, l1, fam);
        EXPECT_NEAR(b.lower, std::max(0.0, h - 2.0 * std::log(2.0 * std::numbers::e * dist)), 1e-12);
        EXPECT_NEAR(b.lower - rd_bounds(2.0 * dist, l1, fam).lower, 2.0 * std::numbers::ln2, 1e-12);
    }
    EXPECT_EQ(rd_bounds(1.0, l1, fam).upper, 0.0);
    EXPECT_NEAR(rd_bounds(0.1, l1, fam).upper, -2.0 * std::log(0.1), 1e-14);
    EXPECT_THROW(rd_bounds(0.0, l1, fam), std::domain_error);
}

TEST(XBayesRiskLower, RootNScaling) {
    for (const auto& fam : {family(2, 1, {1.0, 1.0}), family(4, 3, {1.0, 2.0, 1.5, 0.5})}) {
        for (const auto& p : {l1, LossOrder(2.0), LossOrder::infinity()}) {
            EXPECT_NEAR(xbayes_risk_lower(200, fam, p) / xbayes_risk_lower(100, fam, p), 1.0 / std::sqrt(2.0), 1e-12);
        }
    }
    const double value = xbayes_risk_lower(100, family(2, 1, {1.0, 1.0}), l1);
    EXPECT_TRUE(std::isfinite(value));
    EXPECT_GT(value, 0.0);
    const double printed = xbayes_risk_lower_printed_l1(100, family(2, 1, {1.0, 1.0}));
    EXPECT_TRUE(std::isfinite(printed));
    EXPECT_GT(printed, 0.0);
}

TEST(XBayesRiskLower, InversionReproducesMutualInformation) {
    const auto fam = family(3, 2, {1.0, 1.0, 1.0});
    const double risk = xbayes_risk_lower(500, fam, l1);
    EXPECT_NEAR(rd_lower_pointwise(entropy_lower(fam), fam.spec(), l1, risk), mutual_information(500, fam), 1e-10);
}

TEST(Interpolation, ClassOneParameterAndValues) {
    const std::vector<double> theta{0.2, 0.3, 0.5};
    const auto t1 = class1_parameter(theta);
    EXPECT_NEAR(t1[0] + t1[1] + t1[2], 1.0, 1e-15);
    EXPECT_NEAR(t1[0], 0.4, 1e-15);
    const auto w = interpolation_values(t1, theta, 2);
    ASSERT_EQ(w.size(), 2u);
    EXPECT_NEAR(w[0], 1.0 / (1.0 + std::pow(0.2 / 0.4, 2)), 1e-15);
    const std::vector<double> x{2.0, 0.0, 0.0};
    EXPECT_NEAR(posterior_two_class(x, t1, theta), w[0], 1e-15);
}

TEST(SimulateInterpolationRisk, AboveBoundAndDecreasing) {
    const auto fam = family(2, 1, {1.0, 1.0});
    const auto prior_only = simulate_interpolation_risk(0, fam, {.trials = 10000, .seed = 45});
    EXPECT_GT(prior_only.mean, 0.0);
    double prev_mean = prior_only.mean, prev_se = prior_only.std_error;
    for (std::uint64_t n : {50u, 200u, 1000u}) {
        const auto est = simulate_interpolation_risk(n, fam, {.trials = 10000, .seed = 45});
        EXPECT_GE(est.mean, xbayes_risk_lower(n, fam, l1) - 3.0 * est.std_error) << n;
        EXPECT_LT(est.mean, prev_mean + 3.0 * std::hypot(est.std_error, prev_se)) << n;
        prev_mean = est.mean;
        prev_se = est.std_error;
    }
    EXPECT_THROW(simulate_interpolation_risk(10, fam, {.trials = 50}), std::domain_error);
}

TEST(SimulateInterpolationRisk, HigherDimensionAboveBound) {
    const auto fam = family(3, 2, {1.0, 1.0, 1.0});
    for (std::uint64_t n : {50u, 1000u}) {
        const auto est = simulate_interpolation_risk(n, fam, {.trials = 5000, .seed = 46});
        EXPECT_GE(est.mean, xbayes_risk_lower(n, fam, l1) - 3.0 * est.std_error) << n;
    }
}

}  // namespace
