#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/random/binomial_distribution.hpp>

#include "rdbound/family_categorical.hpp"
#include "rdbound/loss_order.hpp"
#include "rdbound/monte_carlo.hpp"
#include "rdbound/rd_core.hpp"
#include "rdbound/sim_common.hpp"
#include "rdbound/specfun.hpp"

namespace rdbound::multinomial {

/// Binary classifier whose class-conditional laws are multinomials over d
/// categories with k trials; theta ~ Dir(gamma) parameterises class 2.
struct MultinomialFamily {
    int d;
    int k;
    DirichletPrior prior;

    MultinomialFamily(int categories, int trials, DirichletPrior gamma)
        : d(categories), k(trials), prior(std::move(gamma)) {
        if (d < 2) throw std::domain_error("multinomial family needs d >= 2");
        if (k < 1) throw std::domain_error("multinomial family needs k >= 1");
        if (prior.size() != d) throw std::domain_error("prior length must equal d");
    }

    /// {k e_1, ..., k e_{d-1}} is a sufficient interpolation set.
    InterpolationSpec spec() const { return {d - 1, d - 1, 2, 1.0}; }
};

namespace detail {

inline double logistic_of_neg(double z) {
    // 1 / (1 + e^z) without overflow.
    if (z > 0.0) {
        const double e = std::exp(-z);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(z));
}

}  // namespace detail

/// p(y=1 | x, theta) = 1 / (1 + prod_i R_i^{x_i}), R_i = theta_i / (1 - theta_i),
/// evaluated in log space.
inline double posterior(std::span<const std::int64_t> x, std::span<const double> theta, int k) {
    if (x.size() != theta.size()) throw std::domain_error("x and theta differ in length");
    std::int64_t total = 0;
    double z = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(theta[i] > 0.0 && theta[i] < 1.0)) throw std::domain_error("theta entries must lie in (0, 1)");
        if (x[i] < 0) throw std::domain_error("counts must be nonnegative");
        total += x[i];
        z += static_cast<double>(x[i]) * (std::log(theta[i]) - std::log1p(-theta[i]));
    }
    if (total != k) throw std::domain_error("counts must sum to k");
    return detail::logistic_of_neg(z);
}

/// Two-class posterior with explicit per-class multinomial parameters and
/// equal class priors: 1 / (1 + prod_i (theta2_i / theta1_i)^{x_i}).
inline double posterior_two_class(std::span<const double> x, std::span<const double> theta_class1,
                                  std::span<const double> theta_class2) {
    double z = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] != 0.0) z += x[i] * (std::log(theta_class2[i]) - std::log(theta_class1[i]));
    }
    return detail::logistic_of_neg(z);
}

/// Lower bound on h(W(S)) over the interpolation set, per free coordinate
/// i < d with a = gamma_i, b = gamma0 - gamma_i:
/// ln B(a,b) + (k-a) psi(a) + (k-b) psi(b) + (gamma0 - 2k) psi(gamma0) + ln k - 2 ln 2.
///
/// Follows from W = 1/(1+R^k) with R = theta_i/(1-theta_i) beta-prime,
/// h(W) = h(R) + ln k + (k-1) E ln R - 2 E ln(1+R^k), and
/// ln(1+R^k) <= ln 2 + k (ln R)^+.
inline Nats entropy_lower(const MultinomialFamily& fam) {
    const double g0 = fam.prior.gamma0();
    const double k = fam.k;
    double total = 0.0;
    for (int i = 0; i + 1 < fam.d; ++i) {
        const double a = fam.prior[static_cast<std::size_t>(i)];
        const double b = g0 - a;
        total += log_beta(a, b) + (k - a) * digamma(a) + (k - b) * digamma(b) + (g0 - 2.0 * k) * digamma(g0) +
                 std::log(k) - 2.0 * std::numbers::ln2;
    }
    return total;
}

/// The closed form exactly as typeset; it exceeds the true entropy for some
/// (d, k, gamma) and is kept for reporting only.
inline Nats entropy_lower_printed(const MultinomialFamily& fam) {
    const double g0 = fam.prior.gamma0();
    const double k = fam.k;
    double total = (fam.d - 1) * (std::log(k) - (2.0 / k) * std::numbers::ln2);
    for (int i = 0; i + 1 < fam.d; ++i) {
        const double a = fam.prior[static_cast<std::size_t>(i)];
        total += log_beta(a, g0 - a) + (g0 + a + 2.0 - k) * digamma(g0 - a) - (g0 - 2.0) * digamma(g0) +
                 (k - a) * digamma(a);
    }
    return total;
}

/// Statistic alpha = theta in d-1 free coordinates; Fisher matrix
/// diag(k / (2 theta_i (1 - theta_i))).
inline FisherSummary fisher_summary(const MultinomialFamily& fam) {
    const double g0 = fam.prior.gamma0();
    const int free = fam.d - 1;
    double e_log = 0.5 * free * std::log(fam.k / 2.0);
    for (int i = 0; i < free; ++i) {
        const double a = fam.prior[static_cast<std::size_t>(i)];
        e_log -= 0.5 * (digamma(a) + digamma(g0 - a) - 2.0 * digamma(g0));
    }
    return {free, e_log, dirichlet_entropy(fam.prior)};
}

/// Asymptotic mutual information I(Z^n; theta).
inline Nats mutual_information(std::uint64_t n, const MultinomialFamily& fam) {
    if (n == 0) throw std::domain_error("mutual information expansion needs n >= 1");
    const double g0 = fam.prior.gamma0();
    const int free = fam.d - 1;
    double mi = 0.5 * free * std::log(static_cast<double>(n) / (2.0 * std::numbers::pi * std::numbers::e)) +
                log_beta_multivariate(fam.prior.gamma()) - (fam.d - g0) * digamma(g0);
    for (double g : fam.prior.gamma()) mi -= (g - 1.0) * digamma(g);
    mi += 0.5 * free * std::log(fam.k / 2.0);
    for (int i = 0; i < free; ++i) {
        const double a = fam.prior[static_cast<std::size_t>(i)];
        mi -= 0.5 * (digamma(a) + digamma(g0 - a) - 2.0 * digamma(g0));
    }
    return mi;
}

struct RdBounds {
    Nats lower = 0.0;
    Nats upper = 0.0;
};

inline RdBounds rd_bounds(double distortion, LossOrder p, const MultinomialFamily& fam) {
    const InterpolationSpec spec = fam.spec();
    return {rd_lower_pointwise(entropy_lower(fam), spec, p, distortion), rd_upper(spec, distortion)};
}

/// Worst-case-over-inputs Bayes-risk lower bound through the generic inversion.
inline double xbayes_risk_lower(std::uint64_t n, const MultinomialFamily& fam, LossOrder p) {
    return risk_lower_from_mi(mutual_information(n, fam), entropy_lower(fam), fam.spec(), p);
}

/// The typeset L1 closed form, read with ln B(gamma) where the bracket shows
/// B(gamma). Its bracket is unbalanced as printed, so treat it as indicative.
inline double xbayes_risk_lower_printed_l1(std::uint64_t n, const MultinomialFamily& fam) {
    if (n == 0) throw std::domain_error("printed bound needs n >= 1");
    const double g0 = fam.prior.gamma0();
    const double k = fam.k;
    const double free = fam.d - 1;
    const double gd = fam.prior[static_cast<std::size_t>(fam.d - 1)];
    double expo = -log_beta_multivariate(fam.prior.gamma()) / free +
                  (1.0 - g0 + (fam.d - g0) / free) * digamma(g0) + (gd - 1.0) / free * digamma(gd);
    for (int i = 0; i + 1 < fam.d; ++i) {
        const double a = fam.prior[static_cast<std::size_t>(i)];
        expo += ((k - 0.5) * digamma(a) + (g0 + a + 2.0 - k) * digamma(g0 - a)) / free;
    }
    return k * std::pow(2.0, -(2.0 + k) / k) *
           std::sqrt(2.0 * std::numbers::pi * std::numbers::e / static_cast<double>(n)) * std::exp(expo);
}

/// Class-1 parameter paired with a class-2 draw theta: (1 - theta) / (d - 1).
inline std::vector<double> class1_parameter(std::span<const double> theta) {
    std::vector<double> out(theta.size());
    const double norm = static_cast<double>(theta.size()) - 1.0;
    for (std::size_t i = 0; i < theta.size(); ++i) out[i] = (1.0 - theta[i]) / norm;
    return out;
}

/// Regression values W(k e_i) at the interpolation points i < d.
inline std::vector<double> interpolation_values(std::span<const double> theta_class1,
                                                std::span<const double> theta_class2, int k) {
    std::vector<double> out(theta_class1.size() - 1);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double z = k * (std::log(theta_class2[i]) - std::log(theta_class1[i]));
        out[i] = detail::logistic_of_neg(z);
    }
    return out;
}

inline constexpr std::uint64_t min_simulation_trials = 100;

/// Plug-in L_p risk, worst case over the interpolation set. Labels are
/// uniform; class 2 is estimated by its Dir(gamma) posterior mean and class 1
/// by a Dir(1) posterior mean. One-sided evidence only: the maximum over S
/// under-estimates the supremum over all inputs.
inline MonteCarloEstimate simulate_interpolation_risk(std::uint64_t n, const MultinomialFamily& fam,
                                                      const McOptions& opt, LossOrder p = LossOrder(1.0)) {
    if (opt.trials < min_simulation_trials) throw std::domain_error("simulation needs at least 100 trials");
    const auto categories = static_cast<std::size_t>(fam.d);
    const LossEvaluator evaluator(p, 2);
    const auto inner = mc_mean(
        [&](Rng& rng) {
            const std::vector<double> theta2 = sample_dirichlet(fam.prior.gamma(), rng);
            const std::vector<double> theta1 = class1_parameter(theta2);
            const auto n1 = boost::random::binomial_distribution<std::int64_t, double>(
                static_cast<std::int64_t>(n), 0.5)(rng);
            const auto n2 = static_cast<std::int64_t>(n) - n1;
            const auto c1 = sample_multinomial(n1 * fam.k, theta1, rng);
            const auto c2 = sample_multinomial(n2 * fam.k, theta2, rng);

            std::vector<double> est1(categories), est2(categories);
            const double denom1 = static_cast<double>(categories) + static_cast<double>(n1 * fam.k);
            const double denom2 = fam.prior.gamma0() + static_cast<double>(n2 * fam.k);
            for (std::size_t i = 0; i < categories; ++i) {
                est1[i] = (1.0 + static_cast<double>(c1[i])) / denom1;
                est2[i] = (fam.prior[i] + static_cast<double>(c2[i])) / denom2;
            }
            const auto truth = interpolation_values(theta1, theta2, fam.k);
            const auto plug_in = interpolation_values(est1, est2, fam.k);
            double worst = 0.0;
            for (std::size_t i = 0; i < truth.size(); ++i) {
                worst = std::max(worst, evaluator.inner_binary(truth[i], plug_in[i]));
            }
            return worst;
        },
        opt);
    return evaluator.finalize(inner);
}

}  // namespace rdbound::multinomial
