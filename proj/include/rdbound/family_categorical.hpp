#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rdbound/loss_order.hpp"
#include "rdbound/monte_carlo.hpp"
#include "rdbound/rd_core.hpp"
#include "rdbound/sim_common.hpp"
#include "rdbound/specfun.hpp"

namespace rdbound {

/// Dirichlet concentration vector with its cached total.
class DirichletPrior {
public:
    explicit DirichletPrior(std::vector<double> gamma) : gamma_(std::move(gamma)) {
        if (gamma_.size() < 2) throw std::domain_error("Dirichlet prior needs at least two components");
        for (double g : gamma_) {
            if (!(g > 0.0) || !std::isfinite(g)) {
                throw std::domain_error("Dirichlet concentrations must be finite and positive");
            }
        }
        gamma0_ = std::accumulate(gamma_.begin(), gamma_.end(), 0.0);
    }

    static DirichletPrior symmetric(int size, double kappa) {
        return DirichletPrior(std::vector<double>(static_cast<std::size_t>(size), kappa));
    }

    std::span<const double> gamma() const { return gamma_; }
    double operator[](std::size_t i) const { return gamma_[i]; }
    double gamma0() const { return gamma0_; }
    int size() const { return static_cast<int>(gamma_.size()); }

private:
    std::vector<double> gamma_;
    double gamma0_ = 0.0;
};

/// Dirichlet entropy of (theta_1..theta_{M-1}):
/// ln B(gamma) - (M - gamma0) psi(gamma0) - sum (gamma_i - 1) psi(gamma_i).
inline Nats dirichlet_entropy(const DirichletPrior& prior) {
    double h = log_beta_multivariate(prior.gamma()) - (prior.size() - prior.gamma0()) * digamma(prior.gamma0());
    for (double g : prior.gamma()) h -= (g - 1.0) * digamma(g);
    return h;
}

namespace categorical {

/// Trivial input space: one interpolation point, d_I = 1, full coverage.
inline InterpolationSpec interpolation_spec(const DirichletPrior& prior) { return {1, 1, prior.size(), 1.0}; }

inline Nats posterior_entropy(const DirichletPrior& prior) { return dirichlet_entropy(prior); }

/// Fisher summary of (theta_1..theta_{M-1}); the Fisher matrix in the
/// stick-free coordinates gives E ln|I|^{1/2} = ((M-1)/2) psi(g0) - (1/2) sum_{i<M} psi(g_i).
inline FisherSummary fisher_summary(const DirichletPrior& prior) {
    const int m1 = prior.size() - 1;
    double e_log = 0.5 * m1 * digamma(prior.gamma0());
    for (int i = 0; i < m1; ++i) e_log -= 0.5 * digamma(prior[static_cast<std::size_t>(i)]);
    return {m1, e_log, posterior_entropy(prior)};
}

/// Asymptotic (Clarke-Barron) mutual information I(Z^n; theta).
/// Only the first M-1 coordinates contribute Fisher terms, so the value sits
/// -(psi(g_M) - psi(g0))/2 below the full-simplex expansion (1/2 nat for a
/// flat binary prior).
inline Nats mutual_information(std::uint64_t n, const DirichletPrior& prior) {
    if (n == 0) throw std::domain_error("mutual information expansion needs n >= 1");
    const int m1 = prior.size() - 1;
    double mi = 0.5 * m1 * std::log(static_cast<double>(n) / (2.0 * std::numbers::pi * std::numbers::e)) +
                0.5 * m1 * digamma(prior.gamma0());
    for (int i = 0; i < m1; ++i) mi -= 0.5 * digamma(prior[static_cast<std::size_t>(i)]);
    return mi + posterior_entropy(prior);
}

/// L_p Bayes-risk lower bound through the generic inversion.
inline double bayes_risk_lower(std::uint64_t n, const DirichletPrior& prior, LossOrder p) {
    return risk_lower_from_mi(mutual_information(n, prior), posterior_entropy(prior), interpolation_spec(prior), p);
}

/// Closed forms as typeset for p in {1, 2, inf}; these carry -psi(g0) in the
/// exponent where the inversion gives -psi(g0)/2. Empty for other p.
inline std::optional<double> bayes_risk_lower_printed(std::uint64_t n, const DirichletPrior& prior, LossOrder p) {
    if (n == 0) throw std::domain_error("printed bound needs n >= 1");
    const double m1 = prior.size() - 1;
    const double nn = static_cast<double>(n);
    double psi_sum = 0.0;
    for (int i = 0; i + 1 < prior.size(); ++i) psi_sum += digamma(prior[static_cast<std::size_t>(i)]);
    const double psi0 = digamma(prior.gamma0());
    if (p.is_infinite()) {
        return std::sqrt(std::numbers::pi * std::numbers::e / (2.0 * nn)) * std::exp(psi_sum / (2.0 * m1) - psi0);
    }
    if (p.value() == 1.0) {
        return m1 * std::sqrt(std::numbers::pi / (2.0 * std::numbers::e * nn)) * std::exp(psi_sum / (2.0 * m1) - psi0);
    }
    if (p.value() == 2.0) return std::sqrt(m1 / nn) * std::exp(psi_sum / m1 - psi0);
    return std::nullopt;
}

/// Minimax L1 constant sqrt(pi (M-1) / (2 e n)).
inline double minimax_limit_l1(std::uint64_t n, int classes) {
    if (n == 0) throw std::domain_error("minimax limit needs n >= 1");
    if (classes < 2) throw std::domain_error("class count must be >= 2");
    return std::sqrt(std::numbers::pi * (classes - 1) / (2.0 * std::numbers::e * static_cast<double>(n)));
}

struct KamathBounds {
    double lower = 0.0;  // may be negative
    double upper = 0.0;
};

/// Reference minimax L1 bounds for symmetric priors gamma_i = kappa >= 1.
inline KamathBounds kamath_bounds(std::uint64_t n, int classes, double kappa) {
    if (n == 0) throw std::domain_error("Kamath bounds need n >= 1");
    if (classes < 2) throw std::domain_error("class count must be >= 2");
    if (!(kappa >= 1.0)) throw std::domain_error("Kamath bounds only apply for kappa >= 1");
    const double m = classes;
    const double nn = static_cast<double>(n);
    const double leading = std::sqrt(2.0 * (m - 1.0) / (std::numbers::pi * nn));
    const double correction = 4.0 * std::sqrt(m) * std::pow(m - 1.0, 0.25) / std::pow(nn, 0.75);
    const double lower =
        leading * (1.0 - m / (2.0 * (m - 1.0) * kappa)) - correction - m * (1.0 - m * kappa) / (nn + m * kappa);
    return {lower, leading + correction};
}

inline constexpr std::uint64_t min_simulation_trials = 100;

/// L_p Bayes risk of the posterior-mean estimator under the Dirichlet prior.
inline MonteCarloEstimate simulate_bayes_risk(std::uint64_t n, const DirichletPrior& prior, LossOrder p,
                                              const McOptions& opt) {
    if (opt.trials < min_simulation_trials) throw std::domain_error("simulation needs at least 100 trials");
    const LossEvaluator evaluator(p, prior.size());
    const double denom = prior.gamma0() + static_cast<double>(n);
    const auto inner = mc_mean(
        [&](Rng& rng) {
            const std::vector<double> theta = sample_dirichlet(prior.gamma(), rng);
            const std::vector<std::int64_t> counts = sample_multinomial(static_cast<std::int64_t>(n), theta, rng);
            std::vector<double> estimate(theta.size());
            for (std::size_t y = 0; y < theta.size(); ++y) {
                estimate[y] = (prior[y] + static_cast<double>(counts[y])) / denom;
            }
            return evaluator.inner(theta, estimate);
        },
        opt);
    return evaluator.finalize(inner);
}

}  // namespace categorical
}  // namespace rdbound
