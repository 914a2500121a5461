#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/random/binomial_distribution.hpp>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include "rdbound/loss_order.hpp"
#include "rdbound/monte_carlo.hpp"
#include "rdbound/rng.hpp"

namespace rdbound {

inline double standard_normal(Rng& rng) { return boost::random::normal_distribution<double>(0.0, 1.0)(rng); }

/// ln of a Gamma(shape, 1) variate. Shapes below 1 use the boost
/// Gamma(shape+1) * U^{1/shape} identity in log space, so tiny shapes do not
/// underflow to an exact zero.
inline double sample_log_gamma_variate(double shape, Rng& rng) {
    if (!(shape > 0.0)) throw std::domain_error("gamma shape must be positive");
    if (shape >= 1.0) return std::log(boost::random::gamma_distribution<double>(shape, 1.0)(rng));
    const double boosted = boost::random::gamma_distribution<double>(shape + 1.0, 1.0)(rng);
    return std::log(boosted) + std::log(uniform01(rng)) / shape;
}

inline double sample_gamma(double shape, Rng& rng) { return std::exp(sample_log_gamma_variate(shape, rng)); }

/// Dirichlet draw via normalised Gamma variates; the result sums to one.
inline std::vector<double> sample_dirichlet(std::span<const double> gamma, Rng& rng) {
    if (gamma.size() < 2) throw std::domain_error("Dirichlet needs at least two components");
    std::vector<double> out(gamma.size());
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        out[i] = sample_log_gamma_variate(gamma[i], rng);
        top = std::max(top, out[i]);
    }
    double total = 0.0;
    for (double& v : out) {
        v = std::exp(v - top);
        total += v;
    }
    for (double& v : out) v /= total;
    return out;
}

/// Multinomial counts by sequential binomial decomposition.
inline std::vector<std::int64_t> sample_multinomial(std::int64_t n, std::span<const double> theta, Rng& rng) {
    if (n < 0) throw std::domain_error("multinomial trial count must be nonnegative");
    std::vector<std::int64_t> counts(theta.size(), 0);
    if (theta.empty()) return counts;
    std::int64_t remaining = n;
    double mass = 1.0;
    for (std::size_t i = 0; i + 1 < theta.size() && remaining > 0; ++i) {
        const double q = mass > 0.0 ? std::clamp(theta[i] / mass, 0.0, 1.0) : 1.0;
        const std::int64_t c = boost::random::binomial_distribution<std::int64_t, double>(remaining, q)(rng);
        counts[i] = c;
        remaining -= c;
        mass -= theta[i];
    }
    counts.back() += remaining;
    return counts;
}

/// Inner loss sum over classes: sum_y |w_y - what_y|^p, or max_y for p = inf.
/// The outer 1/p is applied once to the expectation, see LossEvaluator.
inline double loss(LossOrder p, std::span<const double> w_true, std::span<const double> w_hat) {
    if (w_true.size() != w_hat.size()) throw std::domain_error("loss vectors differ in length");
    double acc = 0.0;
    for (std::size_t y = 0; y < w_true.size(); ++y) {
        const double gap = std::abs(w_true[y] - w_hat[y]);
        if (p.is_infinite()) {
            acc = std::max(acc, gap);
        } else {
            acc += p.value() == 1.0 ? gap : std::pow(gap, p.value());
        }
    }
    return acc;
}

class LossEvaluator {
public:
    LossEvaluator(LossOrder p, int classes) : p_(p), classes_(classes) {
        if (classes < 2) throw std::domain_error("loss evaluator needs at least two classes");
    }

    LossOrder order() const { return p_; }
    int classes() const { return classes_; }

    double inner(std::span<const double> w_true, std::span<const double> w_hat) const {
        if (w_true.size() != static_cast<std::size_t>(classes_)) {
            throw std::domain_error("loss vector length differs from class count");
        }
        return loss(p_, w_true, w_hat);
    }

    /// Two-class shortcut: both coordinates differ by the same gap.
    double inner_binary(double w1_true, double w1_hat) const {
        const double gap = std::abs(w1_true - w1_hat);
        if (p_.is_infinite()) return gap;
        return 2.0 * (p_.value() == 1.0 ? gap : std::pow(gap, p_.value()));
    }

    /// (E[inner])^{1/p} with a delta-method standard error. For p = inf the
    /// mean of the per-trial maximum is reported unchanged.
    MonteCarloEstimate finalize(MonteCarloEstimate inner_mean) const {
        if (p_.is_infinite() || p_.value() == 1.0) return inner_mean;
        const double inv = p_.reciprocal();
        const double m = std::max(inner_mean.mean, 0.0);
        const double risk = std::pow(m, inv);
        inner_mean.std_error = m > 0.0 ? inv * risk / m * inner_mean.std_error : 0.0;
        inner_mean.mean = risk;
        return inner_mean;
    }

private:
    LossOrder p_;
    int classes_;
};

}  // namespace rdbound
