#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "rdbound/knn_entropy.hpp"
#include "rdbound/monte_carlo.hpp"
#include "rdbound/rd_core.hpp"
#include "rdbound/sim_common.hpp"
#include "rdbound/specfun.hpp"

namespace rdbound::gaussian {

/// Binary classifier with class-conditional N(+theta, s2 I) / N(-theta, s2 I),
/// equal class priors and theta ~ N(0, I/d).
struct GaussianFamily {
    int d;
    double sigma2;

    GaussianFamily(int dim, double noise_variance) : d(dim), sigma2(noise_variance) {
        if (d < 1) throw std::domain_error("Gaussian family needs d >= 1");
        if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw std::domain_error("sigma2 must be positive");
    }

    /// Any orthogonal basis interpolates, and the map covers everything.
    InterpolationSpec spec() const { return {d, d, 2, 1.0}; }
};

namespace detail {

inline double logistic(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

}  // namespace detail

/// W(y=1 | x, theta) = 1 / (1 + exp(-2 x.theta / s2)).
inline double posterior(std::span<const double> x, std::span<const double> theta, double sigma2) {
    if (x.size() != theta.size()) throw std::domain_error("x and theta differ in dimension");
    double dot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * theta[i];
    return detail::logistic(2.0 * dot / sigma2);
}

struct EntropyLowerNu {
    Nats total = 0.0;
    Nats nu = 0.0;  // total / d
};

/// Lower bound on the expected posterior entropy over an orthogonal basis.
inline EntropyLowerNu entropy_lower_nu(int d, double sigma2) {
    if (d < 1 || !(sigma2 > 0.0)) throw std::domain_error("entropy bound needs d >= 1 and sigma2 > 0");
    const double dd = d;
    const double ds2 = dd * sigma2;
    const double spread = 1.0 / ds2 + 1.0;
    const double gamma_ratio = std::exp(log_gamma((dd + 1.0) / 2.0) - log_gamma(dd / 2.0));
    const double total = 0.5 * dd * digamma(dd / 2.0) + 0.5 * dd * std::log(16.0 * std::numbers::pi * spread / ds2) -
                         dd * gamma_ratio * std::sqrt(4.0 * spread / (std::numbers::pi * ds2)) - 1.5 * dd -
                         2.0 * dd * std::numbers::ln2;
    return {total, total / dd};
}

/// I(Z^n; theta) = (d/2) ln(1 + n / (d s2)).
inline Nats mutual_information_exact(std::uint64_t n, int d, double sigma2) {
    return 0.5 * d * std::log1p(static_cast<double>(n) / (d * sigma2));
}

/// Clarke-Barron form (d/2) ln(n / (d s2)).
inline Nats mutual_information_cb(std::uint64_t n, int d, double sigma2) {
    if (n == 0) throw std::domain_error("Clarke-Barron expansion needs n >= 1");
    return 0.5 * d * std::log(static_cast<double>(n) / (d * sigma2));
}

/// Statistic T = theta + noise: Fisher I / s2, prior entropy (d/2) ln(2 pi e / d).
inline FisherSummary fisher_summary(int d, double sigma2) {
    return {d, -0.5 * d * std::log(sigma2), 0.5 * d * std::log(2.0 * std::numbers::pi * std::numbers::e / d)};
}

struct RdBounds {
    Nats lower = 0.0;
    Nats upper = 0.0;
};

inline RdBounds rd_bounds_l1(double distortion, int d, double sigma2) {
    const GaussianFamily fam(d, sigma2);
    const InterpolationSpec spec = fam.spec();
    return {rd_lower_average(entropy_lower_nu(d, sigma2).total, spec, LossOrder(1.0), distortion),
            rd_upper(spec, distortion)};
}

struct BayesRiskL1 {
    double printed = 0.0;   // sqrt(s2 d / (s2 d + n)) exp(nu - 1)
    double pipeline = 0.0;  // generic inversion at the exact MI; half of printed
};

inline BayesRiskL1 bayes_risk_lower_l1(std::uint64_t n, int d, double sigma2) {
    const GaussianFamily fam(d, sigma2);
    const EntropyLowerNu nu = entropy_lower_nu(d, sigma2);
    const double ds2 = d * sigma2;
    const double printed = std::sqrt(ds2 / (ds2 + static_cast<double>(n))) * std::exp(nu.nu - 1.0);
    const double pipeline =
        risk_lower_from_mi(mutual_information_exact(n, d, sigma2), nu.total, fam.spec(), LossOrder(1.0));
    return {printed, pipeline};
}

/// Mean Euclidean norm of a feature draw (marginal N(0, (1/d + s2) I)),
/// the length given to the basis vectors in the entropy cross-check.
inline double interpolation_norm(int d, double sigma2) {
    const double dd = d;
    return std::sqrt(2.0 * (1.0 / dd + sigma2)) * std::exp(log_gamma((dd + 1.0) / 2.0) - log_gamma(dd / 2.0));
}

/// W(c e_i; theta) for i < d at the scaled standard basis, one row per theta draw.
inline SampleMatrix sample_interpolation_values(const GaussianFamily& fam, std::size_t draws, Rng& rng) {
    const double c = interpolation_norm(fam.d, fam.sigma2);
    const double prior_sd = std::sqrt(1.0 / fam.d);
    SampleMatrix out(draws, static_cast<std::size_t>(fam.d));
    for (std::size_t r = 0; r < draws; ++r) {
        for (int i = 0; i < fam.d; ++i) {
            const double theta_i = prior_sd * standard_normal(rng);
            out(r, static_cast<std::size_t>(i)) = detail::logistic(2.0 * c * theta_i / fam.sigma2);
        }
    }
    return out;
}

inline constexpr std::uint64_t min_simulation_trials = 100;
inline constexpr std::uint64_t min_test_points = 100;

/// L1 Bayes risk of the conjugate plug-in theta_hat = (sum T / s2) / (d + n / s2),
/// averaged over fresh test draws from the true marginal. The training sum
/// is drawn from its exact law N(n theta, n s2 I).
inline MonteCarloEstimate simulate_bayes_risk(std::uint64_t n, const GaussianFamily& fam, std::uint64_t test_points,
                                              const McOptions& opt) {
    if (opt.trials < min_simulation_trials) throw std::domain_error("simulation needs at least 100 trials");
    if (test_points < min_test_points) throw std::domain_error("simulation needs at least 100 test points");
    const auto d = static_cast<std::size_t>(fam.d);
    const double nn = static_cast<double>(n);
    const double noise_sd = std::sqrt(fam.sigma2);
    const double prior_sd = std::sqrt(1.0 / fam.d);
    const double shrink = 1.0 / (fam.sigma2 * (fam.d + nn / fam.sigma2));
    return mc_mean(
        [&](Rng& rng) {
            std::vector<double> theta(d), theta_hat(d), x(d);
            for (std::size_t i = 0; i < d; ++i) {
                theta[i] = prior_sd * standard_normal(rng);
                const double sum_t = nn * theta[i] + std::sqrt(nn) * noise_sd * standard_normal(rng);
                theta_hat[i] = sum_t * shrink;
            }
            double acc = 0.0;
            for (std::uint64_t t = 0; t < test_points; ++t) {
                const double sign = (rng() & 1u) ? 1.0 : -1.0;
                for (std::size_t i = 0; i < d; ++i) x[i] = sign * theta[i] + noise_sd * standard_normal(rng);
                acc += 2.0 * std::abs(posterior(x, theta, fam.sigma2) - posterior(x, theta_hat, fam.sigma2));
            }
            return acc / static_cast<double>(test_points);
        },
        opt);
}

}  // namespace rdbound::gaussian
