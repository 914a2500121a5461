#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "rdbound/loss_order.hpp"

namespace rdbound {

/// Information quantities are natural-log units throughout.
using Nats = double;

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

// Boost.Math rather than std::lgamma: glibc's lgamma writes the global
// signgam, so it is not reentrant.
using SpecfunPolicy = boost::math::policies::policy<
    boost::math::policies::promote_double<false>,
    boost::math::policies::domain_error<boost::math::policies::throw_on_error>,
    boost::math::policies::pole_error<boost::math::policies::throw_on_error>>;

/// ln Gamma(x) for x > 0.
inline double log_gamma(double x) {
    if (!(x > 0.0) || std::isinf(x)) {
        throw std::domain_error("log_gamma requires a finite positive argument");
    }
    return boost::math::lgamma(x, SpecfunPolicy());
}

/// psi(x) = d/dx ln Gamma(x) for x > 0.
inline double digamma(double x) {
    if (!(x > 0.0) || std::isinf(x)) {
        throw std::domain_error("digamma requires a finite positive argument");
    }
    return boost::math::digamma(x, SpecfunPolicy());
}

/// ln B(gamma) = sum ln Gamma(gamma_i) - ln Gamma(sum gamma_i).
inline double log_beta_multivariate(std::span<const double> gamma) {
    if (gamma.size() < 2) {
        throw std::domain_error("multivariate beta needs at least two entries");
    }
    double total = 0.0;
    double sum_lg = 0.0;
    for (double g : gamma) {
        if (!(g > 0.0)) throw std::domain_error("multivariate beta entries must be positive");
        total += g;
        sum_lg += log_gamma(g);
    }
    return sum_lg - log_gamma(total);
}

inline double log_beta(double a, double b) {
    const std::array<double, 2> g{a, b};
    return log_beta_multivariate(g);
}

/// H_n = sum_{i=1}^n 1/i, accumulated from the smallest term up.
inline double harmonic(std::uint64_t n) {
    double sum = 0.0;
    for (std::uint64_t i = n; i >= 1; --i) {
        sum += 1.0 / static_cast<double>(i);
    }
    return sum;
}

/// C_p = ln(2 Gamma(1 + 1/p)) + (1/p) ln(p e / (M - 1)); ln 2 at p = inf.
///
/// This is the per-coordinate entropy of the maximum-entropy error law
/// e^{-lambda |u|^p} minus ln D, when each of the M-1 free coordinates
/// carries distortion budget D^p / (M-1).
inline Nats cp_constant(LossOrder p, int classes) {
    if (classes < 2) throw std::domain_error("cp_constant requires M >= 2");
    if (p.is_infinite()) return std::numbers::ln2;
    const double pv = p.value();
    return std::log(2.0) + log_gamma(1.0 + 1.0 / pv) +
           std::log(pv * std::numbers::e / static_cast<double>(classes - 1)) / pv;
}

}  // namespace rdbound
