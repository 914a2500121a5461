#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include <boost/random/gamma_distribution.hpp>

#include "rdbound/knn_entropy.hpp"
#include "rdbound/loss_order.hpp"
#include "rdbound/rng.hpp"
#include "rdbound/specfun.hpp"

namespace rdbound {

/// Shape of the interpolation problem a family reduces to.
struct InterpolationSpec {
    int d_star = 1;         // interpolation-set cardinality
    int d_interp = 1;       // interpolation dimension
    int classes = 2;        // M
    double coverage = 1.0;  // probability mass of the interpolation map; pointwise bounds ignore it

    void validate() const {
        if (d_star < 1 || d_interp < 1) throw std::domain_error("interpolation sizes must be >= 1");
        if (classes < 2) throw std::domain_error("class count must be >= 2");
        if (!(coverage > 0.0 && coverage <= 1.0)) throw std::domain_error("coverage must lie in (0, 1]");
    }

    /// Free coordinates of the bounded source, d_star * (M - 1).
    double free_coordinates() const { return static_cast<double>(d_star) * (classes - 1); }
};

enum class BoundKind { rd_lower, rd_upper, risk_lower, mi };

struct BoundValue {
    double value = 0.0;
    BoundKind kind = BoundKind::rd_lower;
};

/// Minimal-sufficient-statistic summary used by the Clarke-Barron expansion.
struct FisherSummary {
    int t = 1;                                 // dimension of the statistic
    double e_log_sqrt_det_fisher = 0.0;        // E[ln |I(alpha)|^{1/2}]
    Nats h_alpha = 0.0;                        // differential entropy of the statistic
};

enum class Clamp { positive_part, none };

namespace detail {

inline void require_positive_distortion(double distortion) {
    if (!(distortion > 0.0)) throw std::domain_error("distortion D must be positive");
}

inline double clamp_rate(double raw, Clamp clamp) { return clamp == Clamp::positive_part ? std::max(raw, 0.0) : raw; }

}  // namespace detail

/// Lower bound on the pointwise rate-distortion function:
/// [h - d*(M-1)(ln D + C_p)]^+.
inline Nats rd_lower_pointwise(Nats h_ws, const InterpolationSpec& spec, LossOrder p, double distortion,
                               Clamp clamp = Clamp::positive_part) {
    spec.validate();
    detail::require_positive_distortion(distortion);
    const double raw = h_ws - spec.free_coordinates() * (std::log(distortion) + cp_constant(p, spec.classes));
    return detail::clamp_rate(raw, clamp);
}

/// -d_I (M-1) ln min{D, 1/(M-1)}.
inline Nats rd_upper(const InterpolationSpec& spec, double distortion) {
    spec.validate();
    detail::require_positive_distortion(distortion);
    const double m1 = spec.classes - 1;
    return -static_cast<double>(spec.d_interp) * m1 * std::log(std::min(distortion, 1.0 / m1));
}

/// Average-over-inputs version; the distortion budget is spread over the
/// covered mass, hence ln(D / coverage).
inline Nats rd_lower_average(Nats e_h_ws, const InterpolationSpec& spec, LossOrder p, double distortion,
                             Clamp clamp = Clamp::positive_part) {
    spec.validate();
    detail::require_positive_distortion(distortion);
    const double raw = e_h_ws - spec.free_coordinates() *
                                    (std::log(distortion / spec.coverage) + cp_constant(p, spec.classes));
    return detail::clamp_rate(raw, clamp);
}

/// Smallest risk D whose rate lower bound does not exceed the available
/// information `mi`; the Bayes-risk lower bound of the generic pipeline.
/// Not clamped to [0, 1].
inline double risk_lower_from_mi(Nats mi, Nats h_ws, const InterpolationSpec& spec, LossOrder p) {
    spec.validate();
    return spec.coverage * std::exp((h_ws - mi) / spec.free_coordinates() - cp_constant(p, spec.classes));
}

/// Clarke-Barron expansion without its o(1) remainder.
inline Nats mi_clarke_barron(std::uint64_t n, const FisherSummary& fisher) {
    if (n == 0) throw std::domain_error("Clarke-Barron expansion needs n >= 1");
    const double log_scaled_n = std::log(static_cast<double>(n) / (2.0 * std::numbers::pi * std::numbers::e));
    return 0.5 * fisher.t * log_scaled_n + fisher.e_log_sqrt_det_fisher + fisher.h_alpha;
}

/// Sample-complexity form: with E[ln|I^{-1}|] <= c1 and entropy >= c2,
/// risk >= exp((c2-c1)/(d*(M-1))) / c3p * (2 pi e / n)^{t / (2 d*(M-1))}.
inline double risk_lower_generic(std::uint64_t n, int t, double c1, double c2, const InterpolationSpec& spec,
                                 LossOrder p) {
    if (n == 0) throw std::domain_error("risk_lower_generic needs n >= 1");
    spec.validate();
    const double free = spec.free_coordinates();
    const double c3p = std::exp(cp_constant(p, spec.classes));
    const double base = 2.0 * std::numbers::pi * std::numbers::e / static_cast<double>(n);
    return std::exp((c2 - c1) / free) / c3p * std::pow(base, t / (2.0 * free));
}

/// Maximum-entropy ceiling on the posterior entropy: -d_I (M-1) ln(M-1).
inline Nats posterior_entropy_upper(const InterpolationSpec& spec) {
    spec.validate();
    const double m1 = spec.classes - 1;
    return -static_cast<double>(spec.d_interp) * m1 * std::log(m1);
}

struct ChangeOfVariableEstimate {
    Nats value = 0.0;
    double std_error = 0.0;  // of the sampled Jacobian terms only
};

inline constexpr std::size_t change_of_variable_min_samples = 1000;

/// h(W) = h(N) - E ln|J| for the map N_iy = W_iy (1 + S_i/(1+S_i)),
/// S_i = sum_{y<M} W_iy, whose Jacobian per row is
/// ((1+2S)/(1+S))^{M-1} (1 + S/((1+S)(1+2S))).
///
/// Each sample row of `w_samples` holds d_I blocks of M-1 regression values.
inline ChangeOfVariableEstimate posterior_entropy_change_of_var(const SampleMatrix& w_samples, int d_interp,
                                                                int classes, Nats h_n) {
    if (d_interp < 1 || classes < 2) throw std::domain_error("invalid interpolation shape");
    const auto m1 = static_cast<std::size_t>(classes - 1);
    if (w_samples.cols() != static_cast<std::size_t>(d_interp) * m1) {
        throw std::domain_error("sample width must be d_I * (M - 1)");
    }
    if (w_samples.rows() < change_of_variable_min_samples) {
        throw std::domain_error("change-of-variable estimate needs at least 1000 samples");
    }
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t r = 0; r < w_samples.rows(); ++r) {
        double log_jac = 0.0;
        for (int i = 0; i < d_interp; ++i) {
            double s = 0.0;
            for (std::size_t y = 0; y < m1; ++y) s += w_samples(r, i * m1 + y);
            log_jac += static_cast<double>(m1) * std::log((1.0 + 2.0 * s) / (1.0 + s)) +
                       std::log1p(s / ((1.0 + s) * (1.0 + 2.0 * s)));
        }
        sum += log_jac;
        sum_sq += log_jac * log_jac;
    }
    const double n = static_cast<double>(w_samples.rows());
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    return {h_n - mean, std::sqrt(var / n)};
}

/// Maps W samples to N = W (1 + S/(1+S)), the image whose entropy feeds
/// posterior_entropy_change_of_var.
inline SampleMatrix change_of_variable_image(const SampleMatrix& w_samples, int d_interp, int classes) {
    const auto m1 = static_cast<std::size_t>(classes - 1);
    if (w_samples.cols() != static_cast<std::size_t>(d_interp) * m1) {
        throw std::domain_error("sample width must be d_I * (M - 1)");
    }
    SampleMatrix out(w_samples.rows(), w_samples.cols());
    for (std::size_t r = 0; r < w_samples.rows(); ++r) {
        for (int i = 0; i < d_interp; ++i) {
            double s = 0.0;
            for (std::size_t y = 0; y < m1; ++y) s += w_samples(r, i * m1 + y);
            const double scale = 1.0 + s / (1.0 + s);
            for (std::size_t y = 0; y < m1; ++y) out(r, i * m1 + y) = w_samples(r, i * m1 + y) * scale;
        }
    }
    return out;
}

/// Entropy of the density proportional to exp(-lambda |u|^p) whose p-th
/// absolute moment is `moment`: ln(2 Gamma(1+1/p)) + (1/p) ln(p e moment).
inline Nats generalized_gaussian_entropy(LossOrder p, double moment) {
    if (p.is_infinite()) throw std::domain_error("generalized Gaussian entropy needs finite p");
    if (!(moment > 0.0)) throw std::domain_error("moment must be positive");
    const double pv = p.value();
    return std::log(2.0) + log_gamma(1.0 + 1.0 / pv) + std::log(pv * std::numbers::e * moment) / pv;
}

/// One draw from lambda^{1/p} / (2 Gamma(1+1/p)) exp(-lambda |u|^p):
/// lambda |U|^p ~ Gamma(1/p, 1) with an independent random sign.
inline double generalized_gaussian_sample(LossOrder p, double lambda, Rng& rng) {
    if (p.is_infinite()) throw std::domain_error("generalized Gaussian sampling needs finite p");
    if (!(lambda > 0.0)) throw std::domain_error("lambda must be positive");
    const double pv = p.value();
    const double v = boost::random::gamma_distribution<double>(1.0 / pv, 1.0)(rng);
    const double magnitude = std::pow(v / lambda, 1.0 / pv);
    return (rng() & 1u) ? magnitude : -magnitude;
}

}  // namespace rdbound
