#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>

#include "rdbound/loss_order.hpp"
#include "rdbound/monte_carlo.hpp"
#include "rdbound/rng.hpp"
#include "rdbound/specfun.hpp"

namespace rdbound::zero_error {

/// Labelled point of the noiseless threshold family on [0, 1].
struct Sample {
    double x = 0.0;
    int y = 1;  // +1 or -1
};

/// Version space (theta_l, theta_r] left by a consistent sample.
struct ThetaInterval {
    double theta_l = 0.0;
    double theta_r = 1.0;
    double width() const { return theta_r - theta_l; }
};

class ContradictionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// +1 when x >= theta; the tie goes to +1.
inline int label(double x, double theta) { return x >= theta ? 1 : -1; }

/// theta_l = largest negatively labelled x (0 if none), theta_r = smallest
/// positively labelled x (1 if none).
inline ThetaInterval interval(std::span<const Sample> samples) {
    ThetaInterval out;
    for (const Sample& s : samples) {
        if (s.y == 1) {
            out.theta_r = std::min(out.theta_r, s.x);
        } else if (s.y == -1) {
            out.theta_l = std::max(out.theta_l, s.x);
        } else {
            throw std::domain_error("labels must be +1 or -1");
        }
    }
    if (out.theta_l > out.theta_r) throw ContradictionError("labels are not separable by any threshold");
    return out;
}

inline double midpoint_estimator(std::span<const Sample> samples) {
    const ThetaInterval iv = interval(samples);
    return 0.5 * (iv.theta_l + iv.theta_r);
}

/// I(Z^n; theta) = H_{n+1} - 1.
inline Nats mutual_information_exact(std::uint64_t n) { return harmonic(n + 1) - 1.0; }

struct RdLower {
    Nats printed = 0.0;     // [-ln(2 Gamma(1+1/p)) - (1/p) ln(p e) - ln D]^+
    Nats rederived = 0.0;   // printed constant plus (1/p) ln 2, from the moment D^p / 2
};

inline RdLower rd_lower(double distortion, LossOrder p) {
    if (!(distortion > 0.0)) throw std::domain_error("distortion D must be positive");
    const double inv = p.reciprocal();
    const double pe_term = p.is_infinite() ? 0.0 : inv * std::log(p.value() * std::numbers::e);
    const double base = -std::log(2.0) - log_gamma(1.0 + inv) - pe_term - std::log(distortion);
    return {std::max(base, 0.0), std::max(base + inv * std::numbers::ln2, 0.0)};
}

/// Risk at which the printed rate lower bound meets the exact MI; on the L1
/// scale (twice E|theta - theta_hat|) when p = 1.
inline double risk_lower(std::uint64_t n, LossOrder p) {
    const double inv = p.reciprocal();
    const double pe_term = p.is_infinite() ? 0.0 : inv * std::log(p.value() * std::numbers::e);
    return std::exp(-mutual_information_exact(n) - std::log(2.0) - log_gamma(1.0 + inv) - pe_term);
}

/// Midpoint-estimator risk in the closed form 1 / (4 (n+1)). That form takes
/// E[theta_r - theta_l] = 1/(n+1), but the gap containing theta is
/// size-biased (mean 2/(n+2)), so simulation settles at 1 / (2 (n+2)).
struct EstimatorRisk {
    double e_abs = 0.0;  // E|theta - theta_hat|
    double l1 = 0.0;     // 2 E|theta - theta_hat|
};

inline EstimatorRisk estimator_risk_exact(std::uint64_t n) {
    const double e_abs = 1.0 / (4.0 * (static_cast<double>(n) + 1.0));
    return {e_abs, 2.0 * e_abs};
}

struct SampleComplexity {
    double n_necessary = 0.0;   // e^{-gamma} / (2 l1) - 1
    double n_sufficient = 0.0;  // 1 / (2 l1) - 1, met by the midpoint estimator
};

inline SampleComplexity sample_complexity(double l1_target) {
    if (!(l1_target > 0.0 && l1_target < 0.5)) throw std::domain_error("L1 target must lie in (0, 1/2)");
    return {std::exp(-euler_gamma) / (2.0 * l1_target) - 1.0, 1.0 / (2.0 * l1_target) - 1.0};
}

namespace detail {

struct Draw {
    double theta;
    ThetaInterval iv;
};

inline Draw draw_problem(std::uint64_t n, Rng& rng) {
    Draw out{uniform01(rng), {}};
    for (std::uint64_t i = 0; i < n; ++i) {
        const double x = uniform01(rng);
        if (label(x, out.theta) == 1) {
            out.iv.theta_r = std::min(out.iv.theta_r, x);
        } else {
            out.iv.theta_l = std::max(out.iv.theta_l, x);
        }
    }
    return out;
}

}  // namespace detail

inline constexpr std::uint64_t min_simulation_trials = 1000;

struct MiMonteCarlo {
    MonteCarloEstimate estimate;
    std::uint64_t resampled = 0;  // zero-width intervals that were redrawn
};

/// E[-ln(theta_r - theta_l)] over the prior and the data.
inline MiMonteCarlo mi_monte_carlo(std::uint64_t n, const McOptions& opt) {
    if (opt.trials < min_simulation_trials) throw std::domain_error("MI simulation needs at least 1000 trials");
    std::atomic<std::uint64_t> resampled{0};
    const MonteCarloEstimate est = mc_mean(
        [&](Rng& rng) {
            for (;;) {
                const detail::Draw draw = detail::draw_problem(n, rng);
                if (draw.iv.width() > 0.0) return -std::log(draw.iv.width());
                resampled.fetch_add(1, std::memory_order_relaxed);
            }
        },
        opt);
    return {est, resampled.load()};
}

/// E|theta - midpoint| by simulation.
inline MonteCarloEstimate simulate_estimator_risk(std::uint64_t n, const McOptions& opt) {
    if (opt.trials < min_simulation_trials) throw std::domain_error("risk simulation needs at least 1000 trials");
    return mc_mean(
        [&](Rng& rng) {
            const detail::Draw draw = detail::draw_problem(n, rng);
            return std::abs(draw.theta - 0.5 * (draw.iv.theta_l + draw.iv.theta_r));
        },
        opt);
}

}  // namespace rdbound::zero_error
