#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rdbound/specfun.hpp"

namespace rdbound {

/// Row-major N x d sample matrix.
class SampleMatrix {
public:
    SampleMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), values_(rows * cols) {
        if (cols == 0) throw std::domain_error("sample matrix needs at least one column");
    }
    SampleMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
        : rows_(rows), cols_(cols), values_(std::move(values)) {
        if (cols == 0) throw std::domain_error("sample matrix needs at least one column");
        if (values_.size() != rows * cols) throw std::domain_error("sample matrix size mismatch");
    }

    static SampleMatrix column(std::vector<double> values) {
        const std::size_t n = values.size();
        return SampleMatrix(n, 1, std::move(values));
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
    const double* row(std::size_t r) const { return values_.data() + r * cols_; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> values_;
};

struct EntropyEstimate {
    Nats value = 0.0;
    double std_error = 0.0;
    std::size_t jittered = 0;  // points whose k-th neighbour sat at distance zero
};

inline constexpr int default_knn_k = 4;
inline constexpr double knn_zero_distance_jitter = 1e-12;

namespace detail {

// Max-norm KD-tree used only for the leave-one-out k-th neighbour distance.
class MaxNormKdTree {
public:
    explicit MaxNormKdTree(const SampleMatrix& pts) : pts_(pts), order_(pts.rows()) {
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        nodes_.reserve(2 * pts.rows() / leaf_size + 2);
        build(0, pts.rows());
    }

    /// Distance from point `self` to its k-th nearest other point.
    double kth_distance(std::size_t self, int k) const {
        // Sorted ascending by (distance, index); ties broken by index order.
        std::vector<std::pair<double, std::size_t>> best;
        best.reserve(static_cast<std::size_t>(k) + 1);
        search(0, self, static_cast<std::size_t>(k), best);
        return best.back().first;
    }

private:
    static constexpr std::size_t leaf_size = 12;

    struct Node {
        std::size_t lo, hi;
        std::size_t dim = 0;
        double split = 0.0;
        std::int64_t left = -1, right = -1;
    };

    std::size_t build(std::size_t lo, std::size_t hi) {
        const std::size_t id = nodes_.size();
        nodes_.push_back({lo, hi});
        if (hi - lo <= leaf_size) return id;

        std::size_t dim = 0;
        double widest = -1.0;
        for (std::size_t c = 0; c < pts_.cols(); ++c) {
            double mn = std::numeric_limits<double>::infinity(), mx = -mn;
            for (std::size_t i = lo; i < hi; ++i) {
                const double v = pts_(order_[i], c);
                mn = std::min(mn, v);
                mx = std::max(mx, v);
            }
            if (mx - mn > widest) {
                widest = mx - mn;
                dim = c;
            }
        }
        const std::size_t mid = lo + (hi - lo) / 2;
        std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi,
                         [&](std::size_t a, std::size_t b) { return pts_(a, dim) < pts_(b, dim); });
        nodes_[id].dim = dim;
        nodes_[id].split = pts_(order_[mid], dim);
        const auto left = static_cast<std::int64_t>(build(lo, mid));
        const auto right = static_cast<std::int64_t>(build(mid, hi));
        nodes_[id].left = left;
        nodes_[id].right = right;
        return id;
    }

    double distance(std::size_t a, std::size_t b) const {
        double d = 0.0;
        for (std::size_t c = 0; c < pts_.cols(); ++c) d = std::max(d, std::abs(pts_(a, c) - pts_(b, c)));
        return d;
    }

    static void offer(std::vector<std::pair<double, std::size_t>>& best, std::size_t k,
                      std::pair<double, std::size_t> cand) {
        if (best.size() == k && !(cand < best.back())) return;
        best.insert(std::upper_bound(best.begin(), best.end(), cand), cand);
        if (best.size() > k) best.pop_back();
    }

    void search(std::size_t id, std::size_t self, std::size_t k,
                std::vector<std::pair<double, std::size_t>>& best) const {
        const Node& node = nodes_[id];
        if (node.left < 0) {
            for (std::size_t i = node.lo; i < node.hi; ++i) {
                const std::size_t j = order_[i];
                if (j != self) offer(best, k, {distance(self, j), j});
            }
            return;
        }
        const double gap = pts_(self, node.dim) - node.split;
        const auto near = static_cast<std::size_t>(gap < 0.0 ? node.left : node.right);
        const auto far = static_cast<std::size_t>(gap < 0.0 ? node.right : node.left);
        search(near, self, k, best);
        // <= keeps equal-distance candidates reachable for index tie-breaking.
        if (best.size() < k || std::abs(gap) <= best.back().first) search(far, self, k, best);
    }

    const SampleMatrix& pts_;
    std::vector<std::size_t> order_;
    std::vector<Node> nodes_;
};

}  // namespace detail

/// Kozachenko-Leonenko entropy estimate under the max-norm.
///
/// h = psi(N) - psi(k) + (d/N) sum_i ln eps_i, with eps_i twice the max-norm
/// distance to the k-th neighbour. A max-norm ball of diameter eps has volume
/// eps^d, so the unit-volume constant is 1 and drops out.
inline EntropyEstimate knn_entropy(const SampleMatrix& samples, int k = default_knn_k) {
    const std::size_t n = samples.rows();
    const std::size_t d = samples.cols();
    if (k < 1) throw std::domain_error("knn_entropy requires k >= 1");
    if (n <= static_cast<std::size_t>(k) + 1 || n < d + 2) {
        throw std::domain_error("knn_entropy needs more samples than k + 1 and d + 1");
    }
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            if (!std::isfinite(samples(r, c))) throw std::domain_error("knn_entropy input must be finite");
        }
    }

    const detail::MaxNormKdTree tree(samples);
    EntropyEstimate out;
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double eps = 2.0 * tree.kth_distance(i, k);
        if (eps <= 0.0) {
            eps = knn_zero_distance_jitter;
            ++out.jittered;
        }
        const double l = std::log(eps);
        sum += l;
        sum_sq += l * l;
    }
    const double nd = static_cast<double>(n);
    const double mean_log = sum / nd;
    const double var_log = std::max(0.0, (sum_sq - nd * mean_log * mean_log) / (nd - 1.0));
    const double dim = static_cast<double>(d);
    out.value = digamma(nd) - digamma(static_cast<double>(k)) + dim * mean_log;
    out.std_error = dim * std::sqrt(var_log / nd);
    return out;
}

}  // namespace rdbound
