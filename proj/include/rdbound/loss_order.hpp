#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rdbound {

/// Exponent p of an L_p loss: a finite real >= 1, or infinity.
///
/// Infinity is a distinct state rather than a large double so that limit
/// formulas (C_inf = ln 2, max-gap losses) come out exact.
class LossOrder {
public:
    explicit LossOrder(double p) {
        if (std::isnan(p) || p < 1.0) {
            throw std::domain_error("loss order p must be >= 1");
        }
        infinite_ = std::isinf(p);
        p_ = infinite_ ? 0.0 : p;
    }

    static LossOrder infinity() { return LossOrder(std::numeric_limits<double>::infinity()); }

    /// Accepts "1", "2.5", "inf", "infinity".
    static LossOrder parse(std::string_view text) {
        if (text == "inf" || text == "infinity" || text == "Inf" || text == "INF") {
            return infinity();
        }
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(std::string(text), &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("cannot parse loss order '" + std::string(text) + "'");
        }
        if (used != text.size()) {
            throw std::invalid_argument("cannot parse loss order '" + std::string(text) + "'");
        }
        return LossOrder(value);
    }

    bool is_infinite() const { return infinite_; }

    /// Finite exponent; +inf when infinite.
    double value() const { return infinite_ ? std::numeric_limits<double>::infinity() : p_; }

    /// 1/p, exactly 0 for p = inf.
    double reciprocal() const { return infinite_ ? 0.0 : 1.0 / p_; }

    std::string to_string() const {
        if (infinite_) return "inf";
        std::string s = std::to_string(p_);
        s.erase(s.find_last_not_of('0') + 1);
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    }

    friend bool operator==(const LossOrder& a, const LossOrder& b) {
        return a.infinite_ == b.infinite_ && a.p_ == b.p_;
    }

private:
    double p_ = 1.0;
    bool infinite_ = false;
};

}  // namespace rdbound
