#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rdbound/family_categorical.hpp"
#include "rdbound/family_gaussian.hpp"
#include "rdbound/family_multinomial.hpp"
#include "rdbound/family_zero_error.hpp"
#include "rdbound/knn_entropy.hpp"
#include "rdbound/loss_order.hpp"
#include "rdbound/monte_carlo.hpp"

namespace rdbound::cli {

inline constexpr std::string_view tool_version = "0.1.0";

/// Bad flags or parameter combinations; maps to exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Family { categorical, multinomial, gaussian, zero_error };
enum class OutputFormat { csv, json };

inline Family parse_family(std::string_view name) {
    if (name == "categorical") return Family::categorical;
    if (name == "multinomial") return Family::multinomial;
    if (name == "gaussian") return Family::gaussian;
    if (name == "zero-error" || name == "zero_error") return Family::zero_error;
    throw UsageError("unknown family '" + std::string(name) + "'");
}

inline std::string to_string(Family f) {
    switch (f) {
        case Family::categorical: return "categorical";
        case Family::multinomial: return "multinomial";
        case Family::gaussian: return "gaussian";
        case Family::zero_error: return "zero-error";
    }
    return "?";
}

struct RunConfig {
    Family family = Family::categorical;
    std::vector<double> gamma;
    int d = 0;  // 0 = not given
    int k = 1;
    double sigma2 = 1.0;
    LossOrder p{1.0};
    std::vector<std::uint64_t> n_grid;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    std::uint32_t chunks = 64;
    unsigned threads = 1;
    std::uint64_t test_points = 1000;
    OutputFormat output = OutputFormat::csv;
    std::string path;             // empty writes to stdout
    double inflate_bound = 1.0;   // negative-control hook for compare
};

inline constexpr std::uint64_t min_cli_trials = 100;

struct RiskRow {
    std::uint64_t n = 0;
    std::optional<double> rd_lower_risk;
    std::optional<double> printed_bound;
    std::optional<double> simulated_mean;
    std::optional<double> simulated_stderr;
    std::optional<double> mi;
    std::optional<double> reference_lower;
    std::optional<double> reference_upper;
};

struct RiskCurve {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<RiskRow> rows;
    std::vector<std::string> violations;  // filled by cmd_compare

    void meta(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }
};

// --- parsing -------------------------------------------------------------

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_real(std::string_view text, std::string_view what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw UsageError("cannot parse " + std::string(what) + " '" + std::string(text) + "'");
    }
    return v;
}

/// Nonnegative integer count; scientific notation such as "1e6" is accepted.
inline std::uint64_t parse_count(std::string_view text, std::string_view what) {
    const double v = parse_real(text, what);
    if (!(v >= 0.0) || v > 9007199254740992.0 || std::floor(v) != v) {
        throw UsageError(std::string(what) + " must be a nonnegative integer, got '" + std::string(text) + "'");
    }
    return static_cast<std::uint64_t>(v);
}

inline std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = text.find(sep, start);
        out.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::vector<double> parse_gamma(std::string_view text) {
    std::vector<double> out;
    for (std::string_view part : split(text, ',')) out.push_back(parse_real(part, "gamma entry"));
    return out;
}

/// "10,100,1000", "100", or "start:stop:count" with an optional "log"
/// suffix on the count for geometric spacing. Generated grids drop
/// duplicates left by rounding; explicit lists must already be increasing.
inline std::vector<std::uint64_t> parse_n_grid(std::string_view text) {
    std::vector<std::uint64_t> grid;
    if (text.find(':') != std::string_view::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) throw UsageError("n-grid range must look like start:stop:count[log]");
        std::string_view count_text = parts[2];
        const bool geometric = count_text.ends_with("log");
        if (geometric) count_text.remove_suffix(3);
        const std::uint64_t start = parse_count(parts[0], "n-grid start");
        const std::uint64_t stop = parse_count(parts[1], "n-grid stop");
        const std::uint64_t count = parse_count(count_text, "n-grid count");
        if (start < 1 || stop < start || count < 1) throw UsageError("n-grid range needs 1 <= start <= stop, count >= 1");
        for (std::uint64_t i = 0; i < count; ++i) {
            const double frac = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
            const double v = geometric ? static_cast<double>(start) * std::pow(static_cast<double>(stop) / start, frac)
                                       : static_cast<double>(start) + frac * static_cast<double>(stop - start);
            const auto n = static_cast<std::uint64_t>(std::llround(v));
            if (grid.empty() || n > grid.back()) grid.push_back(n);
        }
        return grid;
    }
    for (std::string_view part : split(text, ',')) {
        const std::uint64_t n = parse_count(part, "n-grid entry");
        if (n < 1) throw UsageError("n-grid entries must be positive");
        if (!grid.empty() && n <= grid.back()) throw UsageError("n-grid entries must be strictly increasing");
        grid.push_back(n);
    }
    return grid;
}

// --- family construction -------------------------------------------------

inline DirichletPrior require_prior(const RunConfig& cfg) {
    if (cfg.gamma.empty()) throw UsageError("--gamma is required for the " + to_string(cfg.family) + " family");
    return DirichletPrior(cfg.gamma);
}

inline multinomial::MultinomialFamily require_multinomial(const RunConfig& cfg) {
    if (cfg.d < 2) throw UsageError("--d >= 2 is required for the multinomial family");
    if (cfg.k < 1) throw UsageError("--k must be >= 1");
    DirichletPrior prior = require_prior(cfg);
    if (prior.size() != cfg.d) throw UsageError("--gamma must have exactly d entries");
    return {cfg.d, cfg.k, std::move(prior)};
}

inline gaussian::GaussianFamily require_gaussian(const RunConfig& cfg) {
    if (cfg.d < 1) throw UsageError("--d >= 1 is required for the gaussian family");
    return {cfg.d, cfg.sigma2};
}

inline void require_grid(const RunConfig& cfg) {
    if (cfg.n_grid.empty()) throw UsageError("--n-grid (or --n) is required");
}

inline std::string join_gamma(const std::vector<double>& gamma) {
    std::string out;
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        if (i) out += ",";
        out += format_double(gamma[i]);
    }
    return out;
}

inline bool is_l1(LossOrder p) { return !p.is_infinite() && p.value() == 1.0; }

inline std::optional<double> symmetric_kappa(const DirichletPrior& prior) {
    for (double g : prior.gamma()) {
        if (g != prior[0]) return std::nullopt;
    }
    return prior[0];
}

inline void base_metadata(RiskCurve& curve, std::string_view command, const RunConfig& cfg) {
    curve.meta("tool", "rdbound");
    curve.meta("version", std::string(tool_version));
    curve.meta("command", std::string(command));
    curve.meta("family", to_string(cfg.family));
    switch (cfg.family) {
        case Family::categorical: curve.meta("gamma", join_gamma(cfg.gamma)); break;
        case Family::multinomial:
            curve.meta("d", std::to_string(cfg.d));
            curve.meta("k", std::to_string(cfg.k));
            curve.meta("gamma", join_gamma(cfg.gamma));
            break;
        case Family::gaussian:
            curve.meta("d", std::to_string(cfg.d));
            curve.meta("sigma2", format_double(cfg.sigma2));
            break;
        case Family::zero_error: break;
    }
    curve.meta("p", cfg.p.to_string());
    curve.meta("seed", std::to_string(cfg.seed));
    curve.meta("trials", std::to_string(cfg.trials));
}

// --- commands ------------------------------------------------------------

/// Simulation-free columns: bound variants, MI and reference curves.
inline RiskCurve cmd_bounds(const RunConfig& cfg, std::string_view command = "bounds") {
    require_grid(cfg);
    RiskCurve curve;
    base_metadata(curve, command, cfg);
    switch (cfg.family) {
        case Family::categorical: {
            const DirichletPrior prior = require_prior(cfg);
            const auto kappa = symmetric_kappa(prior);
            const bool kamath = is_l1(cfg.p) && kappa && *kappa >= 1.0;
            curve.meta("mi_method", "clarke_barron (asymptotic, o(1) term dropped)");
            curve.meta("rd_lower_risk", "pipeline: rate lower bound inverted at the asymptotic MI");
            curve.meta("printed_bound", "closed form as typeset, -psi(gamma0) in the exponent (p in {1,2,inf})");
            curve.meta("reference", kamath ? "Kamath minimax L1 bounds at kappa = gamma_i" : "none");
            curve.meta("posterior_entropy", format_double(categorical::posterior_entropy(prior)));
            curve.meta("minimax_l1_constant", format_double(categorical::minimax_limit_l1(1, prior.size())));
            for (std::uint64_t n : cfg.n_grid) {
                RiskRow row;
                row.n = n;
                row.rd_lower_risk = categorical::bayes_risk_lower(n, prior, cfg.p);
                row.printed_bound = categorical::bayes_risk_lower_printed(n, prior, cfg.p);
                row.mi = categorical::mutual_information(n, prior);
                if (kamath) {
                    const auto kb = categorical::kamath_bounds(n, prior.size(), *kappa);
                    row.reference_lower = kb.lower;
                    row.reference_upper = kb.upper;
                }
                curve.rows.push_back(row);
            }
            break;
        }
        case Family::multinomial: {
            const auto fam = require_multinomial(cfg);
            curve.meta("mi_method", "clarke_barron (asymptotic, o(1) term dropped)");
            curve.meta("rd_lower_risk", "pipeline: worst-case-over-inputs bound at the asymptotic MI");
            curve.meta("printed_bound", "typeset L1 closed form, best-effort reading (p = 1 only)");
            curve.meta("entropy_lower", format_double(multinomial::entropy_lower(fam)));
            curve.meta("entropy_lower_printed", format_double(multinomial::entropy_lower_printed(fam)));
            for (std::uint64_t n : cfg.n_grid) {
                RiskRow row;
                row.n = n;
                row.rd_lower_risk = multinomial::xbayes_risk_lower(n, fam, cfg.p);
                if (is_l1(cfg.p)) row.printed_bound = multinomial::xbayes_risk_lower_printed_l1(n, fam);
                row.mi = multinomial::mutual_information(n, fam);
                curve.rows.push_back(row);
            }
            break;
        }
        case Family::gaussian: {
            const auto fam = require_gaussian(cfg);
            const auto nu = gaussian::entropy_lower_nu(fam.d, fam.sigma2);
            curve.meta("mi_method", "exact");
            curve.meta("rd_lower_risk", "pipeline: rate lower bound inverted at the exact MI");
            curve.meta("printed_bound", "sqrt(s2 d / (s2 d + n)) exp(nu - 1) (p = 1 only); pipeline is half of it");
            curve.meta("nu_total", format_double(nu.total));
            curve.meta("nu", format_double(nu.nu));
            for (std::uint64_t n : cfg.n_grid) {
                RiskRow row;
                row.n = n;
                const double mi = gaussian::mutual_information_exact(n, fam.d, fam.sigma2);
                row.rd_lower_risk = risk_lower_from_mi(mi, nu.total, fam.spec(), cfg.p);
                if (is_l1(cfg.p)) row.printed_bound = gaussian::bayes_risk_lower_l1(n, fam.d, fam.sigma2).printed;
                row.mi = mi;
                curve.rows.push_back(row);
            }
            break;
        }
        case Family::zero_error: {
            if (!is_l1(cfg.p)) throw UsageError("the zero-error family is analysed for --p 1 only");
            curve.meta("mi_method", "exact (H_{n+1} - 1)");
            curve.meta("risk_scale", "e_abs = E|theta - theta_hat|; the L1 risk is twice this");
            curve.meta("rd_lower_risk", "typeset rate bound inverted at the exact MI, halved to the e_abs scale");
            curve.meta("printed_bound", "L1 bound e^{-gamma} / (2 (n+1)), halved to the e_abs scale");
            curve.meta("rd_lower_rederived_offset", "(1/p) ln 2 added to the typeset rate bound");
            curve.meta("reference_upper", "stated midpoint-estimator risk 1 / (4 (n+1))");
            for (std::uint64_t n : cfg.n_grid) {
                RiskRow row;
                row.n = n;
                row.rd_lower_risk = 0.5 * zero_error::risk_lower(n, cfg.p);
                row.printed_bound = 0.5 * std::exp(-euler_gamma) / (2.0 * (static_cast<double>(n) + 1.0));
                row.mi = zero_error::mutual_information_exact(n);
                row.reference_upper = zero_error::estimator_risk_exact(n).e_abs;
                curve.rows.push_back(row);
            }
            break;
        }
    }
    return curve;
}

inline McOptions mc_options(const RunConfig& cfg) { return {cfg.trials, cfg.seed, cfg.chunks, cfg.threads}; }

/// Simulated risk per grid point; every row reuses the same seed, so
/// neighbouring n share random numbers.
inline MonteCarloEstimate simulate_point(const RunConfig& cfg, std::uint64_t n) {
    const McOptions opt = mc_options(cfg);
    switch (cfg.family) {
        case Family::categorical: return categorical::simulate_bayes_risk(n, require_prior(cfg), cfg.p, opt);
        case Family::multinomial:
            return multinomial::simulate_interpolation_risk(n, require_multinomial(cfg), opt, cfg.p);
        case Family::gaussian:
            if (!is_l1(cfg.p)) throw UsageError("the gaussian simulator evaluates the L1 risk only (--p 1)");
            return gaussian::simulate_bayes_risk(n, require_gaussian(cfg), cfg.test_points, opt);
        case Family::zero_error:
            if (!is_l1(cfg.p)) throw UsageError("the zero-error family is analysed for --p 1 only");
            return zero_error::simulate_estimator_risk(n, opt);
    }
    throw UsageError("unknown family");
}

inline void simulation_metadata(RiskCurve& curve, const RunConfig& cfg) {
    curve.meta("chunks", std::to_string(cfg.chunks));
    switch (cfg.family) {
        case Family::categorical: curve.meta("simulated", "posterior-mean estimator, (E sum_y |dW|^p)^{1/p}"); break;
        case Family::multinomial:
            curve.meta("simulated", "plug-in estimator, max over the interpolation set (one-sided for the sup)");
            break;
        case Family::gaussian:
            curve.meta("simulated", "conjugate plug-in, L1 over fresh test draws");
            curve.meta("test_points", std::to_string(cfg.test_points));
            break;
        case Family::zero_error: curve.meta("simulated", "midpoint estimator, E|theta - theta_hat|"); break;
    }
}

inline void require_trials(const RunConfig& cfg) {
    if (cfg.trials < min_cli_trials) throw UsageError("--trials must be at least 100 for simulations");
}

inline RiskCurve cmd_simulate(const RunConfig& cfg) {
    require_grid(cfg);
    require_trials(cfg);
    RiskCurve curve;
    base_metadata(curve, "simulate", cfg);
    simulation_metadata(curve, cfg);
    for (std::uint64_t n : cfg.n_grid) {
        const MonteCarloEstimate est = simulate_point(cfg, n);
        RiskRow row;
        row.n = n;
        row.simulated_mean = est.mean;
        row.simulated_stderr = est.std_error;
        curve.rows.push_back(row);
    }
    return curve;
}

/// Column the simulation is checked against.
inline std::optional<double> comparison_bound(const RunConfig& cfg, const RiskRow& row) {
    return cfg.family == Family::gaussian ? row.printed_bound : row.rd_lower_risk;
}

/// Joins bounds and simulation; a violation is simulated + 3 stderr < bound.
inline RiskCurve cmd_compare(const RunConfig& cfg) {
    require_trials(cfg);
    RiskCurve curve = cmd_bounds(cfg, "compare");
    simulation_metadata(curve, cfg);
    curve.meta("compare_bound", cfg.family == Family::gaussian ? "printed_bound" : "rd_lower_risk");
    if (cfg.inflate_bound != 1.0) curve.meta("inflate_bound", format_double(cfg.inflate_bound));
    for (RiskRow& row : curve.rows) {
        const MonteCarloEstimate est = simulate_point(cfg, row.n);
        row.simulated_mean = est.mean;
        row.simulated_stderr = est.std_error;
        const auto bound = comparison_bound(cfg, row);
        if (!bound) continue;
        const double target = *bound * cfg.inflate_bound;
        if (est.mean + 3.0 * est.std_error < target) {
            curve.violations.push_back("n=" + std::to_string(row.n) + ": simulated " + format_double(est.mean) +
                                       " + 3*" + format_double(est.std_error) + " < bound " + format_double(target));
        }
    }
    curve.meta("violations", std::to_string(curve.violations.size()));
    return curve;
}

// --- scalar reports ------------------------------------------------------

using Json = nlohmann::ordered_json;

inline std::string normalise_method(std::string_view m) {
    if (m == "exact") return "exact";
    if (m == "clarke_barron" || m == "clarke-barron" || m == "cb") return "clarke_barron";
    if (m == "monte_carlo" || m == "monte-carlo" || m == "mc") return "monte_carlo";
    throw UsageError("unknown MI method '" + std::string(m) + "'");
}

inline Json scalar_metadata(std::string_view command, const RunConfig& cfg) {
    RiskCurve tmp;
    base_metadata(tmp, command, cfg);
    Json meta = Json::object();
    for (const auto& [k, v] : tmp.metadata) meta[k] = v;
    return meta;
}

/// Mutual information at a single n by the requested method.
inline Json cmd_mi(const RunConfig& cfg, std::string_view method_name) {
    require_grid(cfg);
    if (cfg.n_grid.size() != 1) throw UsageError("mi takes a single --n");
    const std::uint64_t n = cfg.n_grid.front();
    const std::string method = normalise_method(method_name);
    Json out;
    out["metadata"] = scalar_metadata("mi", cfg);
    auto unsupported = [&] {
        return UsageError("method " + method + " is not available for the " + to_string(cfg.family) + " family");
    };
    switch (cfg.family) {
        case Family::categorical:
            if (method != "clarke_barron") throw unsupported();
            out["value"] = categorical::mutual_information(n, require_prior(cfg));
            break;
        case Family::multinomial:
            if (method != "clarke_barron") throw unsupported();
            out["value"] = multinomial::mutual_information(n, require_multinomial(cfg));
            break;
        case Family::gaussian: {
            const auto fam = require_gaussian(cfg);
            if (method == "exact") {
                out["value"] = gaussian::mutual_information_exact(n, fam.d, fam.sigma2);
            } else if (method == "clarke_barron") {
                out["value"] = gaussian::mutual_information_cb(n, fam.d, fam.sigma2);
            } else {
                throw unsupported();
            }
            break;
        }
        case Family::zero_error:
            if (method == "exact") {
                out["value"] = zero_error::mutual_information_exact(n);
            } else if (method == "monte_carlo") {
                const auto mc = zero_error::mi_monte_carlo(n, mc_options(cfg));
                out["value"] = mc.estimate.mean;
                out["stderr"] = mc.estimate.std_error;
                out["resampled"] = mc.resampled;
            } else {
                throw unsupported();
            }
            break;
    }
    out["method"] = method;
    return out;
}

/// Reads one sample per line, comma-separated columns, optional header row.
inline SampleMatrix read_sample_csv(std::istream& in, bool header) {
    std::vector<double> values;
    std::size_t cols = 0, rows = 0;
    std::string line;
    bool skip = header;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (skip) {
            skip = false;
            continue;
        }
        const auto parts = split(line, ',');
        if (cols == 0) cols = parts.size();
        if (parts.size() != cols) {
            throw UsageError("row " + std::to_string(rows + 1) + " has " + std::to_string(parts.size()) +
                             " columns, expected " + std::to_string(cols));
        }
        for (std::string_view part : parts) {
            while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
            while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
            values.push_back(parse_real(part, "sample value"));
        }
        ++rows;
    }
    if (rows == 0) throw UsageError("no samples in input");
    return SampleMatrix(rows, cols, std::move(values));
}

inline Json cmd_entropy(const SampleMatrix& samples, int k) {
    const EntropyEstimate est = knn_entropy(samples, k);
    Json out;
    Json meta = Json::object();
    meta["tool"] = "rdbound";
    meta["version"] = std::string(tool_version);
    meta["command"] = "entropy";
    meta["estimator"] = "Kozachenko-Leonenko, max-norm, eps = 2 x k-th neighbour distance, unit-ball volume 1";
    meta["k"] = k;
    meta["samples"] = samples.rows();
    meta["dimension"] = samples.cols();
    meta["jittered"] = est.jittered;
    out["metadata"] = meta;
    out["value"] = est.value;
    out["method"] = "knn";
    out["stderr"] = est.std_error;
    return out;
}

// --- writers -------------------------------------------------------------

inline constexpr std::string_view csv_header =
    "n,rd_lower_risk,printed_bound,simulated_mean,simulated_stderr,mi,reference_lower,reference_upper";

inline void write_csv(const RiskCurve& curve, std::ostream& out) {
    for (const auto& [k, v] : curve.metadata) out << "# " << k << ": " << v << '\n';
    out << csv_header << '\n';
    auto cell = [&](const std::optional<double>& v) {
        out << ',';
        if (v) out << format_double(*v);
    };
    for (const RiskRow& r : curve.rows) {
        out << r.n;
        cell(r.rd_lower_risk);
        cell(r.printed_bound);
        cell(r.simulated_mean);
        cell(r.simulated_stderr);
        cell(r.mi);
        cell(r.reference_lower);
        cell(r.reference_upper);
        out << '\n';
    }
}

inline Json to_json(const RiskCurve& curve) {
    Json meta = Json::object();
    for (const auto& [k, v] : curve.metadata) meta[k] = v;
    Json rows = Json::array();
    auto put = [](Json& obj, const char* key, const std::optional<double>& v) {
        obj[key] = v ? Json(*v) : Json(nullptr);
    };
    for (const RiskRow& r : curve.rows) {
        Json row;
        row["n"] = r.n;
        put(row, "rd_lower_risk", r.rd_lower_risk);
        put(row, "printed_bound", r.printed_bound);
        put(row, "simulated_mean", r.simulated_mean);
        put(row, "simulated_stderr", r.simulated_stderr);
        put(row, "mi", r.mi);
        put(row, "reference_lower", r.reference_lower);
        put(row, "reference_upper", r.reference_upper);
        rows.push_back(std::move(row));
    }
    Json out;
    out["metadata"] = std::move(meta);
    out["rows"] = std::move(rows);
    return out;
}

inline void write_curve(const RiskCurve& curve, OutputFormat format, std::ostream& out) {
    if (format == OutputFormat::csv) {
        write_csv(curve, out);
    } else {
        out << to_json(curve).dump(2) << '\n';
    }
}

}  // namespace rdbound::cli
