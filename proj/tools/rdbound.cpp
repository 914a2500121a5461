#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "rdbound/report.hpp"

namespace {

using namespace rdbound;
using namespace rdbound::cli;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_violation = 2;

// Raw flag text; converted into a RunConfig after CLI11 has parsed.
struct Flags {
    std::string family;
    std::string gamma;
    int d = 0;
    int k = 1;
    double sigma2 = 1.0;
    std::string p = "1";
    std::string n_grid;
    std::string trials = "10000";
    std::uint64_t seed = 1;
    std::uint32_t chunks = 64;
    unsigned threads = 1;
    std::string test_points = "1000";
    std::string output = "csv";
    std::string out;
    double inflate_bound = 1.0;
    std::string method = "exact";
    std::string input;
    bool header = false;
    int knn_k = default_knn_k;
};

void add_family_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--family", f.family, "categorical | multinomial | gaussian | zero-error")->required();
    cmd->add_option("--gamma", f.gamma, "Dirichlet concentrations, comma separated");
    cmd->add_option("--d", f.d, "dimension (gaussian) or category count (multinomial)");
    cmd->add_option("--k", f.k, "trials per multinomial observation");
    cmd->add_option("--sigma2", f.sigma2, "gaussian noise variance");
    cmd->add_option("--p", f.p, "loss order: a real >= 1 or inf");
}

void add_grid_flags(CLI::App* cmd, Flags& f) {
    auto* grid = cmd->add_option("--n-grid", f.n_grid, "n values: list, or start:stop:count[log]");
    cmd->add_option("--n", f.n_grid, "single sample size")->excludes(grid);
}

void add_output_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--output", f.output, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", f.out, "output file (default stdout)");
}

void add_simulation_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--trials", f.trials, "Monte-Carlo trials (accepts 1e6)");
    cmd->add_option("--seed", f.seed, "64-bit seed");
    cmd->add_option("--threads", f.threads, "worker threads; results do not depend on it")
        ->check(CLI::Range(1u, 1024u));
    cmd->add_option("--chunks", f.chunks, "fixed work blocks per simulation")->check(CLI::Range(1u, 1u << 20));
    cmd->add_option("--test-points", f.test_points, "gaussian test draws per trial");
}

RunConfig to_config(const Flags& f) {
    RunConfig cfg;
    cfg.family = parse_family(f.family);
    if (!f.gamma.empty()) cfg.gamma = parse_gamma(f.gamma);
    cfg.d = f.d;
    cfg.k = f.k;
    cfg.sigma2 = f.sigma2;
    try {
        cfg.p = LossOrder::parse(f.p);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    if (!f.n_grid.empty()) cfg.n_grid = parse_n_grid(f.n_grid);
    cfg.trials = parse_count(f.trials, "trials");
    cfg.seed = f.seed;
    cfg.chunks = f.chunks;
    cfg.threads = f.threads;
    cfg.test_points = parse_count(f.test_points, "test points");
    cfg.output = f.output == "json" ? OutputFormat::json : OutputFormat::csv;
    cfg.path = f.out;
    cfg.inflate_bound = f.inflate_bound;
    return cfg;
}

// Writes to --out when given, else stdout. Binary mode keeps LF endings.
template <typename Emit>
void emit(const std::string& path, Emit&& body) {
    if (path.empty()) {
        body(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    body(file);
    if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rate-distortion Bayes-risk bounds and Monte-Carlo checks"};
    app.set_version_flag("--version", std::string(tool_version));
    app.require_subcommand(1);

    Flags f;
    auto* bounds = app.add_subcommand("bounds", "evaluate bound columns over an n grid");
    auto* simulate = app.add_subcommand("simulate", "simulate the Bayes risk over an n grid");
    auto* compare = app.add_subcommand("compare", "bounds and simulation side by side; exit 2 on violations");
    auto* mi = app.add_subcommand("mi", "mutual information at one n");
    auto* entropy = app.add_subcommand("entropy", "k-NN entropy of samples read from CSV");

    for (auto* cmd : {bounds, simulate, compare, mi}) {
        add_family_flags(cmd, f);
        add_grid_flags(cmd, f);
    }
    for (auto* cmd : {bounds, simulate, compare}) add_output_flags(cmd, f);
    for (auto* cmd : {simulate, compare, mi}) add_simulation_flags(cmd, f);
    compare->add_option("--inflate-bound", f.inflate_bound, "multiply the compared bound (negative control)");
    mi->add_option("--method", f.method, "exact | clarke-barron | monte-carlo");
    mi->add_option("--out", f.out, "output file (default stdout)");
    entropy->add_option("--input", f.input, "CSV file, one sample per row")->required();
    entropy->add_option("--k", f.knn_k, "neighbour index")->check(CLI::PositiveNumber);
    entropy->add_flag("--header", f.header, "skip the first row");
    entropy->add_option("--out", f.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (entropy->parsed()) {
            std::ifstream in(f.input);
            if (!in) {
                std::cerr << "error: cannot read '" << f.input << "'\n";
                return exit_usage;
            }
            const auto report = cmd_entropy(read_sample_csv(in, f.header), f.knn_k);
            if (report["metadata"]["jittered"].get<std::size_t>() > 0) {
                std::cerr << "warning: " << report["metadata"]["jittered"].get<std::size_t>()
                          << " zero neighbour distances replaced by " << knn_zero_distance_jitter << '\n';
            }
            emit(f.out, [&](std::ostream& os) { os << report.dump(2) << '\n'; });
            return exit_ok;
        }

        const RunConfig cfg = to_config(f);
        if (mi->parsed()) {
            const auto report = cmd_mi(cfg, f.method);
            if (report.contains("resampled") && report["resampled"].get<std::uint64_t>() > 0) {
                std::cerr << "warning: " << report["resampled"].get<std::uint64_t>()
                          << " zero-width intervals were redrawn\n";
            }
            emit(f.out, [&](std::ostream& os) { os << report.dump(2) << '\n'; });
            return exit_ok;
        }

        RiskCurve curve;
        if (bounds->parsed()) {
            curve = cmd_bounds(cfg);
        } else if (simulate->parsed()) {
            curve = cmd_simulate(cfg);
        } else {
            curve = cmd_compare(cfg);
        }
        emit(cfg.path, [&](std::ostream& os) { write_curve(curve, cfg.output, os); });
        if (!curve.violations.empty()) {
            for (const auto& v : curve.violations) std::cerr << "violation: " << v << '\n';
            std::cerr << curve.violations.size() << " violation(s)\n";
            return exit_violation;
        }
        return exit_ok;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return exit_usage;
}
