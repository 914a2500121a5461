// Categorical learning curve: the rate-distortion lower bound next to the
// simulated risk of the posterior-mean estimator and the minimax constant.
#include <cstdio>

#include "rdbound/rdbound.hpp"

int main() {
    using namespace rdbound;
    const DirichletPrior prior({1.0, 1.0, 1.0});
    const LossOrder l1(1.0);

    std::printf("%8s %12s %12s %12s %12s\n", "n", "lower", "simulated", "stderr", "minimax");
    for (std::uint64_t n : {10u, 100u, 1000u, 10000u}) {
        const McOptions opt{.trials = 20000, .seed = 7};
        const MonteCarloEstimate sim = categorical::simulate_bayes_risk(n, prior, l1, opt);
        std::printf("%8llu %12.6f %12.6f %12.6f %12.6f\n", static_cast<unsigned long long>(n),
                    categorical::bayes_risk_lower(n, prior, l1), sim.mean, sim.std_error,
                    categorical::minimax_limit_l1(n, prior.size()));
    }
}
