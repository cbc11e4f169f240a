#include "replikit/optest.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <stdexcept>
#include <string>

#include "replikit/oracle.hpp"
#include "replikit/primitives.hpp"

namespace replikit {

double estimate_opt_additive(const DistributionSource& source, int k, const NormSpec& spec,
                             double beta, double eps, double rho, double delta,
                             RngStream& data_rng, const SharedRandomness& internal,
                             const OptBudget& budget, std::size_t* samples_out) {
    if (!(eps > 0.0 && rho > 0.0 && delta > 0.0 && delta < rho / 3.0))
        throw std::invalid_argument("estimate_opt_additive: need 0 < delta < rho/3");

    std::size_t n_trials = static_cast<std::size_t>(std::ceil(std::log(2.0 / delta) / (2.0 * eps * eps)));
    n_trials = std::clamp<std::size_t>(n_trials, 1, budget.trial_cap);

    double n_theory = static_cast<double>(k) * k * spec.d * spec.d / std::pow(eps, 4) *
                      std::log(std::max(2.0, static_cast<double>(spec.p)) / delta);
    auto per_trial = static_cast<std::size_t>(std::ceil(budget.budget_scale * n_theory));
    per_trial = std::clamp<std::size_t>(per_trial, 64, budget.per_trial_sample_cap);

    RngStream oracle_rng = internal.child("opt-oracle").stream();
    double sum = 0.0;
    for (std::size_t trial = 0; trial < n_trials; ++trial) {
        PointSet sample = source.sample(per_trial, data_rng);
        double best = std::numeric_limits<double>::infinity();
        for (int r = 0; r < std::max(1, budget.restarts); ++r) {
            LloydResult sol = weighted_kpp_lloyd(sample, k, spec, oracle_rng, budget.lloyd_iters);
            best = std::min(best, sol.cost);
        }
        sum += best / beta;  // normalize into [OPT_hat/beta, OPT_hat]
    }
    if (samples_out != nullptr) *samples_out = n_trials * per_trial;

    double avg = std::max(0.0, sum / static_cast<double>(n_trials));
    RoundingParams rp{eps, rho, delta};
    RngStream round_rng = internal.child("opt-round").stream();
    return r_round({avg}, rp, round_rng)[0];
}

OptEstimate estimate_opt_relative(const DistributionSource& source, int k, const NormSpec& spec,
                                  double beta, double eps, double rho, double delta,
                                  RngStream& data_rng, const SharedRandomness& internal,
                                  const OptBudget& budget) {
    OptEstimate est;
    est.beta = beta;
    est.eps = eps;
    for (int i = 1; i <= budget.max_iterations; ++i) {
        double eps_i = std::pow(2.0, -i);
        double rho_i = rho * std::pow(2.0, -i);
        double delta_i = delta * std::pow(2.0, -i);
        std::size_t used = 0;
        double lambda = estimate_opt_additive(source, k, spec, beta, eps_i, rho_i, delta_i,
                                              data_rng, internal.child("opt-iter-" + std::to_string(i)),
                                              budget, &used);
        est.samples_used += used;
        est.iterations = i;
        if (eps_i <= eps * lambda / 2.0) {
            est.Lambda = std::min(lambda, 1.0);
            return est;
        }
    }
    throw std::runtime_error("estimate_opt_relative: OPT indistinguishable from 0 at this budget");
}

}  // namespace replikit
