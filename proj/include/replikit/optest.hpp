#pragma once

#include <cstddef>

#include "replikit/norms.hpp"
#include "replikit/rng.hpp"
#include "replikit/sources.hpp"

namespace replikit {

struct OptBudget {
    // theoretical sample formula N = k^2 d^2 / eps^4 * log(p/delta), scaled
    double budget_scale = 1e-4;
    // desk-scale caps
    std::size_t trial_cap = 100;
    std::size_t per_trial_sample_cap = 4096;
    int max_iterations = 40;  // relative-error halving loop
    int lloyd_iters = 32;
    // best-of-restarts per trial; damps the local-optimum variance of the
    // oracle so the trial average stays inside the rounding interval
    int restarts = 4;
};

struct OptEstimate {
    double Lambda = 0.0;
    double eps = 0.0;   // relative error achieved
    double beta = 1.0;  // oracle ratio assumed
    int iterations = 0;
    std::size_t samples_used = 0;
};

// Additive estimator: averages the (cost/beta) of repeated oracle runs on
// fresh samples, clamps at 0, and applies one-coordinate replicable rounding.
double estimate_opt_additive(const DistributionSource& source, int k, const NormSpec& spec,
                             double beta, double eps, double rho, double delta,
                             RngStream& data_rng, const SharedRandomness& internal,
                             const OptBudget& budget, std::size_t* samples_out = nullptr);

// Halving loop: eps_i = 2^-i, rho_i = 2^-i rho, delta_i = 2^-i delta until
// eps_i <= eps * Lambda_i / 2. Throws if the cap is reached (OPT
// indistinguishable from 0 at this budget).
OptEstimate estimate_opt_relative(const DistributionSource& source, int k, const NormSpec& spec,
                                  double beta, double eps, double rho, double delta,
                                  RngStream& data_rng, const SharedRandomness& internal,
                                  const OptBudget& budget = {});

}  // namespace replikit
