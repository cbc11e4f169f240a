#pragma once

#include <string>
#include <vector>

#include "replikit/coreset.hpp"
#include "replikit/norms.hpp"
#include "replikit/optest.hpp"
#include "replikit/rng.hpp"
#include "replikit/sources.hpp"

namespace replikit {

struct PipelineBudget {
    // defaults tuned so the demo pipelines finish in around a second while
    // keeping paired-trial match rates above 1 - rho
    OptBudget opt{1e-4, 30, 1024, 40, 32};
    double coreset_budget_scale = 1.0;
    std::size_t coreset_sample_cap = 1u << 18;
    double mass_eps_floor = 0.05;
    double v_floor = 0.1;
    int lloyd_iters = 64;
    std::size_t eval_samples = 2048;
};

struct PipelineResult {
    std::vector<Point> centers;
    double Lambda = 0.0;
    WeightedCoreset coreset;
    double eval_cost = 0.0;
    double eval_halfwidth = 0.0;
    // parameter record
    int k = 0;
    int p = 0;
    double eps = 0, rho = 0, delta = 0;
    std::uint64_t master_seed = 0;

    // canonical form; byte equality across paired runs is the success
    // predicate (evaluation fields are excluded: they use the data stream)
    std::string serialize() const;
};

// OPT estimate (rho/3, delta/3) -> eps/2-coreset (rho/3, delta/3) -> mass
// estimation (rho/3, delta/3) -> weighted oracle on the coreset.
PipelineResult r_kmedians(const DistributionSource& source, int k, double eps, double rho,
                          double delta, RngStream& data_rng, const SharedRandomness& internal,
                          const PipelineBudget& budget = {});

PipelineResult r_kmeans(const DistributionSource& source, int k, double eps, double rho,
                        double delta, RngStream& data_rng, const SharedRandomness& internal,
                        const PipelineBudget& budget = {});

// Warm-up baseline: eps/3-cover of the ball, exhaustive search over
// k-subsets scored by the replicable SQ oracle. Additive eps guarantee;
// desk scale only.
std::vector<Point> r_kmeans_cover(const DistributionSource& source, int k, int p, double eps,
                                  double rho, double delta, RngStream& data_rng,
                                  const SharedRandomness& internal, double sq_budget_scale = 1.0,
                                  std::size_t candidate_cap = 200000);

struct EvalResult {
    double cost = 0.0;
    double halfwidth = 0.0;  // 95% CI half-width
};

// Monte-Carlo cost of fixed centers on fresh samples.
EvalResult evaluate(const std::vector<Point>& centers, const NormSpec& spec,
                    const DistributionSource& source, std::size_t n_eval, RngStream& data_rng);

// Non-replicable baseline: k-means++/Lloyd straight on a fresh sample.
PipelineResult vanilla_clustering(const DistributionSource& source, int k, int p,
                                  RngStream& data_rng, const SharedRandomness& internal,
                                  std::size_t n_samples = 2048, int lloyd_iters = 64);

}  // namespace replikit
