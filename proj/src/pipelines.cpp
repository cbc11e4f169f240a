#include "replikit/pipelines.hpp"

#include <cmath>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "replikit/grid.hpp"
#include "replikit/oracle.hpp"
#include "replikit/primitives.hpp"

namespace replikit {

std::string PipelineResult::serialize() const {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["k"] = k;
    j["p"] = p;
    j["eps"] = eps;
    j["rho"] = rho;
    j["delta"] = delta;
    j["seed"] = master_seed;
    j["Lambda"] = Lambda;
    j["coreset"] = nlohmann::ordered_json{{"reps", coreset.reps}, {"weights", coreset.weights}};
    j["centers"] = centers;
    return j.dump();
}

EvalResult evaluate(const std::vector<Point>& centers, const NormSpec& spec,
                    const DistributionSource& source, std::size_t n_eval, RngStream& data_rng) {
    if (centers.empty()) throw std::invalid_argument("evaluate: no centers");
    if (n_eval == 0) throw std::invalid_argument("evaluate: n_eval must be positive");
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n_eval; ++i) {
        Point x = source.draw(data_rng);
        double best = norm_distance(x, centers[0], spec);
        for (std::size_t f = 1; f < centers.size(); ++f)
            best = std::min(best, norm_distance(x, centers[f], spec));
        double c = spec.kcenters_mode() ? best : std::pow(best, spec.p);
        sum += c;
        sum_sq += c * c;
    }
    double n = static_cast<double>(n_eval);
    double mean = sum / n;
    double var = std::max(0.0, sum_sq / n - mean * mean);
    EvalResult r;
    r.cost = mean;
    r.halfwidth = 1.96 * std::sqrt(var / n);
    return r;
}

namespace {

PipelineResult kp_pipeline(const DistributionSource& source, int k, int p, double eps, double rho,
                           double delta, RngStream& data_rng, const SharedRandomness& internal,
                           const PipelineBudget& budget) {
    if (p != 1 && p != 2) throw std::invalid_argument("pipeline: p must be 1 or 2");
    if (k < 1) throw std::invalid_argument("pipeline: k must be positive");
    const int d = source.dim();
    NormSpec spec{NormFamily::L2, p, d};

    OptEstimate opt = estimate_opt_relative(source, k, spec, 1.0, eps, rho / 3.0, delta / 3.0,
                                            data_rng, internal.child("opt"), budget.opt);

    CoresetParams cp;
    cp.eps = eps / 2.0;
    cp.p = p;
    cp.k = k;
    cp.rho = rho / 3.0;
    cp.delta = delta / 3.0;
    cp.Lambda = opt.Lambda;
    cp.rho_mass = rho / 3.0;
    cp.delta_mass = delta / 3.0;
    cp.budget_scale = budget.coreset_budget_scale;
    cp.level_sample_cap = budget.coreset_sample_cap;
    cp.mass_eps_floor = budget.mass_eps_floor;
    cp.v_floor = budget.v_floor;
    WeightedCoreset cs = build_coreset(source, cp, spec, data_rng, internal.child("coreset"));

    RngStream oracle_rng = internal.child("oracle").stream();
    LloydResult sol = weighted_kpp_lloyd(coreset_point_set(cs), k, spec, oracle_rng, budget.lloyd_iters);

    PipelineResult res;
    res.centers = std::move(sol.centers);
    res.Lambda = opt.Lambda;
    res.coreset = std::move(cs);
    res.k = k;
    res.p = p;
    res.eps = eps;
    res.rho = rho;
    res.delta = delta;
    res.master_seed = internal.master_seed();
    EvalResult ev = evaluate(res.centers, spec, source, budget.eval_samples, data_rng);
    res.eval_cost = ev.cost;
    res.eval_halfwidth = ev.halfwidth;
    return res;
}

}  // namespace

PipelineResult r_kmedians(const DistributionSource& source, int k, double eps, double rho,
                          double delta, RngStream& data_rng, const SharedRandomness& internal,
                          const PipelineBudget& budget) {
    return kp_pipeline(source, k, 1, eps, rho, delta, data_rng, internal, budget);
}

PipelineResult r_kmeans(const DistributionSource& source, int k, double eps, double rho,
                        double delta, RngStream& data_rng, const SharedRandomness& internal,
                        const PipelineBudget& budget) {
    return kp_pipeline(source, k, 2, eps, rho, delta, data_rng, internal, budget);
}

std::vector<Point> r_kmeans_cover(const DistributionSource& source, int k, int p, double eps,
                                  double rho, double delta, RngStream& data_rng,
                                  const SharedRandomness& internal, double sq_budget_scale,
                                  std::size_t candidate_cap) {
    if (p != 1 && p != 2) throw std::invalid_argument("r_kmeans_cover: p must be 1 or 2");
    const int d = source.dim();
    NormSpec spec{NormFamily::L2, p, d};
    const double Delta = spec.delta();

    // eps/3-cover of the ball: centers of a fixed grid of side 2 eps / (3 Delta)
    const double side = 2.0 * eps / (3.0 * Delta);
    const auto cells = static_cast<std::int64_t>(std::ceil(1.0 / side));
    std::vector<Point> cover;
    std::vector<std::int64_t> idx(d, 0);
    for (;;) {
        Point c(d);
        for (int j = 0; j < d; ++j) c[j] = -0.5 + (static_cast<double>(idx[j]) + 0.5) * side;
        double len = norm_length(c, spec);
        if (len <= 0.5 + side) cover.push_back(c);
        int j = d - 1;
        while (j >= 0 && ++idx[j] == cells) idx[j--] = 0;
        if (j < 0) break;
        if (cover.size() > candidate_cap)
            throw std::runtime_error("r_kmeans_cover: cover exceeds candidate cap");
    }
    if (cover.size() < static_cast<std::size_t>(k))
        throw std::runtime_error("r_kmeans_cover: cover smaller than k");

    // number of k-subsets, guarded against the cap
    double n_subsets = 1.0;
    for (int i = 0; i < k; ++i)
        n_subsets *= static_cast<double>(cover.size() - i) / static_cast<double>(i + 1);
    if (n_subsets > static_cast<double>(candidate_cap))
        throw std::runtime_error("r_kmeans_cover: too many candidate subsets");
    const double n_f = n_subsets;

    const double cost_scale = std::pow(Delta, p);  // statistic range is [0, Delta^p]
    SharedRandomness sq_root = internal.child("sq");

    std::vector<std::size_t> comb(k);
    for (int i = 0; i < k; ++i) comb[i] = static_cast<std::size_t>(i);
    std::vector<Point> best_centers;
    double best_score = 0.0;
    std::size_t subset_index = 0;
    for (;;) {
        std::vector<Point> centers;
        centers.reserve(k);
        for (int i = 0; i < k; ++i) centers.push_back(cover[comb[i]]);

        RngStream sq_rng = sq_root.child("subset-" + std::to_string(subset_index)).stream();
        auto stat = [&]() {
            Point x = source.draw(data_rng);
            double best = norm_distance(x, centers[0], spec);
            for (std::size_t f = 1; f < centers.size(); ++f)
                best = std::min(best, norm_distance(x, centers[f], spec));
            return std::min(1.0, std::pow(best, p) / cost_scale);
        };
        double score = r_sq(stat, eps / (3.0 * cost_scale), rho / n_f, delta / n_f, sq_rng,
                            sq_budget_scale);
        if (best_centers.empty() || score < best_score) {
            best_score = score;
            best_centers = std::move(centers);
        }
        ++subset_index;

        // next combination in lexicographic order
        int i = k - 1;
        while (i >= 0 && comb[i] == cover.size() - static_cast<std::size_t>(k - i)) --i;
        if (i < 0) break;
        ++comb[i];
        for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
    return best_centers;
}

PipelineResult vanilla_clustering(const DistributionSource& source, int k, int p,
                                  RngStream& data_rng, const SharedRandomness& internal,
                                  std::size_t n_samples, int lloyd_iters) {
    const int d = source.dim();
    NormSpec spec{NormFamily::L2, p, d};
    PointSet sample = source.sample(n_samples, data_rng);
    RngStream oracle_rng = internal.child("vanilla-oracle").stream();
    LloydResult sol = weighted_kpp_lloyd(sample, k, spec, oracle_rng, lloyd_iters);

    PipelineResult res;
    res.centers = std::move(sol.centers);
    res.k = k;
    res.p = p;
    res.master_seed = internal.master_seed();
    EvalResult ev = evaluate(res.centers, spec, source, 4096, data_rng);
    res.eval_cost = ev.cost;
    res.eval_halfwidth = ev.halfwidth;
    return res;
}

}  // namespace replikit
