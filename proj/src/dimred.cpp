#include "replikit/dimred.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "replikit/grid.hpp"
#include "replikit/oracle.hpp"

namespace replikit {

int target_dim(int p, double eps, int k, double delta, double C) {
    if (p < 1 || eps <= 0.0 || k < 1 || delta <= 0.0)
        throw std::invalid_argument("target_dim: arguments must be positive");
    double m = C * std::pow(static_cast<double>(p), 4) / (eps * eps) *
               std::log(static_cast<double>(k) / (eps * delta));
    return std::max(1, static_cast<int>(std::ceil(m)));
}

Point JLMap::project(const Point& x) const {
    if (identity) return x;
    Point out(static_cast<std::size_t>(m), 0.0);
    for (int r = 0; r < m; ++r) {
        double acc = 0.0;
        const auto& row = matrix[static_cast<std::size_t>(r)];
        for (int c = 0; c < d; ++c) acc += row[static_cast<std::size_t>(c)] * x[static_cast<std::size_t>(c)];
        out[static_cast<std::size_t>(r)] = acc;
    }
    return out;
}

JLMap make_jl(int d, int m, RngStream& rng) {
    JLMap jl;
    jl.d = d;
    jl.m = m;
    if (m >= d) {
        jl.identity = true;
        jl.m = d;
        return jl;
    }
    // Gaussian m x d draw, modified Gram-Schmidt on the rows, scale sqrt(d/m)
    jl.matrix.assign(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(d)));
    for (auto& row : jl.matrix)
        for (double& v : row) v = rng.next_gaussian();
    for (int r = 0; r < m; ++r) {
        auto& row = jl.matrix[static_cast<std::size_t>(r)];
        for (int prev = 0; prev < r; ++prev) {
            const auto& q = jl.matrix[static_cast<std::size_t>(prev)];
            double dot = 0.0;
            for (int c = 0; c < d; ++c) dot += row[static_cast<std::size_t>(c)] * q[static_cast<std::size_t>(c)];
            for (int c = 0; c < d; ++c) row[static_cast<std::size_t>(c)] -= dot * q[static_cast<std::size_t>(c)];
        }
        double norm = 0.0;
        for (double v : row) norm += v * v;
        norm = std::sqrt(norm);
        if (norm < 1e-12) throw std::runtime_error("make_jl: degenerate Gaussian frame");
        for (double& v : row) v /= norm;
    }
    const double scale = std::sqrt(static_cast<double>(d) / static_cast<double>(m));
    for (auto& row : jl.matrix)
        for (double& v : row) v *= scale;
    return jl;
}

int ClusteringFunction::classify(const Point& x) const {
    Point scaled(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) scaled[j] = x[j] * scale;
    Point snapped = locate_fixed(scaled, FixedGrid{grid_side}).center;
    Point proj = jl.project(snapped);
    NormSpec low{NormFamily::L2, p, jl.m};
    int best = 0;
    double best_d = norm_distance(proj, centers[0], low);
    for (std::size_t f = 1; f < centers.size(); ++f) {
        double d2 = norm_distance(proj, centers[f], low);
        if (d2 < best_d) {
            best_d = d2;
            best = static_cast<int>(f);
        }
    }
    return best;
}

std::string ClusteringFunction::serialize() const {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["scale"] = scale;
    j["grid_side"] = grid_side;
    j["p"] = p;
    j["jl"] = nlohmann::ordered_json{{"d", jl.d}, {"m", jl.m}, {"identity", jl.identity}};
    j["jl"]["matrix"] = jl.matrix;
    j["centers"] = centers;
    return j.dump();
}

ClusteringFunction euclidean_pipeline(const DistributionSource& source, int k, int p, double eps,
                                      double rho, double delta, RngStream& data_rng,
                                      const SharedRandomness& internal,
                                      const EuclideanPipelineBudget& budget) {
    if (p != 1 && p != 2) throw std::invalid_argument("euclidean_pipeline: p must be 1 or 2");
    const int d = source.dim();
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    NormSpec spec{NormFamily::L2, p, d};
    const double Delta = spec.delta();

    DistributionSource scaled = DistributionSource::mapped(source, d, [scale](const Point& x) {
        Point y(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[j] * scale;
        return y;
    });

    OptEstimate opt = estimate_opt_relative(scaled, k, spec, 1.0, eps, rho / 3.0, delta / 3.0,
                                            data_rng, internal.child("opt"), budget.opt);

    const double grid_side = eps * opt.Lambda / (4.0 * p * Delta);
    DistributionSource snapped = DistributionSource::mapped(scaled, d, [grid_side](const Point& x) {
        return locate_fixed(x, FixedGrid{grid_side}).center;
    });

    int m = target_dim(p, eps, k, delta, budget.jl_constant);
    RngStream jl_rng = internal.child("jl").stream();
    JLMap jl = make_jl(d, m, jl_rng);

    DistributionSource projected = DistributionSource::mapped(snapped, jl.m, [&jl](const Point& x) {
        return jl.project(x);
    });

    NormSpec low{NormFamily::L2, p, jl.m};
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
    WeightedCoreset cs = build_coreset(projected, cp, low, data_rng, internal.child("coreset"));

    RngStream oracle_rng = internal.child("oracle").stream();
    LloydResult sol = weighted_kpp_lloyd(coreset_point_set(cs), k, low, oracle_rng, budget.lloyd_iters);

    ClusteringFunction f;
    f.scale = scale;
    f.grid_side = grid_side;
    f.jl = std::move(jl);
    f.centers = std::move(sol.centers);
    f.p = p;
    return f;
}

}  // namespace replikit
