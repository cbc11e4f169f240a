#include "replikit/coreset.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace replikit {

int layer_bound(int p, double Delta, double eps, double Lambda) {
    if (p < 1 || Delta <= 0.0 || eps <= 0.0 || Lambda <= 0.0)
        throw std::invalid_argument("layer_bound: arguments must be positive");
    double t = std::ceil(std::log2(5.0 * std::pow(Delta, p) / (eps * Lambda)) / p + 1.0);
    return std::max(1, static_cast<int>(t));
}

CoresetDerived coreset_derived(const CoresetParams& params, const NormSpec& spec) {
    if (params.p != 1 && params.p != 2)
        throw std::invalid_argument("coreset_derived: p must be 1 or 2");
    if (params.Lambda <= 0.0) throw std::invalid_argument("coreset_derived: Lambda must be positive");

    CoresetDerived d;
    const double Delta = spec.delta();
    d.eps_shift = params.p == 2 ? params.eps * params.eps / 64.0 : params.eps;
    d.t = layer_bound(params.p, Delta, params.eps, params.Lambda);
    d.M = std::pow(std::ceil(32.0 * Delta / d.eps_shift), spec.d);
    if (!std::isfinite(d.M))
        throw std::overflow_error("coreset_derived: cell bound M overflows; reduce d or raise eps");
    d.gamma = d.eps_shift /
              (5.0 * d.t * params.k * d.M * std::pow(2.0 * Delta, params.p));
    d.v_levels.resize(static_cast<std::size_t>(d.t) + 1, 0.0);
    for (int i = 1; i <= d.t; ++i)
        d.v_levels[static_cast<std::size_t>(i)] = std::min(
            1.0,
            std::max(d.gamma * params.Lambda * std::pow(2.0, params.p * i), params.v_floor));
    return d;
}

namespace {

bool guard_continue(int level, double Delta, int p, double eps, double Lambda) {
    return std::pow(std::ldexp(Delta, -level + 1), p) > eps * Lambda / 5.0;
}

}  // namespace

QuadTree build_quad_tree(const DistributionSource& source, const CoresetParams& params,
                         const NormSpec& spec, RngStream& data_rng,
                         const SharedRandomness& internal) {
    QuadTree tree;
    tree.derived = coreset_derived(params, spec);
    const double Delta = spec.delta();
    const int t = tree.derived.t;

    tree.heavy.assign(static_cast<std::size_t>(t) + 2, {});
    tree.light.assign(static_cast<std::size_t>(t) + 2, {});
    CellId root;
    root.coords.assign(static_cast<std::size_t>(spec.d), 0);
    tree.heavy[0].insert(root);

    int i = 1;
    for (; !tree.heavy[static_cast<std::size_t>(i - 1)].empty(); ++i) {
        std::vector<CellId> child_domain;
        for (const CellId& z : tree.heavy[static_cast<std::size_t>(i - 1)])
            for (CellId& c : children(z)) child_domain.push_back(std::move(c));
        std::sort(child_domain.begin(), child_domain.end());

        if (!guard_continue(i, Delta, params.p, params.eps, params.Lambda)) {
            for (const CellId& c : child_domain) tree.special.insert(c);
            break;
        }
        if (i > t) break;  // threshold cap should have emptied the level already

        double v = tree.derived.v_levels[static_cast<std::size_t>(i)];
        if (v >= 1.0) {
            // no cell can have mass >= v' > 1/3; level terminates
            for (const CellId& c : child_domain)
                tree.light[static_cast<std::size_t>(i)].insert(c);
            ++i;
            break;
        }

        HHParams hh;
        hh.v = v;
        hh.eps = v / 2.0;
        hh.rho = params.rho / t;
        hh.delta = params.delta / t;
        hh.budget_scale = params.budget_scale;
        // cap the per-level budget at desk scale
        double n_theory = static_cast<double>(hh.estimate_samples(child_domain.size())) /
                          std::max(params.budget_scale, 1e-300);
        if (params.budget_scale * n_theory > static_cast<double>(params.level_sample_cap))
            hh.budget_scale = static_cast<double>(params.level_sample_cap) / n_theory;

        RngStream hh_rng = internal.child("hh-level-" + std::to_string(i)).stream();
        auto draw = [&]() { return locate(source.draw(data_rng), i); };
        std::vector<CellId> heavy_cells =
            r_heavy_hitters<CellId>(draw, hh, hh_rng, &child_domain);

        // intersect with the children of the previous heavy set
        std::set<CellId> domain_set(child_domain.begin(), child_domain.end());
        for (CellId& h : heavy_cells)
            if (domain_set.count(h)) tree.heavy[static_cast<std::size_t>(i)].insert(std::move(h));
        for (const CellId& c : child_domain)
            if (!tree.heavy[static_cast<std::size_t>(i)].count(c))
                tree.light[static_cast<std::size_t>(i)].insert(c);
    }
    tree.last_level = i;

    // backward pass: mark heavy cells with no heavy children, propagate
    // representatives down to light/special regions
    std::map<CellId, Point> rep_prime;
    for (int j = std::min<int>(i, static_cast<int>(tree.heavy.size()) - 2); j >= 0; --j) {
        for (const CellId& z : tree.heavy[static_cast<std::size_t>(j)]) {
            const CellId* heavy_child = nullptr;
            if (static_cast<std::size_t>(j) + 1 < tree.heavy.size()) {
                for (const CellId& c : children(z)) {
                    if (tree.heavy[static_cast<std::size_t>(j) + 1].count(c)) {
                        heavy_child = &*tree.heavy[static_cast<std::size_t>(j) + 1].find(c);
                        break;  // children() is lexicographic; first hit is smallest
                    }
                }
            }
            if (heavy_child == nullptr) {
                tree.marked.insert(z);
                rep_prime[z] = cell_center(z);
            } else {
                rep_prime[z] = rep_prime.at(*heavy_child);
            }
        }
    }
    for (std::size_t j = 1; j < tree.light.size(); ++j)
        for (const CellId& z : tree.light[j]) tree.rep_of_region[z] = rep_prime.at(parent(z));
    for (const CellId& z : tree.special) tree.rep_of_region[z] = rep_prime.at(parent(z));
    return tree;
}

Point representative_map(const QuadTree& tree, const Point& x) {
    for (int i = 1; i <= tree.last_level + 1; ++i) {
        CellId cell = locate(x, i);
        auto it = tree.rep_of_region.find(cell);
        if (it != tree.rep_of_region.end()) return it->second;
        if (static_cast<std::size_t>(i) < tree.heavy.size() &&
            tree.heavy[static_cast<std::size_t>(i)].count(cell))
            continue;
        break;
    }
    throw std::logic_error("representative_map: point escaped the region partition");
}

PointSet coreset_point_set(const WeightedCoreset& cs) {
    PointSet out;
    out.points = cs.reps;
    out.weights = cs.weights;
    return out;
}

WeightedCoreset build_coreset(const DistributionSource& source, const CoresetParams& params,
                              const NormSpec& spec, RngStream& data_rng,
                              const SharedRandomness& internal) {
    QuadTree tree = build_quad_tree(source, params, spec, data_rng, internal);

    WeightedCoreset cs;
    cs.params = params;
    cs.Lambda = params.Lambda;
    cs.t_reached = tree.last_level;

    std::set<Point> rep_set;
    for (const auto& [cell, rep] : tree.rep_of_region) rep_set.insert(rep);
    cs.reps.assign(rep_set.begin(), rep_set.end());
    const std::size_t N = cs.reps.size();

    const double Delta = spec.delta();
    cs.size_bound = 2.0 * params.beta / tree.derived.gamma +
                    static_cast<double>(tree.derived.t) * params.k * std::pow(7.0 * Delta, spec.d);
    if (static_cast<double>(N) > cs.size_bound)
        throw std::logic_error("build_coreset: size bound violated");

    cs.mass_eps_theoretical = params.eps * params.Lambda / (4.0 * static_cast<double>(N));
    cs.mass_eps_used = std::max(cs.mass_eps_theoretical, params.mass_eps_floor);

    // desk-scale cap, same story as the heavy-hitters levels
    double eps_half = cs.mass_eps_used / 2.0;
    double n_theory = 8.0 * (std::log(1.0 / params.delta_mass) + static_cast<double>(N) * std::log(2.0)) /
                      (eps_half * eps_half *
                       (params.rho_mass - 2.0 * params.delta_mass) *
                       (params.rho_mass - 2.0 * params.delta_mass));
    double scale = params.budget_scale;
    if (scale * n_theory > static_cast<double>(params.level_sample_cap))
        scale = static_cast<double>(params.level_sample_cap) / n_theory;

    RngStream mass_rng = internal.child("mass").stream();
    auto draw = [&]() -> std::size_t {
        Point rep = representative_map(tree, source.draw(data_rng));
        auto it = std::lower_bound(cs.reps.begin(), cs.reps.end(), rep);
        return static_cast<std::size_t>(it - cs.reps.begin());
    };
    cs.weights = r_mass_estimate(draw, N, cs.mass_eps_used, params.rho_mass, params.delta_mass,
                                 mass_rng, scale);
    return cs;
}

}  // namespace replikit
