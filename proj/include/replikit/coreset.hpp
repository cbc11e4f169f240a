#pragma once

#include <map>
#include <set>
#include <vector>

#include "replikit/grid.hpp"
#include "replikit/norms.hpp"
#include "replikit/points.hpp"
#include "replikit/primitives.hpp"
#include "replikit/rng.hpp"
#include "replikit/sources.hpp"

namespace replikit {

struct CoresetParams {
    double eps = 0.5;  // target coreset error
    int p = 1;         // cost exponent (1 or 2)
    int k = 2;
    double rho = 0.2;
    double delta = 0.05;
    double Lambda = 0.1;  // replicable OPT estimate
    double beta = 1.0;    // oracle ratio (size bound only)

    // mass estimation split; pipelines pass their own rho/3, delta/3
    double rho_mass = 0.2;
    double delta_mass = 0.05;

    // Desk-scale budget controls. budget_scale multiplies every theoretical
    // sample count; level_sample_cap bounds any single heavy-hitters or mass
    // estimation call. mass_eps_floor keeps the rounding interval wide enough
    // to be replicable at these budgets (the theoretical accuracy
    // eps*Lambda/(4N) is recorded in provenance either way).
    double budget_scale = 1.0;
    std::size_t level_sample_cap = 1u << 20;
    double mass_eps_floor = 0.0;
    // Floor on the per-level heavy threshold. The theoretical
    // gamma*Lambda*2^(pi) is far below sampling noise at desk-scale budgets,
    // which makes every observed cell heavy and the tree non-replicable.
    double v_floor = 0.1;
};

// Smallest t with (2^{-t+1} Delta)^p <= eps*Lambda/5.
int layer_bound(int p, double Delta, double eps, double Lambda);

struct CoresetDerived {
    int t = 1;              // layer bound
    double eps_shift = 0;   // eps, or eps^2/2^6 for p=2
    double M = 0;           // near-cell count bound [(2^5/eps_shift) Delta]^d
    double gamma = 0;       // eps_shift / (5 t k M (2 Delta)^p)
    std::vector<double> v_levels;  // heavy threshold per level i=1..t, capped at 1
};

CoresetDerived coreset_derived(const CoresetParams& params, const NormSpec& spec);

// Hierarchical heavy/light/special decomposition plus the representative map.
struct QuadTree {
    std::vector<std::set<CellId>> heavy;   // heavy[i] = H[i]; heavy[0] = {root}
    std::vector<std::set<CellId>> light;   // light[i] = L[i]
    std::set<CellId> special;              // S at the final level
    std::set<CellId> marked;               // heavy cells with no heavy children
    std::map<CellId, Point> rep_of_region; // each light/special cell -> representative
    int last_level = 0;
    CoresetDerived derived;
};

// Alg: per level, replicable heavy hitters over the discretized distribution
// restricted to children of the previous heavy set; backward pass assigns
// representatives (marked cell centers) to every light/special region.
QuadTree build_quad_tree(const DistributionSource& source, const CoresetParams& params,
                         const NormSpec& spec, RngStream& data_rng,
                         const SharedRandomness& internal);

// Total on the cube: descends heavy cells until the containing cell is a
// light or special region, then returns that region's representative.
Point representative_map(const QuadTree& tree, const Point& x);

struct WeightedCoreset {
    std::vector<Point> reps;      // sorted
    std::vector<double> weights;  // probability vector, sums to 1 exactly
    // provenance
    double Lambda = 0;
    CoresetParams params;
    int t_reached = 0;
    double mass_eps_used = 0;
    double mass_eps_theoretical = 0;
    double size_bound = 0;  // 2 beta / gamma + t k (7 Delta)^d
};

PointSet coreset_point_set(const WeightedCoreset& cs);

WeightedCoreset build_coreset(const DistributionSource& source, const CoresetParams& params,
                              const NormSpec& spec, RngStream& data_rng,
                              const SharedRandomness& internal);

}  // namespace replikit
