#pragma once

#include <string>
#include <vector>

#include "replikit/coreset.hpp"
#include "replikit/norms.hpp"
#include "replikit/optest.hpp"
#include "replikit/rng.hpp"
#include "replikit/sources.hpp"

namespace replikit {

// m = ceil(C * p^4 / eps^2 * ln(k / (eps * delta)))
int target_dim(int p, double eps, int k, double delta, double C = 1.0);

// sqrt(d/m)-scaled random orthonormal m-frame; identity embedding when m >= d
struct JLMap {
    int d = 0;
    int m = 0;
    bool identity = false;
    std::vector<std::vector<double>> matrix;  // m rows of dimension d (empty if identity)

    Point project(const Point& x) const;
};

JLMap make_jl(int d, int m, RngStream& rng);

// classify(x): scale -> fine-grid snap -> project -> nearest center
// (lowest index wins ties)
struct ClusteringFunction {
    double scale = 1.0;      // 1/sqrt(d)
    double grid_side = 1.0;  // eps*Lambda/(4 p Delta) in the scaled space
    JLMap jl;
    std::vector<Point> centers;  // in R^m
    int p = 2;

    int classify(const Point& x) const;
    // canonical serialization; byte equality across paired runs is the
    // replicability success predicate
    std::string serialize() const;
};

struct EuclideanPipelineBudget {
    OptBudget opt{1e-4, 30, 1024, 40, 32};
    double coreset_budget_scale = 1.0;
    std::size_t coreset_sample_cap = 1u << 18;
    double mass_eps_floor = 0.05;
    double v_floor = 0.1;
    double jl_constant = 1.0;
    int lloyd_iters = 64;
};

// The staged Euclidean pipeline: scale by 1/sqrt(d), estimate OPT, snap to a
// fine grid, project, build a coreset in R^m, estimate masses, run the
// oracle, and wrap the result into a clustering function.
ClusteringFunction euclidean_pipeline(const DistributionSource& source, int k, int p, double eps,
                                      double rho, double delta, RngStream& data_rng,
                                      const SharedRandomness& internal,
                                      const EuclideanPipelineBudget& budget = {});

}  // namespace replikit
