#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "replikit/norms.hpp"
#include "replikit/points.hpp"
#include "replikit/rng.hpp"

namespace replikit {

enum class OracleKind { KMeansPP_Lloyd, KMediansPP_Lloyd, GreedyKCenters, BruteForce };

struct OracleSpec {
    OracleKind kind = OracleKind::KMeansPP_Lloyd;
    double beta = 1.0;   // claimed multiplicative ratio
    double B = 0.0;      // claimed additive slack (k-centers only)
    int max_iters = 64;  // Lloyd iteration cap
};

// Weighted (k,p)-clustering cost: sum_i w_i * min_f kappa(x_i, f)^p.
// With spec.p == 0 (k-centers sentinel) returns max_i min_f kappa(x_i, f).
// Per-point minima are computed by the OpenMP kernel; the reduction runs in
// fixed index order so the result is bit-identical across thread counts.
double clustering_cost(const PointSet& points, const std::vector<Point>& centers,
                       const NormSpec& spec);

// Serial reference implementation kept for testing and benchmarking.
double clustering_cost_serial(const PointSet& points, const std::vector<Point>& centers,
                              const NormSpec& spec);

// Fills dist[i] = min_f kappa(x_i, f); parallel kernel behind both costs.
void nearest_center_distances(const PointSet& points, const std::vector<Point>& centers,
                              const NormSpec& spec, std::vector<double>& dist);

struct LloydResult {
    std::vector<Point> centers;
    double cost = 0.0;
    int iterations = 0;
    bool duplicate_centers = false;  // k exceeded the number of distinct points
};

// Weighted k-means++ seeding followed by Lloyd iteration. Seeding draws are
// proportional to w_i * kappa(x_i, F)^p; the update step is the weighted
// mean for p=2 and the coordinate-wise weighted median for p=1.
// Deterministic given (points, weights, k, rng).
LloydResult weighted_kpp_lloyd(const PointSet& points, int k, const NormSpec& spec,
                               RngStream& rng, int max_iters = 64);

// Gonzalez farthest-first traversal starting from the lexicographically
// smallest point; 2-approximation for sample k-centers.
std::vector<Point> greedy_kcenters(const PointSet& points, int k, const NormSpec& spec);

struct BruteForceResult {
    double cost = 0.0;
    std::vector<Point> centers;
};

// Exact minimum of clustering_cost over all k-subsets of candidate_set,
// lexicographic subset order breaking ties. Test oracle; refuses instances
// with more than max_subsets combinations.
BruteForceResult brute_force_opt(const PointSet& points, int k, const NormSpec& spec,
                                 const std::vector<Point>& candidate_set,
                                 std::uint64_t max_subsets = 1000000);

}  // namespace replikit
