#include "replikit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace replikit {

namespace {

double powp(double x, int p) {
    if (p == 1) return x;
    if (p == 2) return x * x;
    return std::pow(x, p);
}

}  // namespace

void nearest_center_distances(const PointSet& points, const std::vector<Point>& centers,
                              const NormSpec& spec, std::vector<double>& dist) {
    if (centers.empty()) throw std::invalid_argument("nearest_center_distances: empty centers");
    const std::int64_t n = static_cast<std::int64_t>(points.size());
    dist.resize(points.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        double best = norm_distance(points.points[static_cast<std::size_t>(i)], centers[0], spec);
        for (std::size_t f = 1; f < centers.size(); ++f)
            best = std::min(best, norm_distance(points.points[static_cast<std::size_t>(i)], centers[f], spec));
        dist[static_cast<std::size_t>(i)] = best;
    }
}

double clustering_cost(const PointSet& points, const std::vector<Point>& centers,
                       const NormSpec& spec) {
    std::vector<double> dist;
    nearest_center_distances(points, centers, spec, dist);
    if (spec.kcenters_mode()) {
        double worst = 0.0;
        for (double v : dist) worst = std::max(worst, v);
        return worst;
    }
    // fixed index order; bit-identical across thread counts
    double total = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) total += points.weight(i) * powp(dist[i], spec.p);
    return total;
}

double clustering_cost_serial(const PointSet& points, const std::vector<Point>& centers,
                              const NormSpec& spec) {
    if (centers.empty()) throw std::invalid_argument("clustering_cost_serial: empty centers");
    if (spec.kcenters_mode()) {
        double worst = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            double best = norm_distance(points.points[i], centers[0], spec);
            for (std::size_t f = 1; f < centers.size(); ++f)
                best = std::min(best, norm_distance(points.points[i], centers[f], spec));
            worst = std::max(worst, best);
        }
        return worst;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        double best = norm_distance(points.points[i], centers[0], spec);
        for (std::size_t f = 1; f < centers.size(); ++f)
            best = std::min(best, norm_distance(points.points[i], centers[f], spec));
        total += points.weight(i) * powp(best, spec.p);
    }
    return total;
}

namespace {

// argmin over centers, lowest index wins ties
std::size_t assign_center(const Point& x, const std::vector<Point>& centers, const NormSpec& spec) {
    std::size_t best = 0;
    double best_d = norm_distance(x, centers[0], spec);
    for (std::size_t f = 1; f < centers.size(); ++f) {
        double d = norm_distance(x, centers[f], spec);
        if (d < best_d) {
            best_d = d;
            best = f;
        }
    }
    return best;
}

Point weighted_mean(const PointSet& points, const std::vector<std::size_t>& members) {
    Point c(points.points[members[0]].size(), 0.0);
    double wsum = 0.0;
    for (std::size_t i : members) {
        double w = points.weight(i);
        wsum += w;
        for (std::size_t j = 0; j < c.size(); ++j) c[j] += w * points.points[i][j];
    }
    for (double& v : c) v /= wsum;
    return c;
}

// lower weighted median per coordinate: first value where the cumulative
// weight reaches half the total
Point weighted_median(const PointSet& points, const std::vector<std::size_t>& members) {
    const std::size_t d = points.points[members[0]].size();
    Point c(d, 0.0);
    double wtotal = 0.0;
    for (std::size_t i : members) wtotal += points.weight(i);
    std::vector<std::size_t> order(members);
    for (std::size_t j = 0; j < d; ++j) {
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (points.points[a][j] != points.points[b][j]) return points.points[a][j] < points.points[b][j];
            return a < b;
        });
        double acc = 0.0;
        for (std::size_t i : order) {
            acc += points.weight(i);
            if (acc >= wtotal / 2.0 - 1e-15) {
                c[j] = points.points[i][j];
                break;
            }
        }
    }
    return c;
}

}  // namespace

LloydResult weighted_kpp_lloyd(const PointSet& points, int k, const NormSpec& spec,
                               RngStream& rng, int max_iters) {
    if (points.size() == 0) throw std::invalid_argument("weighted_kpp_lloyd: empty point set");
    if (k < 1) throw std::invalid_argument("weighted_kpp_lloyd: k must be >= 1");
    const std::size_t n = points.size();

    LloydResult result;

    // k-means++ seeding with weights
    std::vector<double> score(n);
    for (std::size_t i = 0; i < n; ++i) score[i] = points.weight(i);
    for (int c = 0; c < k; ++c) {
        double total = std::accumulate(score.begin(), score.end(), 0.0);
        std::size_t pick;
        if (total <= 0.0) {
            // all remaining mass sits on existing centers
            pick = rng.next_index(n);
            result.duplicate_centers = true;
        } else {
            double u = rng.next_double() * total;
            double acc = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += score[i];
                if (u < acc) {
                    pick = i;
                    break;
                }
            }
        }
        result.centers.push_back(points.points[pick]);
        if (c + 1 < k) {
            std::vector<double> dist;
            nearest_center_distances(points, result.centers, spec, dist);
            for (std::size_t i = 0; i < n; ++i)
                score[i] = points.weight(i) * powp(dist[i], std::max(spec.p, 1));
        }
    }

    // Lloyd iteration; stops when the assignment is unchanged
    std::vector<std::size_t> assignment(n, 0), prev(n, SIZE_MAX);
    for (int iter = 0; iter < max_iters; ++iter) {
        for (std::size_t i = 0; i < n; ++i)
            assignment[i] = assign_center(points.points[i], result.centers, spec);
        if (assignment == prev) break;
        prev = assignment;
        result.iterations = iter + 1;
        for (int c = 0; c < k; ++c) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < n; ++i)
                if (assignment[i] == static_cast<std::size_t>(c)) members.push_back(i);
            if (members.empty()) continue;  // keep the previous center
            result.centers[static_cast<std::size_t>(c)] =
                spec.p == 1 ? weighted_median(points, members) : weighted_mean(points, members);
        }
    }
    result.cost = clustering_cost(points, result.centers, spec);
    return result;
}

std::vector<Point> greedy_kcenters(const PointSet& points, int k, const NormSpec& spec) {
    if (points.size() == 0) throw std::invalid_argument("greedy_kcenters: empty point set");
    const std::size_t n = points.size();

    std::size_t first = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (points.points[i] < points.points[first]) first = i;

    std::vector<Point> centers{points.points[first]};
    std::vector<double> dist;
    while (static_cast<int>(centers.size()) < k) {
        nearest_center_distances(points, centers, spec, dist);
        std::size_t far = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (dist[i] > dist[far]) far = i;
        centers.push_back(points.points[far]);
    }
    return centers;
}

BruteForceResult brute_force_opt(const PointSet& points, int k, const NormSpec& spec,
                                 const std::vector<Point>& candidate_set,
                                 std::uint64_t max_subsets) {
    const std::size_t m = candidate_set.size();
    if (k < 1 || static_cast<std::size_t>(k) > m)
        throw std::invalid_argument("brute_force_opt: k out of range");

    std::uint64_t combos = 1;
    for (int i = 0; i < k; ++i) {
        combos = combos * (m - static_cast<std::size_t>(i)) / static_cast<std::uint64_t>(i + 1);
        if (combos > max_subsets)
            throw std::runtime_error("brute_force_opt: combinatorial budget exceeded");
    }

    BruteForceResult best;
    best.cost = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);

    std::vector<Point> centers(static_cast<std::size_t>(k));
    for (;;) {
        for (int i = 0; i < k; ++i) centers[static_cast<std::size_t>(i)] = candidate_set[idx[static_cast<std::size_t>(i)]];
        double cost = clustering_cost(points, centers, spec);
        if (cost < best.cost) {  // strict: lexicographically first subset wins ties
            best.cost = cost;
            best.centers = centers;
        }
        // next k-combination in lexicographic order
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - static_cast<std::size_t>(k - i)) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return best;
}

}  // namespace replikit
