#include "replikit/kcenters.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "replikit/oracle.hpp"

namespace replikit {

double KCentersParams::lambda() const { return (1.0 + std::log(5.0 / delta)) / q; }

double KCentersParams::m_count(double M) const {
    double raw = 400.0 * lambda() *
                 (n * M * std::log(5.0 / delta) + n * k * M * M * std::log(2.0)) /
                 (rho * rho);
    return std::max(1.0, std::ceil(budget_scale * raw));
}

double KCentersParams::N_count(double M) const { return lambda() * n * m_count(M) * M; }

double cell_count_bound(double c, double beta, double B, double opt_bound, double Delta, int d) {
    if (c <= 0.0 || opt_bound <= 0.0) throw std::invalid_argument("cell_count_bound: bad arguments");
    double prop = std::pow((c + 2.0 * c * Delta + 2.0 * (beta * opt_bound + B)) / c, d);
    double domain = std::pow(1.0 / c, d);
    return std::min(prop, domain);
}

std::vector<FixedCell> r_active_cells(const DistributionSource& source, const KCentersParams& params,
                                      const NormSpec& spec, RngStream& data_rng,
                                      RngStream& internal_rng) {
    const double M = cell_count_bound(params.c, params.beta, params.B, params.opt_bound,
                                      spec.delta(), spec.d);
    const double m = params.m_count(M);
    double N_raw = params.N_count(M);
    if (N_raw > static_cast<double>(params.sample_cap))
        throw std::runtime_error(
            "r_active_cells: sample budget exceeds the cap; raise c or lower budget_scale");
    const auto N = static_cast<std::size_t>(std::max(1.0, std::ceil(N_raw)));

    const FixedGrid grid{params.c};
    std::map<std::vector<std::int64_t>, std::size_t> counts;
    for (std::size_t i = 0; i < N; ++i)
        ++counts[locate_fixed(source.draw(data_rng), grid).coords];

    const double v = internal_rng.next_uniform(0.0, m / static_cast<double>(N));

    std::vector<FixedCell> out;
    for (const auto& [coords, count] : counts) {
        if (static_cast<double>(count) / static_cast<double>(N) >= v) {
            FixedCell cell;
            cell.coords = coords;
            cell.center.resize(coords.size());
            for (std::size_t j = 0; j < coords.size(); ++j)
                cell.center[j] = -0.5 + (static_cast<double>(coords[j]) + 0.5) * params.c;
            out.push_back(std::move(cell));
        }
    }
    return out;  // map order: sorted by coords
}

std::vector<Point> oracle_with_grid(const PointSet& points, double c, int k, const NormSpec& spec) {
    const FixedGrid grid{c};
    std::map<std::vector<std::int64_t>, Point> snapped;
    for (const auto& x : points.points) {
        FixedCell cell = locate_fixed(x, grid);
        snapped.emplace(cell.coords, cell.center);
    }
    PointSet dedup;
    for (const auto& [coords, center] : snapped) dedup.points.push_back(center);
    return greedy_kcenters(dedup, k, spec);
}

std::vector<Point> r_kcenters(const DistributionSource& source, const KCentersParams& params,
                              const NormSpec& spec, RngStream& data_rng, RngStream& internal_rng) {
    std::vector<FixedCell> active = r_active_cells(source, params, spec, data_rng, internal_rng);
    if (active.empty()) throw std::runtime_error("r_kcenters: no active cells");
    PointSet centers_in;
    for (const auto& cell : active) centers_in.points.push_back(cell.center);
    return greedy_kcenters(centers_in, params.k, spec);
}

}  // namespace replikit
