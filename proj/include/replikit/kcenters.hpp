#pragma once

#include <cstddef>
#include <vector>

#include "replikit/grid.hpp"
#include "replikit/norms.hpp"
#include "replikit/points.hpp"
#include "replikit/rng.hpp"
#include "replikit/sources.hpp"

namespace replikit {

struct KCentersParams {
    double c = 0.0625;  // grid side
    int k = 2;
    double n = 8;   // cluster-coverage sample size from the replicability assumption
    double q = 0.9; // coverage probability per batch of n samples
    double beta = 1.0;
    double B = 0.0;
    double rho = 0.2;
    double delta = 0.05;
    double opt_bound = 1.0;     // known upper bound on OPT, in (0, 1]
    double budget_scale = 1e-6;
    std::size_t sample_cap = 1u << 22;

    double lambda() const;  // (1 + ln(5/delta)) / q
    // m = ceil(budget_scale * 400 lambda (nM ln(5/delta) + nkM^2 ln 2) / rho^2)
    double m_count(double M) const;
    double N_count(double M) const;  // lambda * n * m * M
};

// min of the proposition bound ((c + 2c Delta + 2(beta OPT + B))/c)^d and
// the domain bound (1/c)^d
double cell_count_bound(double c, double beta, double B, double opt_bound, double Delta, int d);

// Counts N samples per fixed-grid cell, draws a uniform threshold in
// [0, m/N] from the internal stream, returns cells with empirical mass >= v
// sorted by coordinates.
std::vector<FixedCell> r_active_cells(const DistributionSource& source, const KCentersParams& params,
                                      const NormSpec& spec, RngStream& data_rng,
                                      RngStream& internal_rng);

// Snaps each point to its fixed-grid cell center, deduplicates, and calls
// the k-centers oracle on the snapped set.
std::vector<Point> oracle_with_grid(const PointSet& points, double c, int k, const NormSpec& spec);

// Active cells -> cell centers -> oracle. Output lies on the c-lattice.
std::vector<Point> r_kcenters(const DistributionSource& source, const KCentersParams& params,
                              const NormSpec& spec, RngStream& data_rng, RngStream& internal_rng);

}  // namespace replikit
