#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "replikit/norms.hpp"

namespace replikit {

// Finite weighted point set inside the kappa-ball of diameter 1 centered at
// the origin. Empty weights means uniform.
struct PointSet {
    std::vector<Point> points;
    std::vector<double> weights;  // empty => uniform 1/n

    std::size_t size() const { return points.size(); }
    int dim() const { return points.empty() ? 0 : static_cast<int>(points[0].size()); }

    double weight(std::size_t i) const {
        return weights.empty() ? 1.0 / static_cast<double>(points.size()) : weights[i];
    }

    void validate(const NormSpec& spec) const {
        for (const auto& x : points) {
            if (static_cast<int>(x.size()) != spec.d)
                throw std::invalid_argument("PointSet: dimension mismatch");
            if (norm_length(x, spec) > 0.5 + 1e-12)
                throw std::invalid_argument("PointSet: point outside the unit-diameter ball");
        }
        if (!weights.empty()) {
            if (weights.size() != points.size())
                throw std::invalid_argument("PointSet: weight count mismatch");
            double s = 0.0;
            for (double w : weights) {
                if (w < 0.0) throw std::invalid_argument("PointSet: negative weight");
                s += w;
            }
            if (std::abs(s - 1.0) > 1e-9)
                throw std::invalid_argument("PointSet: weights do not sum to 1");
        }
    }
};

}  // namespace replikit
