#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace replikit {

using Point = std::vector<double>;

enum class NormFamily { L1, L2, Linf };

// Metric kappa (an lp norm) plus the exponent p of the clustering cost.
// p = 1 is k-medians, p = 2 is k-means; p = 0 is the k-centers sentinel
// (max-distance objective, no power applied).
struct NormSpec {
    NormFamily family = NormFamily::L2;
    int p = 2;
    int d = 2;

    // Delta: kappa-diameter of the unit hypercube.
    double delta() const {
        switch (family) {
            case NormFamily::L1: return static_cast<double>(d);
            case NormFamily::L2: return std::sqrt(static_cast<double>(d));
            case NormFamily::Linf: return 1.0;
        }
        return 1.0;
    }

    bool kcenters_mode() const { return p == 0; }
};

inline double norm_distance(const Point& x, const Point& y, const NormSpec& spec) {
    if (x.size() != y.size() || static_cast<int>(x.size()) != spec.d)
        throw std::invalid_argument("norm_distance: dimension mismatch");
    double acc = 0.0;
    switch (spec.family) {
        case NormFamily::L1:
            for (std::size_t i = 0; i < x.size(); ++i) acc += std::abs(x[i] - y[i]);
            return acc;
        case NormFamily::L2:
            for (std::size_t i = 0; i < x.size(); ++i) {
                double t = x[i] - y[i];
                acc += t * t;
            }
            return std::sqrt(acc);
        case NormFamily::Linf:
            for (std::size_t i = 0; i < x.size(); ++i) acc = std::max(acc, std::abs(x[i] - y[i]));
            return acc;
    }
    return acc;
}

// norm of a point relative to the origin
inline double norm_length(const Point& x, const NormSpec& spec) {
    Point zero(x.size(), 0.0);
    return norm_distance(x, zero, spec);
}

}  // namespace replikit
