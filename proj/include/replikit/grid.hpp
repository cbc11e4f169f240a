#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "replikit/norms.hpp"

namespace replikit {

// A cell of the hierarchical grid over [-1/2, 1/2]^d: level i plus integer
// coordinates in [0, 2^i). Side length is 2^-i; level 0 is the whole cube.
struct CellId {
    int level = 0;
    std::vector<std::int64_t> coords;

    auto operator<=>(const CellId&) const = default;
};

// coords_j = floor((x_j + 1/2) * 2^i), clamped into the last cell at the
// closed upper boundary so locate is total on the closed cube.
inline CellId locate(const Point& x, int level) {
    CellId cell;
    cell.level = level;
    cell.coords.resize(x.size());
    const double scale = std::ldexp(1.0, level);  // 2^level
    const std::int64_t max_coord = static_cast<std::int64_t>(scale) - 1;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] < -0.5 - 1e-12 || x[j] > 0.5 + 1e-12)
            throw std::invalid_argument("locate: point outside [-1/2, 1/2]^d");
        auto z = static_cast<std::int64_t>(std::floor((x[j] + 0.5) * scale));
        if (z < 0) z = 0;
        if (z > max_coord) z = max_coord;
        cell.coords[j] = z;
    }
    return cell;
}

inline Point cell_center(const CellId& cell) {
    Point c(cell.coords.size());
    const double side = std::ldexp(1.0, -cell.level);  // 2^-level
    for (std::size_t j = 0; j < c.size(); ++j)
        c[j] = -0.5 + (static_cast<double>(cell.coords[j]) + 0.5) * side;
    return c;
}

inline CellId parent(const CellId& cell) {
    if (cell.level == 0) throw std::invalid_argument("parent: root has no parent");
    CellId p;
    p.level = cell.level - 1;
    p.coords.resize(cell.coords.size());
    for (std::size_t j = 0; j < cell.coords.size(); ++j) p.coords[j] = cell.coords[j] >> 1;
    return p;
}

// The 2^d level+1 cells partitioning the cell, in lexicographic order.
inline std::vector<CellId> children(const CellId& cell) {
    const std::size_t d = cell.coords.size();
    std::vector<CellId> out;
    out.reserve(static_cast<std::size_t>(1) << d);
    const std::uint64_t count = static_cast<std::uint64_t>(1) << d;
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        CellId child;
        child.level = cell.level + 1;
        child.coords.resize(d);
        for (std::size_t j = 0; j < d; ++j) {
            std::int64_t bit = (mask >> (d - 1 - j)) & 1;
            child.coords[j] = cell.coords[j] * 2 + bit;
        }
        out.push_back(std::move(child));
    }
    return out;
}

// Fixed (non-hierarchical) grid of side c anchored at (-1/2, ..., -1/2).
struct FixedGrid {
    double side = 1.0;
};

struct FixedCell {
    std::vector<std::int64_t> coords;
    Point center;

    auto operator<=>(const FixedCell&) const = default;
};

inline FixedCell locate_fixed(const Point& x, const FixedGrid& grid) {
    FixedCell cell;
    cell.coords.resize(x.size());
    cell.center.resize(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        auto z = static_cast<std::int64_t>(std::floor((x[j] + 0.5) / grid.side));
        cell.coords[j] = z;
        cell.center[j] = -0.5 + (static_cast<double>(z) + 0.5) * grid.side;
    }
    return cell;
}

}  // namespace replikit
