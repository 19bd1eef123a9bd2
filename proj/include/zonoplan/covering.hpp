#pragma once

#include <string>
#include <utility>
#include <vector>

#include "zonoplan/geometry.hpp"

namespace zp {

struct CoverConfig {
    Vec2 lo{0, 0}, hi{1, 1};  // planar state-space rectangle
    std::vector<Vec2> centers;
    // directed: (i, j) adds c_j - c_i as a generator of cell i
    std::vector<std::pair<int, int>> links;
    double expand_eps = 0.0;
    // remaining axes carried whole; empty for planar systems
    Vec extra_lo, extra_hi;
};

struct Cell {
    std::string id;  // v1, v2, ...
    CZono plane;     // planar cell after expansion
    CZono region;    // lifted to the full state space
    bool constrained = false;
};

struct Cover {
    std::vector<Cell> cells;
    int n_zonotopes = 0;
    int n_gaps = 0;
    CoverConfig config;
};

// Hexagonal-offset seeding; links to all centers within 1.5 spacing.
CoverConfig seed_hex(const Vec2& lo, const Vec2& hi, double spacing, double expand_eps);

std::vector<CZono> generate_zonotopes(const CoverConfig& cfg);
// Convex pieces of rect \ union(zonos), triangulated. Not expanded.
std::vector<CZono> fill_gaps(const Vec2& lo, const Vec2& hi, const std::vector<CZono>& zonos);
Cover build_cover(const CoverConfig& cfg);

// rect minus a list of convex polygons as disjoint convex pieces
std::vector<std::vector<Vec2>> convex_difference(const std::vector<std::vector<Vec2>>& pieces,
                                                 const std::vector<Vec2>& cut);

}  // namespace zp
