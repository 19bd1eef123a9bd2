#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "zonoplan/covering.hpp"
#include "zonoplan/geometry.hpp"

namespace zp {

struct Obstacles {
    std::vector<std::string> names;
    std::vector<CZono> regions;   // planar
    std::vector<CZono> expanded;  // inflated by eps
    double eps = 0.0;
    // points outside the state space count as blocked once bounds are set
    bool bounded = false;
    Vec2 lo{0, 0}, hi{0, 0};
    bool contains(const Vec2& p) const;
};

Obstacles make_obstacles(const std::vector<std::string>& names, const std::vector<CZono>& regions, double eps);

// 4-connected occupancy grid over a box, sampled at cell centres
struct OccupancyGrid {
    Vec2 origin;
    double delta = 0.0;
    int nx = 0, ny = 0;
    std::vector<int> label;  // -1 free, else component id
    int components = 0;
    Vec2 point(int i, int j) const { return origin + Vec2((i + 0.5) * delta, (j + 0.5) * delta); }
    int at(int i, int j) const { return label[static_cast<size_t>(j) * nx + i]; }
};

OccupancyGrid flood_fill(const Vec2& lo, const Vec2& hi, double delta, const std::function<bool(const Vec2&)>& occ);

struct CellGraph {
    int n_cells = 0;
    std::vector<std::string> names;  // cells first, then propositions
    std::vector<CZono> shrunk;       // contracted cell or robust proposition region (planar)
    std::vector<char> isolated;
    std::vector<std::vector<char>> adj;
    std::map<std::pair<int, int>, CZono> omega;  // overlap; the interface is omega minus obstacles
    Obstacles obs;
    double eps = 0.0;
    double delta = 0.0;
    std::vector<std::string> warnings;

    int size() const { return static_cast<int>(names.size()); }
    int index_of(const std::string& name) const;
    bool is_cell(int v) const { return v < n_cells; }
    const CZono* overlap(int a, int b) const;
    int edge_count() const;
};

CellGraph build_graph(const Cover& cover, const Obstacles& obs, double eps, double delta = 0.0);
// adds one vertex per robust proposition region
void generalize(CellGraph& g, const std::vector<std::string>& names, const std::vector<CZono>& robust_regions);

// contract every region; throws naming the region that vanishes
std::vector<CZono> robustify_regions(const std::vector<std::string>& names, const std::vector<CZono>& regions,
                                     double eps);

enum class CellCheck { ii_a, ii_b, fail };

struct ConnectivityResult {
    CellCheck verdict = CellCheck::fail;
    int components = 0;
    bool unstable = false;
    std::vector<Vec2> witness;  // grid points of the chosen component
    Vec2 lo{0, 0}, hi{0, 0};     // witness bounding box
    std::string reason;
};

// Connectivity of cell^eps \ O, with the interfaces to its path neighbours.
ConnectivityResult check_cell_connectivity(const CellGraph& g, int cell, const std::vector<int>& neighbours);

struct Witness {
    std::string cell;
    std::string kind;
    Vec2 lo{0, 0}, hi{0, 0};
    int points = 0;
    int components = 0;
};

struct RealizationResult {
    bool realized = false;
    std::vector<int> path;  // vertices of the whole lasso, cycle part from cycle_pos
    int cycle_pos = 0;
    std::vector<std::pair<std::string, std::vector<int>>> sub_paths;
    std::vector<Witness> witnesses;
    std::vector<std::string> log;
    std::string failure;

    std::vector<int> cells(const CellGraph& g) const;
    int cycle_cell_start(const CellGraph& g) const;
    std::string render(const CellGraph& g) const;
};

RealizationResult verify_realization(const CellGraph& g, const std::vector<std::string>& prefix,
                                     const std::vector<std::string>& cycle, int max_backtrack = 100);

}  // namespace zp
