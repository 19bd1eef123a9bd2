#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zonoplan/geometry.hpp"
#include "zonoplan/topograph.hpp"

namespace zp {

enum class InternalMode { eventually, always, eventually_eventually, eventually_always };

std::string mode_symbol(InternalMode m);

struct InternalRegion {
    std::vector<std::string> props;  // one, or two for the combined modes
    std::vector<CZono> regions;      // each already intersected with the cell
    InternalMode mode = InternalMode::eventually;
};

struct LocalSpec {
    int occurrence = 0;
    int cell = -1;  // graph vertex
    std::string cell_name;
    std::vector<CZono> init;  // union; obstacles are subtracted implicitly
    std::string init_desc;
    std::optional<CZono> target;
    std::string target_desc;
    std::vector<InternalRegion> internals;
    int next = -1;  // occurrence index of the following cell, -1 at the end
    bool in_cycle = false;

    std::string formula() const;
};

struct Decomposition {
    std::vector<LocalSpec> specs;
    int cycle_start = -1;  // first occurrence inside the cycle, -1 for a terminal stay
    std::string composed;
};

// Requires r.realized. Regions are the contracted sets stored in the graph.
Decomposition decompose(const CellGraph& g, const RealizationResult& r);

}  // namespace zp
