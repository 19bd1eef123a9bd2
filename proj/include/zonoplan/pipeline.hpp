#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zonoplan/abstraction.hpp"
#include "zonoplan/covering.hpp"
#include "zonoplan/decompose.hpp"
#include "zonoplan/nba.hpp"
#include "zonoplan/runtime.hpp"
#include "zonoplan/scenario.hpp"
#include "zonoplan/synthesis.hpp"
#include "zonoplan/topograph.hpp"

namespace zp {

// Cover, graph, accepting path, realization and decomposition.
struct Plan {
    Cover cover;
    Obstacles obs;
    std::vector<CZono> robust;  // contracted proposition regions
    CellGraph graph;
    std::optional<AcceptingPath> path;
    size_t product_states = 0;
    RealizationResult real;
    std::optional<Decomposition> dec;
    double t_cover = 0, t_graph = 0, t_path = 0, t_verify = 0;

    bool realized() const { return real.realized; }
    // distinct path cells in first-visit order
    std::vector<int> path_cells() const;
};

Plan make_plan(const Scenario& sc);

ModelParams model_params(const Scenario& sc);
SymbolicModel build_cell_model(const Scenario& sc, const Plan& p, int cell);

struct ModelCache {
    const Scenario* sc = nullptr;
    const Plan* plan = nullptr;
    std::map<int, SymbolicModel> models;
    std::map<int, double> seconds;
    const SymbolicModel& get(int cell);
};

std::vector<LabeledRegion> labeled_regions(const Scenario& sc);
// planar set per graph vertex: expanded cells, then plain proposition regions
std::vector<CZono> plain_sets(const Scenario& sc, const Plan& p);

struct ClosedLoop {
    Trajectory traj;
    Word word;
    bool satisfied = false;   // global formula on the extracted word
    std::vector<std::string> monitor;
    int steps_in_final = 0;  // consecutive steps inside the last region at the end
    bool visited_order = false;
    bool obstacle_hit = false;
};

LtlPtr scenario_formula(const Scenario& sc);
Vec default_x0(const Scenario& sc);
ClosedLoop run_closed_loop(const Scenario& sc, const Plan& p, const GlobalController& gc, ModelCache& cache,
                           const Vec& x0, int horizon);

struct GlobalBaseline {
    int states = 0;
    size_t transitions = 0;
    double t_abs = 0, t_con = 0;
    bool synthesized = false;
    bool satisfied = false;
    std::string detail;
};

// One abstraction over the whole space at the given mu; reach stages along
// the accepting path, checked against the co-safe formula.
GlobalBaseline run_global_baseline(const Scenario& sc, const Plan& p, double mu, bool simulate = true);

}  // namespace zp
