#pragma once

#include <functional>
#include <string>
#include <vector>

#include "zonoplan/abstraction.hpp"
#include "zonoplan/decompose.hpp"
#include "zonoplan/topograph.hpp"

namespace zp {

using StateSet = std::vector<char>;

struct WinResult {
    StateSet win;
    std::vector<int> steps;                // reach: step bound, -1 outside win
    std::vector<std::vector<int>> inputs;  // per state, preferred first
    int iterations = 0;
    bool empty() const;
    int size() const;
};

WinResult solve_invariance(const SymbolicModel& m, const StateSet& safe);
WinResult solve_reach_avoid(const SymbolicModel& m, const StateSet& target, const StateSet& safe);
// invariant core of the target, then reach into it
WinResult solve_reach_stay(const SymbolicModel& m, const StateSet& target, const StateSet& safe);

enum class StageKind { safe, reach, stay };
std::string to_string(StageKind k);

struct ControllerStage {
    std::string name;
    StageKind kind = StageKind::reach;
    StateSet target;  // advance once the quantised state is here; empty for safe/stay
    WinResult result;
};

struct AbstractController {
    std::string cell;
    int occurrence = 0;
    int next = -1;
    std::vector<ControllerStage> stages;
    StateSet init;
    std::string spec;

    const StateSet& domain() const { return stages.front().result.win; }
};

enum class SynthesisStatus { null, synthesized, failed };

struct GlobalController {
    SynthesisStatus status = SynthesisStatus::failed;
    std::vector<AbstractController> local;
    int cycle_start = -1;
    std::string failure;
    int models_built = 0;
};

// lattice points whose planar projection lies in one of the regions
StateSet lattice_in(const SymbolicModel& m, const std::vector<CZono>& planar, const Obstacles* avoid = nullptr);

using ModelProvider = std::function<const SymbolicModel&(int cell)>;

// Local synthesis of one spec given the winning set of the following cell.
// next_model/next_win may be null for a terminal cell.
AbstractController synthesize_local(const LocalSpec& spec, const SymbolicModel& m, const CellGraph& g,
                                    const SymbolicModel* next_model, const StateSet* next_win, std::string* failure);

// Null when the path is not realised (no model is requested in that case).
GlobalController synthesize_all(const RealizationResult& r, const Decomposition& d, const CellGraph& g,
                                const ModelProvider& models);

void save_controller(const AbstractController& c, const std::string& path);
AbstractController load_controller(const std::string& path);

}  // namespace zp
