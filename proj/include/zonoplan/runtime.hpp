#pragma once

#include <string>
#include <vector>

#include "zonoplan/abstraction.hpp"
#include "zonoplan/ltl.hpp"
#include "zonoplan/synthesis.hpp"

namespace zp {

struct Quantizer {
    PointIndex index;
    double eps = 0.0;
    Quantizer() = default;
    explicit Quantizer(const SymbolicModel& m);
    // nearest lattice point in g-norm, lowest index on ties
    int operator()(const Vec& x, double* dist = nullptr) const;
};

struct RefinedController {
    const GlobalController* global = nullptr;
    std::vector<const SymbolicModel*> models;  // per occurrence
    std::vector<Quantizer> quant;
};

// Throws if a model lacks a valid relation certificate.
RefinedController refine(const GlobalController& gc, const std::vector<const SymbolicModel*>& per_occurrence);

struct LabeledRegion {
    std::string name;
    CZono region;  // planar
};

struct TrajStep {
    double t = 0.0;
    Vec x;
    Vec u;  // input applied from this state; empty at the last sample
    int occurrence = -1;
    int stage = -1;
    int q = -1;
    double qdist = 0.0;
    Letter labels;
};

struct Trajectory {
    std::vector<TrajStep> steps;
    bool domain_miss = false;
    int quantizer_violations = 0;
    std::string error;
    int stay_entry = -1;  // first step in the terminal stay stage
    bool completed = false;  // final reach target hit with nothing after it
};

Letter label_point(const Vec& x, const std::vector<LabeledRegion>& regions);

Trajectory simulate(const RefinedController& rc, const Plant& plant, const Vec& x0, int horizon, double tau,
                    const std::vector<LabeledRegion>& regions);

struct Word {
    std::vector<Letter> prefix, cycle;
    std::string render() const;
};

// cycle from the previous occurrence of the final (mode, labels, state) signature
Word extract_word(const Trajectory& t);
Word extract_word(const std::vector<Letter>& labels);

// Segment-wise check of the local formulas on plain (unshrunk) regions.
// plain holds one planar set per graph vertex.
std::vector<std::string> monitor_local(const Trajectory& t, const Decomposition& d, const CellGraph& g,
                                       const std::vector<CZono>& plain);

void write_trajectory_csv(const Trajectory& t, const std::string& path);

}  // namespace zp
