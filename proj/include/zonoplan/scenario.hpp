#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "zonoplan/abstraction.hpp"
#include "zonoplan/covering.hpp"
#include "zonoplan/plant.hpp"

namespace zp {

class ScenarioError : public std::runtime_error {
public:
    explicit ScenarioError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

private:
    std::vector<std::string> errors_;
};

struct Scenario {
    std::string source;  // file path, or "<text>"
    std::string dir;     // for relative paths
    Vec lo, hi;          // full state-space box
    CoverConfig cover;
    std::vector<std::string> obstacle_names;
    std::vector<CZono> obstacles;  // planar
    std::vector<std::string> region_names;
    std::vector<CZono> regions;  // planar
    std::string ltl;
    std::string cosafe;  // co-safe variant for the global baseline
    std::string nba;  // resolved path, empty if unused
    std::vector<std::string> path_prefix, path_cycle;
    std::vector<std::string> init_props;
    double tau = 0.2;
    double eps = 0.2;
    double mu = 0.15;
    std::map<std::string, double> mu_cell;
    std::map<std::string, double> eps_cell;  // relation precision per cell; cover and graph use eps
    double eta = 0.2;
    double input_step = 0.2;
    double conn_delta = 0.0;
    Relation relation = Relation::frr;
    LatticeMode lattice = LatticeMode::full;
    int horizon = 400;
    int rk4_steps = 10;
    int jobs = 1;  // set from the command line
    Plant plant;

    int dim() const { return static_cast<int>(lo.size()); }
    double mu_for(const std::string& cell) const;
    double eps_for(const std::string& cell) const;
    std::vector<Vec> inputs() const;
    const CZono* region(const std::string& name) const;
};

// Throws ScenarioError listing every problem found.
Scenario parse_scenario(const std::string& text, const std::string& dir = ".", const std::string& source = "<text>");
Scenario load_scenario(const std::string& path);

// "p0 p1 {p2,p3} (p3)^w" style words and paths
struct LassoText {
    std::vector<std::vector<std::string>> prefix, cycle;
};
LassoText parse_lasso_text(const std::string& s);

}  // namespace zp
