#pragma once

#include <string>
#include <vector>

#include "zonoplan/covering.hpp"
#include "zonoplan/runtime.hpp"
#include "zonoplan/topograph.hpp"

namespace zp {

struct PlotLayer {
    std::vector<CZono> sets;  // planar
    std::vector<std::string> labels;
    std::string fill, stroke;
    double opacity = 0.3;
};

// 2-D projection; trajectory may be null
void write_svg(const std::string& path, const Vec2& lo, const Vec2& hi, const std::vector<PlotLayer>& layers,
               const Trajectory* traj = nullptr);
void write_inputs_svg(const std::string& path, const Trajectory& traj);
void write_graph_dot(const std::string& path, const CellGraph& g, const std::vector<int>& highlight = {});
std::string describe_cover(const Cover& c);

}  // namespace zp
