#include "zonoplan/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace zp {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    return f;
}

}  // namespace

void write_svg(const std::string& path, const Vec2& lo, const Vec2& hi, const std::vector<PlotLayer>& layers,
               const Trajectory* traj) {
    auto f = open_out(path);
    const double W = 600, pad = 20;
    const double s = W / std::max(hi[0] - lo[0], hi[1] - lo[1]);
    const double H = (hi[1] - lo[1]) * s;
    auto X = [&](double x) { return pad + (x - lo[0]) * s; };
    auto Y = [&](double y) { return pad + H - (y - lo[1]) * s; };
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W + 2 * pad << "\" height=\"" << H + 2 * pad
      << "\">\n";
    f << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << (hi[0] - lo[0]) * s << "\" height=\"" << H
      << "\" fill=\"white\" stroke=\"black\"/>\n";
    for (const auto& layer : layers) {
        for (size_t i = 0; i < layer.sets.size(); ++i) {
            auto v = to_vertices_2d(layer.sets[i]);
            if (v.empty()) continue;
            f << "<polygon points=\"";
            for (const auto& p : v) f << X(p[0]) << ',' << Y(p[1]) << ' ';
            f << "\" fill=\"" << layer.fill << "\" fill-opacity=\"" << layer.opacity << "\" stroke=\""
              << layer.stroke << "\" stroke-width=\"0.8\"/>\n";
            if (i < layer.labels.size()) {
                Vec2 c(0, 0);
                for (const auto& p : v) c += p;
                c /= static_cast<double>(v.size());
                f << "<text x=\"" << X(c[0]) << "\" y=\"" << Y(c[1]) << "\" font-size=\"10\" text-anchor=\"middle\">"
                  << layer.labels[i] << "</text>\n";
            }
        }
    }
    if (traj && !traj->steps.empty()) {
        f << "<polyline fill=\"none\" stroke=\"blue\" stroke-width=\"1.2\" points=\"";
        for (const auto& st : traj->steps) f << X(st.x[0]) << ',' << Y(st.x[1]) << ' ';
        f << "\"/>\n";
        const auto& a = traj->steps.front().x;
        f << "<circle cx=\"" << X(a[0]) << "\" cy=\"" << Y(a[1]) << "\" r=\"3\" fill=\"green\"/>\n";
    }
    f << "</svg>\n";
}

void write_inputs_svg(const std::string& path, const Trajectory& traj) {
    auto f = open_out(path);
    int m = 0;
    for (const auto& s : traj.steps) m = std::max(m, static_cast<int>(s.u.size()));
    const double W = 600, Hp = 120, pad = 25;
    double tmax = traj.steps.empty() ? 1.0 : std::max(traj.steps.back().t, 1e-9);
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W + 2 * pad << "\" height=\""
      << m * (Hp + pad) + pad << "\">\n";
    double ulo = -1, uhi = 1;
    for (const auto& s : traj.steps)
        for (int i = 0; i < s.u.size(); ++i) ulo = std::min(ulo, s.u[i]), uhi = std::max(uhi, s.u[i]);
    for (int i = 0; i < m; ++i) {
        double top = pad + i * (Hp + pad);
        f << "<rect x=\"" << pad << "\" y=\"" << top << "\" width=\"" << W << "\" height=\"" << Hp
          << "\" fill=\"none\" stroke=\"black\"/>\n";
        f << "<text x=\"" << pad + 4 << "\" y=\"" << top + 12 << "\" font-size=\"10\">u" << i + 1 << "</text>\n";
        f << "<polyline fill=\"none\" stroke=\"darkred\" points=\"";
        for (const auto& s : traj.steps) {
            if (s.u.size() <= i) continue;
            double x = pad + s.t / tmax * W;
            double y = top + Hp - (s.u[i] - ulo) / (uhi - ulo) * Hp;
            f << x << ',' << y << ' ';
        }
        f << "\"/>\n";
    }
    f << "</svg>\n";
}

void write_graph_dot(const std::string& path, const CellGraph& g, const std::vector<int>& highlight) {
    auto f = open_out(path);
    std::set<std::pair<int, int>> hl;
    for (size_t i = 0; i + 1 < highlight.size(); ++i)
        hl.insert({std::min(highlight[i], highlight[i + 1]), std::max(highlight[i], highlight[i + 1])});
    f << "graph cells {\n";
    for (int v = 0; v < g.size(); ++v) {
        f << "  \"" << g.names[v] << "\"";
        if (!g.is_cell(v)) f << " [shape=box]";
        else if (g.isolated[v]) f << " [style=dashed]";
        f << ";\n";
    }
    for (int a = 0; a < g.size(); ++a)
        for (int b = a + 1; b < g.size(); ++b)
            if (g.adj[a][b]) {
                f << "  \"" << g.names[a] << "\" -- \"" << g.names[b] << "\"";
                if (hl.count({a, b})) f << " [color=red, penwidth=2]";
                f << ";\n";
            }
    f << "}\n";
}

std::string describe_cover(const Cover& c) {
    std::ostringstream os;
    os << "cells " << c.cells.size() << " (zonotopes " << c.n_zonotopes << ", gaps " << c.n_gaps << ")\n";
    for (const auto& cell : c.cells) {
        auto [lo, hi] = bounding_box(cell.plane);
        os << cell.id << (cell.constrained ? " constrained" : " zonotope") << " c=(" << cell.plane.c[0] << ", "
           << cell.plane.c[1] << ") generators " << cell.plane.ngen() << " bbox [" << lo[0] << ", " << hi[0]
           << "] x [" << lo[1] << ", " << hi[1] << "]\n";
    }
    return os.str();
}

}  // namespace zp
