#include "zonoplan/topograph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "zonoplan/log.hpp"

namespace zp {

namespace {

std::pair<Vec2, Vec2> planar_bbox(const CZono& s) {
    auto [lo, hi] = bounding_box(s);
    return {Vec2(lo(0), lo(1)), Vec2(hi(0), hi(1))};
}

bool overlap_nonempty(const CZono& om) {
    if (om.empty_marker) return false;
    if (om.hrep) return to_vertices_2d(om).size() >= 3;
    return !is_empty(om);
}

struct PairCheck {
    bool edge = false;
    bool unstable = false;
};

PairCheck pair_check_at(const CZono& a, const CZono& b, const Obstacles& obs, double delta) {
    auto [alo, ahi] = planar_bbox(a);
    auto [blo, bhi] = planar_bbox(b);
    Vec2 lo = alo.cwiseMin(blo), hi = ahi.cwiseMax(bhi);
    bool interface = false;
    auto occ = [&](const Vec2& p) {
        Vec x = p;
        bool ia = a.contains(x), ib = b.contains(x);
        if (!ia && !ib) return false;
        if (ia && ib) {
            if (obs.contains(p)) return false;
            interface = true;
        }
        return true;
    };
    OccupancyGrid g = flood_fill(lo, hi, delta, occ);
    PairCheck r;
    r.edge = interface && g.components == 1;
    return r;
}

PairCheck admissible(const CZono& a, const CZono& b, const Obstacles& obs, double delta) {
    PairCheck coarse = pair_check_at(a, b, obs, delta);
    PairCheck fine = pair_check_at(a, b, obs, delta / 2.0);
    fine.unstable = coarse.edge != fine.edge;
    return fine;
}

ConnectivityResult connectivity_at(const CellGraph& g, int cell, const std::vector<int>& nbs, double delta) {
    const CZono& z = g.shrunk[cell];
    auto [lo, hi] = planar_bbox(z);
    OccupancyGrid grid = flood_fill(lo, hi, delta, [&](const Vec2& p) {
        return z.contains(Vec(p)) && !g.obs.contains(p);
    });
    ConnectivityResult r;
    r.components = grid.components;
    if (grid.components == 0) {
        r.reason = "cell lies inside the obstacles";
        return r;
    }
    // touches[c][k]: component c meets the interface with neighbour k
    std::vector<std::vector<char>> touches(grid.components, std::vector<char>(nbs.size(), 0));
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            int l = grid.at(i, j);
            if (l < 0) continue;
            Vec p = grid.point(i, j);
            for (size_t k = 0; k < nbs.size(); ++k)
                if (!touches[l][k] && g.shrunk[nbs[k]].contains(p)) touches[l][k] = 1;
        }
    int chosen = -1;
    for (int c = 0; c < grid.components && chosen < 0; ++c) {
        bool all = true;
        for (size_t k = 0; k < nbs.size(); ++k) all = all && touches[c][k];
        if (all) chosen = c;
    }
    if (chosen < 0) {
        r.verdict = CellCheck::fail;
        r.reason = "no component of " + g.names[cell] + " links all of its interfaces";
        return r;
    }
    r.verdict = grid.components == 1 ? CellCheck::ii_a : CellCheck::ii_b;
    r.lo = Vec2::Constant(std::numeric_limits<double>::infinity());
    r.hi = -r.lo;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            if (grid.at(i, j) == chosen) {
                Vec2 p = grid.point(i, j);
                r.witness.push_back(p);
                r.lo = r.lo.cwiseMin(p);
                r.hi = r.hi.cwiseMax(p);
            }
    return r;
}

}  // namespace

bool Obstacles::contains(const Vec2& p) const {
    if (bounded && (p.x() < lo.x() || p.y() < lo.y() || p.x() > hi.x() || p.y() > hi.y())) return true;
    Vec x = p;
    for (const auto& o : expanded)
        if (o.contains(x)) return true;
    return false;
}

Obstacles make_obstacles(const std::vector<std::string>& names, const std::vector<CZono>& regions, double eps) {
    if (eps <= 0) throw std::invalid_argument("obstacles: eps must be positive");
    Obstacles o;
    o.names = names;
    o.regions = regions;
    o.eps = eps;
    for (const auto& r : regions) {
        if (r.dim() != 2) throw std::invalid_argument("obstacles: planar regions expected");
        o.expanded.push_back(inflate(r, eps));
    }
    return o;
}

OccupancyGrid flood_fill(const Vec2& lo, const Vec2& hi, double delta,
                         const std::function<bool(const Vec2&)>& occ) {
    OccupancyGrid g;
    g.origin = lo;
    g.delta = delta;
    g.nx = std::max(1, static_cast<int>(std::ceil((hi.x() - lo.x()) / delta)));
    g.ny = std::max(1, static_cast<int>(std::ceil((hi.y() - lo.y()) / delta)));
    // centre the lattice on the box
    g.origin.x() = lo.x() + ((hi.x() - lo.x()) - g.nx * delta) / 2.0;
    g.origin.y() = lo.y() + ((hi.y() - lo.y()) - g.ny * delta) / 2.0;
    const size_t total = static_cast<size_t>(g.nx) * g.ny;
    std::vector<char> occupied(total);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) occupied[static_cast<size_t>(j) * g.nx + i] = occ(g.point(i, j));
    g.label.assign(total, -1);
    std::vector<size_t> stack;
    for (size_t s = 0; s < total; ++s) {
        if (!occupied[s] || g.label[s] >= 0) continue;
        int id = g.components++;
        g.label[s] = id;
        stack.push_back(s);
        while (!stack.empty()) {
            size_t q = stack.back();
            stack.pop_back();
            int i = static_cast<int>(q % g.nx), j = static_cast<int>(q / g.nx);
            const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
            for (int k = 0; k < 4; ++k) {
                int a = i + di[k], b = j + dj[k];
                if (a < 0 || b < 0 || a >= g.nx || b >= g.ny) continue;
                size_t t = static_cast<size_t>(b) * g.nx + a;
                if (occupied[t] && g.label[t] < 0) {
                    g.label[t] = id;
                    stack.push_back(t);
                }
            }
        }
    }
    return g;
}

int CellGraph::index_of(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
        if (names[i] == name) return i;
    return -1;
}

const CZono* CellGraph::overlap(int a, int b) const {
    auto it = omega.find({std::min(a, b), std::max(a, b)});
    return it == omega.end() ? nullptr : &it->second;
}

int CellGraph::edge_count() const {
    int e = 0;
    for (int i = 0; i < size(); ++i)
        for (int j = i + 1; j < size(); ++j) e += adj[i][j];
    return e;
}

CellGraph build_graph(const Cover& cover, const Obstacles& obs, double eps, double delta) {
    if (eps <= 0 || eps > cover.config.expand_eps + 1e-12)
        throw std::invalid_argument("build_graph: eps must lie in (0, expansion]");
    CellGraph g;
    g.obs = obs;
    g.obs.bounded = true;
    g.obs.lo = cover.config.lo;
    g.obs.hi = cover.config.hi;
    g.eps = eps;
    g.delta = delta > 0 ? delta : eps / 2.0;
    g.n_cells = static_cast<int>(cover.cells.size());
    for (const auto& c : cover.cells) {
        g.names.push_back(c.id);
        g.shrunk.push_back(contract(c.plane, eps));
    }
    const int n = g.n_cells;
    g.isolated.assign(n, 0);
    g.adj.assign(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) {
        if (g.shrunk[i].empty_marker) {
            g.isolated[i] = 1;
            continue;
        }
        auto [lo, hi] = planar_bbox(g.shrunk[i]);
        OccupancyGrid og = flood_fill(lo, hi, g.delta, [&](const Vec2& p) {
            return g.shrunk[i].contains(Vec(p)) && !g.obs.contains(p);
        });
        if (og.components == 0) g.isolated[i] = 1;
    }
    for (int i = 0; i < n; ++i) {
        if (g.isolated[i]) continue;
        for (int j = i + 1; j < n; ++j) {
            if (g.isolated[j]) continue;
            CZono om = intersect(g.shrunk[i], g.shrunk[j]);
            if (!overlap_nonempty(om)) continue;
            PairCheck pc = admissible(g.shrunk[i], g.shrunk[j], g.obs, g.delta);
            if (pc.unstable) g.warnings.push_back("pair " + g.names[i] + "-" + g.names[j] + " unstable across grid resolutions");
            if (!pc.edge) continue;
            g.adj[i][j] = g.adj[j][i] = 1;
            g.omega.emplace(std::make_pair(i, j), om);
        }
    }
    for (const auto& w : g.warnings) warn(w);
    return g;
}

void generalize(CellGraph& g, const std::vector<std::string>& names, const std::vector<CZono>& robust) {
    if (names.size() != robust.size()) throw std::invalid_argument("generalize: names/regions mismatch");
    for (size_t k = 0; k < names.size(); ++k) {
        if (g.index_of(names[k]) >= 0) throw std::invalid_argument("generalize: duplicate vertex " + names[k]);
        const int v = g.size();
        g.names.push_back(names[k]);
        g.shrunk.push_back(robust[k]);
        g.isolated.push_back(0);
        for (auto& row : g.adj) row.push_back(0);
        g.adj.emplace_back(g.size(), 0);
        for (int i = 0; i < g.n_cells; ++i) {
            if (g.isolated[i]) continue;
            CZono om = intersect(g.shrunk[i], robust[k]);
            if (!overlap_nonempty(om)) continue;
            PairCheck pc = admissible(g.shrunk[i], robust[k], g.obs, g.delta);
            if (pc.unstable) g.warnings.push_back("pair " + g.names[i] + "-" + names[k] + " unstable across grid resolutions");
            if (!pc.edge) continue;
            g.adj[i][v] = g.adj[v][i] = 1;
            g.omega.emplace(std::make_pair(i, v), om);
        }
    }
}

std::vector<CZono> robustify_regions(const std::vector<std::string>& names, const std::vector<CZono>& regions,
                                     double eps) {
    std::vector<CZono> out;
    for (size_t k = 0; k < regions.size(); ++k) {
        CZono c = contract(regions[k], eps);
        if (c.empty_marker || (!c.hrep && is_empty(c)))
            throw std::invalid_argument("robust path: region of " + names[k] + " vanishes under contraction");
        if (c.dim() == 2 && to_vertices_2d(c).size() < 3)
            throw std::invalid_argument("robust path: region of " + names[k] + " vanishes under contraction");
        out.push_back(c);
    }
    return out;
}

ConnectivityResult check_cell_connectivity(const CellGraph& g, int cell, const std::vector<int>& nbs) {
    if (cell < 0 || cell >= g.n_cells) throw std::invalid_argument("check_cell_connectivity: not a cell");
    if (g.shrunk[cell].empty_marker) {
        ConnectivityResult r;
        r.reason = "cell vanishes under contraction";
        return r;
    }
    ConnectivityResult coarse = connectivity_at(g, cell, nbs, g.delta);
    ConnectivityResult fine = connectivity_at(g, cell, nbs, g.delta / 2.0);
    if (coarse.verdict != fine.verdict || coarse.components != fine.components) fine.unstable = true;
    return fine;
}

std::vector<int> RealizationResult::cells(const CellGraph& g) const {
    std::vector<int> out;
    for (int v : path)
        if (g.is_cell(v)) out.push_back(v);
    return out;
}

int RealizationResult::cycle_cell_start(const CellGraph& g) const {
    int k = 0;
    for (int i = 0; i < cycle_pos && i < static_cast<int>(path.size()); ++i)
        if (g.is_cell(path[i])) ++k;
    return k;
}

std::string RealizationResult::render(const CellGraph& g) const {
    if (!realized) return "Null";
    std::ostringstream os;
    for (int i = 0; i < static_cast<int>(path.size()); ++i) {
        if (i == cycle_pos) os << "(";
        os << g.names[path[i]];
        if (i + 1 < static_cast<int>(path.size())) os << " ";
    }
    os << ")^w";
    return os.str();
}

namespace {

// BFS between two proposition vertices through cells only; lowest index first
std::vector<int> shortest(const CellGraph& g, int s, int t, const std::set<int>& removed) {
    if (s == t) return {s};
    const int n = g.size();
    std::vector<int> parent(n, -2);
    std::deque<int> q;
    parent[s] = -1;
    q.push_back(s);
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int v = 0; v < n; ++v) {
            if (!g.adj[u][v] || parent[v] != -2) continue;
            if (v == t) {
                parent[v] = u;
                std::vector<int> path = {t};
                for (int w = u; w != -1; w = parent[w]) path.push_back(w);
                std::reverse(path.begin(), path.end());
                return path;
            }
            if (!g.is_cell(v) || removed.count(v) || g.isolated[v]) continue;
            parent[v] = u;
            q.push_back(v);
        }
    }
    return {};
}

}  // namespace

RealizationResult verify_realization(const CellGraph& g, const std::vector<std::string>& prefix,
                                     const std::vector<std::string>& cycle, int max_backtrack) {
    RealizationResult res;
    if (cycle.empty()) throw std::invalid_argument("verify_realization: empty cycle");
    std::vector<int> seq;
    for (const auto& p : prefix) seq.push_back(g.index_of(p));
    for (const auto& p : cycle) seq.push_back(g.index_of(p));
    for (size_t k = 0; k < seq.size(); ++k)
        if (seq[k] < 0 || g.is_cell(seq[k]))
            throw std::invalid_argument("verify_realization: unknown proposition in path");
    if (cycle.size() > 1) seq.push_back(seq[prefix.size()]);

    std::map<std::pair<int, int>, std::vector<int>> solved;
    std::vector<int> full = {seq[0]};
    int cycle_pos = -1;
    for (size_t k = 0; k + 1 < seq.size(); ++k) {
        if (k == prefix.size()) cycle_pos = static_cast<int>(full.size()) - 1;
        int s = seq[k], t = seq[k + 1];
        std::string label = g.names[s] + "->" + g.names[t];
        auto it = solved.find({s, t});
        std::vector<int> sub;
        if (it != solved.end()) {
            sub = it->second;
        } else {
            std::set<int> removed;
            bool ok = false;
            for (int iter = 0; iter < max_backtrack; ++iter) {
                sub = shortest(g, s, t, removed);
                if (sub.empty()) break;
                int bad = -1;
                std::vector<Witness> ws;
                for (size_t i = 1; i + 1 < sub.size(); ++i) {
                    int cell = sub[i];
                    ConnectivityResult cr = check_cell_connectivity(g, cell, {sub[i - 1], sub[i + 1]});
                    if (cr.unstable)
                        res.log.push_back("warning: " + g.names[cell] + " connectivity unstable across grid resolutions");
                    if (cr.verdict == CellCheck::fail) {
                        res.log.push_back(label + ": " + g.names[cell] + " fails (ii-b): " + cr.reason);
                        bad = cell;
                        break;
                    }
                    Witness w;
                    w.cell = g.names[cell];
                    w.kind = cr.verdict == CellCheck::ii_a ? "ii-a" : "ii-b";
                    w.lo = cr.lo;
                    w.hi = cr.hi;
                    w.points = static_cast<int>(cr.witness.size());
                    w.components = cr.components;
                    ws.push_back(w);
                }
                if (bad < 0) {
                    ok = true;
                    res.witnesses.insert(res.witnesses.end(), ws.begin(), ws.end());
                    break;
                }
                removed.insert(bad);
                if (iter + 1 == max_backtrack) res.log.push_back(label + ": backtracking cap reached");
            }
            if (!ok) {
                res.realized = false;
                res.failure = "no realizable sub-path for " + label;
                res.log.push_back(res.failure);
                return res;
            }
            solved[{s, t}] = sub;
            res.sub_paths.emplace_back(label, sub);
        }
        full.insert(full.end(), sub.begin() + 1, sub.end());
    }
    if (cycle_pos < 0) cycle_pos = static_cast<int>(full.size()) - 1;
    if (cycle.size() > 1) full.pop_back();
    res.realized = true;
    res.path = full;
    res.cycle_pos = cycle_pos;
    return res;
}

}  // namespace zp
