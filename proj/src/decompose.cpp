#include "zonoplan/decompose.hpp"

#include <functional>
#include <sstream>
#include <stdexcept>

namespace zp {

std::string mode_symbol(InternalMode m) {
    switch (m) {
        case InternalMode::eventually: return "F";
        case InternalMode::always: return "G";
        case InternalMode::eventually_eventually: return "F(.&F.)";
        case InternalMode::eventually_always: return "F(.&G.)";
    }
    return "?";
}

std::string LocalSpec::formula() const {
    std::ostringstream os;
    os << "G (" << cell_name << " & !O)";
    for (const auto& in : internals) {
        switch (in.mode) {
            case InternalMode::eventually: os << " & F (" << cell_name << " & " << in.props[0] << ")"; break;
            case InternalMode::always: os << " & F G (" << cell_name << " & " << in.props[0] << ")"; break;
            case InternalMode::eventually_eventually:
                os << " & F (" << in.props[0] << " & F " << in.props[1] << ")";
                break;
            case InternalMode::eventually_always:
                os << " & F (" << in.props[0] << " & G " << in.props[1] << ")";
                break;
        }
    }
    if (target) os << " & F (" << target_desc << ")";
    return os.str();
}

namespace {

bool overlaps(const CZono& a, const CZono& b) {
    if (a.empty_marker || b.empty_marker) return false;
    return !is_empty(intersect(a, b));
}

}  // namespace

Decomposition decompose(const CellGraph& g, const RealizationResult& r) {
    if (!r.realized) throw std::invalid_argument("decompose: path is not realized");
    const auto& path = r.path;
    const int n = static_cast<int>(path.size());
    // a cycle of length > 1 closes back onto path[cycle_pos]
    const bool closed = r.cycle_pos < n - 1;
    struct Occ {
        int pos, cell, pred_prop, succ_prop;
    };
    std::vector<Occ> occ;
    for (int i = 0; i < n; ++i) {
        if (!g.is_cell(path[i])) continue;
        Occ o{i, path[i], -1, -1};
        if (i > 0 && !g.is_cell(path[i - 1])) o.pred_prop = path[i - 1];
        if (i + 1 < n && !g.is_cell(path[i + 1])) o.succ_prop = path[i + 1];
        if (i + 1 == n && closed) o.succ_prop = path[r.cycle_pos];
        occ.push_back(o);
    }
    if (occ.empty()) throw std::runtime_error("decompose: path has no cells");
    const int m = static_cast<int>(occ.size());
    int cstart = -1;
    if (closed) {
        for (int k = 0; k < m; ++k)
            if (occ[k].pos > r.cycle_pos) {
                cstart = k;
                break;
            }
    }

    Decomposition d;
    d.cycle_start = cstart;
    d.specs.resize(m);
    auto& G = g.shrunk;
    auto nm = [&](int v) { return g.names[v]; };

    // handoff region between consecutive occurrences a -> b, narrowed by the
    // proposition passed in between if possible
    struct Handoff {
        CZono set;
        std::string desc;
        int narrowed_by = -1;
    };
    auto handoff = [&](int a, int b) {
        Handoff h;
        h.set = intersect(G[occ[a].cell], G[occ[b].cell]);
        h.desc = nm(occ[a].cell);
        if (occ[b].cell != occ[a].cell) h.desc += " & " + nm(occ[b].cell);
        int p = occ[a].succ_prop >= 0 ? occ[a].succ_prop : occ[b].pred_prop;
        if (p >= 0) {
            CZono t = intersect(h.set, G[p]);
            if (!is_empty(t)) {
                h.set = t;
                h.desc += " & " + nm(p);
                h.narrowed_by = p;
            }
        }
        if (is_empty(h.set))
            throw std::runtime_error("decompose: empty handoff between " + nm(occ[a].cell) + " and " +
                                     nm(occ[b].cell));
        return h;
    };

    std::vector<int> next(m, -1);
    for (int k = 0; k + 1 < m; ++k) next[k] = k + 1;
    if (closed) next[m - 1] = cstart;

    std::vector<std::vector<int>> preds(m);
    for (int k = 0; k < m; ++k)
        if (next[k] >= 0) preds[next[k]].push_back(k);

    std::vector<std::optional<Handoff>> out(m);
    for (int k = 0; k < m; ++k)
        if (next[k] >= 0) out[k] = handoff(k, next[k]);

    for (int k = 0; k < m; ++k) {
        LocalSpec& s = d.specs[k];
        s.occurrence = k;
        s.cell = occ[k].cell;
        s.cell_name = nm(s.cell);
        s.next = next[k];
        s.in_cycle = cstart >= 0 && k >= cstart;
        bool pred_used = false;
        if (k == 0) {
            int p0 = path[0];
            CZono init = G[s.cell];
            std::string desc = s.cell_name;
            if (overlaps(init, G[p0])) {
                init = intersect(init, G[p0]);
                desc += " & " + nm(p0);
                pred_used = true;
            }
            s.init.push_back(init);
            s.init_desc = desc;
        }
        for (int p : preds[k]) {
            s.init.push_back(out[p]->set);
            s.init_desc += (s.init_desc.empty() ? "" : " | ") + out[p]->desc;
            if (out[p]->narrowed_by >= 0 && out[p]->narrowed_by == occ[k].pred_prop) pred_used = true;
        }
        if (s.init.empty()) throw std::runtime_error("decompose: empty init for " + s.cell_name);
        if (out[k]) {
            s.target = out[k]->set;
            s.target_desc = out[k]->desc;
        }
        std::vector<int> inner;
        if (occ[k].pred_prop >= 0 && !pred_used) inner.push_back(occ[k].pred_prop);
        int sp = occ[k].succ_prop;
        bool succ_used = out[k] && out[k]->narrowed_by == sp;
        if (sp >= 0 && !succ_used) inner.push_back(sp);
        bool stay = !out[k];
        if (!inner.empty()) {
            InternalRegion ir;
            for (int p : inner) {
                CZono reg = intersect(G[s.cell], G[p]);
                if (is_empty(reg))
                    throw std::runtime_error("decompose: " + nm(p) + " does not meet " + s.cell_name);
                ir.props.push_back(nm(p));
                ir.regions.push_back(reg);
            }
            bool last_is_succ = inner.back() == sp && sp >= 0;
            if (inner.size() == 2)
                ir.mode = stay ? InternalMode::eventually_always : InternalMode::eventually_eventually;
            else
                ir.mode = (stay && last_is_succ) ? InternalMode::always : InternalMode::eventually;
            s.internals.push_back(ir);
        }
    }

    // nested eventualities, with the cycle under G F
    std::function<std::string(int)> chain = [&](int k) -> std::string {
        std::string f = "(" + d.specs[k].formula() + ")";
        if (k + 1 >= m) return f;
        if (cstart >= 0 && k + 1 == cstart) return "(" + f + " & G F " + chain(k + 1) + ")";
        return "(" + f + " & F " + chain(k + 1) + ")";
    };
    d.composed = cstart == 0 ? "G F " + chain(0) : chain(0);
    return d;
}

}  // namespace zp
