#include "zonoplan/runtime.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace zp {

Quantizer::Quantizer(const SymbolicModel& m)
    : index(m.lattice.points, m.norm(), std::max(m.params.eps, 1e-3)), eps(m.params.eps) {}

int Quantizer::operator()(const Vec& x, double* dist) const { return index.nearest(x.data(), dist); }

RefinedController refine(const GlobalController& gc, const std::vector<const SymbolicModel*>& per_occurrence) {
    if (gc.status != SynthesisStatus::synthesized) throw std::invalid_argument("refine: controller not synthesized");
    if (per_occurrence.size() != gc.local.size()) throw std::invalid_argument("refine: model count mismatch");
    RefinedController rc;
    rc.global = &gc;
    rc.models = per_occurrence;
    for (const auto* m : per_occurrence) {
        if (!m->certified)
            throw std::invalid_argument("refine: model for " + m->cell + " has no valid relation certificate");
        rc.quant.emplace_back(*m);
    }
    return rc;
}

Letter label_point(const Vec& x, const std::vector<LabeledRegion>& regions) {
    Letter l;
    Vec p = x.head(2);
    for (const auto& r : regions)
        if (r.region.contains(p)) l.insert(r.name);
    return l;
}

Trajectory simulate(const RefinedController& rc, const Plant& plant, const Vec& x0, int horizon, double tau,
                    const std::vector<LabeledRegion>& regions) {
    Trajectory tr;
    const auto& gc = *rc.global;
    int occ = 0, stage = 0;
    Vec x = x0;
    for (int k = 0; k <= horizon; ++k) {
        TrajStep s;
        s.t = k * tau;
        s.x = x;
        s.labels = label_point(x, regions);
        int q = -1;
        double dist = 0;
        // advance through satisfied stages, possibly into the next cell
        for (int guard = 0; guard < 64; ++guard) {
            q = rc.quant[occ](x, &dist);
            const auto& c = gc.local[occ];
            const auto& st = c.stages[stage];
            if (st.kind != StageKind::reach || q < 0 || !st.target[q]) break;
            if (stage + 1 < static_cast<int>(c.stages.size())) {
                ++stage;
            } else if (c.next >= 0) {
                occ = c.next;
                stage = 0;
            } else {
                break;
            }
        }
        s.occurrence = occ;
        s.stage = stage;
        s.q = q;
        s.qdist = dist;
        if (dist > rc.quant[occ].eps + 1e-9) ++tr.quantizer_violations;
        const auto& st = gc.local[occ].stages[stage];
        if (st.kind == StageKind::stay && q >= 0 && st.result.steps[q] == 0 && tr.stay_entry < 0) tr.stay_entry = k;
        if (k == horizon) {
            tr.steps.push_back(s);
            break;
        }
        const auto& cur = gc.local[occ];
        if (st.kind == StageKind::reach && cur.next < 0 && stage + 1 == static_cast<int>(cur.stages.size()) &&
            q >= 0 && st.target[q]) {
            tr.completed = true;
            tr.steps.push_back(s);
            break;
        }
        if (q < 0 || !st.result.win[q] || st.result.inputs[q].empty()) {
            std::ostringstream os;
            os << "controller domain miss at t=" << s.t << " in " << gc.local[occ].cell << " stage '" << st.name
               << "', state (";
            for (int i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
            os << ")";
            tr.error = os.str();
            tr.domain_miss = true;
            tr.steps.push_back(s);
            break;
        }
        s.u = rc.models[occ]->inputs[st.result.inputs[q].front()];
        x = flow(plant, x, s.u, tau, rc.models[occ]->params.rk4_steps);
        tr.steps.push_back(s);
    }
    return tr;
}

std::string Word::render() const {
    auto letter = [](const Letter& l) {
        std::string s = "{";
        bool first = true;
        for (const auto& a : l) {
            s += (first ? "" : ",") + a;
            first = false;
        }
        return s + "}";
    };
    std::string s;
    for (const auto& l : prefix) s += letter(l) + " ";
    s += "(";
    for (size_t i = 0; i < cycle.size(); ++i) s += (i ? " " : "") + letter(cycle[i]);
    return s + ")^w";
}

Word extract_word(const std::vector<Letter>& labels) {
    Word w;
    if (labels.empty()) throw std::invalid_argument("extract_word: empty trajectory");
    w.prefix.assign(labels.begin(), labels.end() - 1);
    w.cycle.push_back(labels.back());
    return w;
}

Word extract_word(const Trajectory& t) {
    if (t.steps.empty()) throw std::invalid_argument("extract_word: empty trajectory");
    const int n = static_cast<int>(t.steps.size());
    auto sig = [&](int i) {
        const auto& s = t.steps[i];
        return std::make_tuple(s.occurrence, s.stage, s.q, s.labels);
    };
    const auto last = sig(n - 1);
    int j = -1;
    for (int i = n - 2; i >= 0; --i)
        if (sig(i) == last) {
            j = i;
            break;
        }
    Word w;
    if (j < 0) {
        for (int i = 0; i + 1 < n; ++i) w.prefix.push_back(t.steps[i].labels);
        w.cycle.push_back(t.steps[n - 1].labels);
        return w;
    }
    for (int i = 0; i < j; ++i) w.prefix.push_back(t.steps[i].labels);
    for (int i = j; i < n - 1; ++i) w.cycle.push_back(t.steps[i].labels);
    return w;
}

std::vector<std::string> monitor_local(const Trajectory& t, const Decomposition& d, const CellGraph& g,
                                       const std::vector<CZono>& plain) {
    std::vector<std::string> out;
    auto in = [&](const CZono& z, const Vec& x) { return z.contains(Vec(x.head(2))); };
    const int n = static_cast<int>(t.steps.size());
    int i = 0;
    while (i < n) {
        int occ = t.steps[i].occurrence;
        int j = i;
        while (j < n && t.steps[j].occurrence == occ) ++j;
        const LocalSpec& s = d.specs[occ];
        const CZono& cell = plain[s.cell];
        for (int k = i; k < j; ++k) {
            const Vec& x = t.steps[k].x;
            if (!in(cell, x)) {
                out.push_back(s.cell_name + ": state at t=" + std::to_string(t.steps[k].t) + " left the cell");
                break;
            }
            for (const auto& o : g.obs.regions)
                if (in(o, x)) out.push_back(s.cell_name + ": obstacle hit at t=" + std::to_string(t.steps[k].t));
        }
        // internal regions in order
        int k = i;
        for (const auto& ir : s.internals)
            for (size_t p = 0; p < ir.props.size(); ++p) {
                int v = g.index_of(ir.props[p]);
                while (k < j && !in(plain[v], t.steps[k].x)) ++k;
                if (k == j && j < n) out.push_back(s.cell_name + ": internal region " + ir.props[p] + " not visited");
            }
        // the segment must end by entering the next cell when it has a target
        if (s.target && j < n) {
            const Vec& x = t.steps[j].x;
            int nc = d.specs[t.steps[j].occurrence].cell;
            if (!in(cell, x) || !in(plain[nc], x))
                out.push_back(s.cell_name + ": handoff state not in both cells");
        }
        i = j;
    }
    return out;
}

void write_trajectory_csv(const Trajectory& t, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    if (t.steps.empty()) return;
    const int n = static_cast<int>(t.steps[0].x.size());
    int m = 0;
    for (const auto& s : t.steps) m = std::max(m, static_cast<int>(s.u.size()));
    f << "t";
    for (int i = 0; i < n; ++i) f << ",x" << i + 1;
    for (int i = 0; i < m; ++i) f << ",u" << i + 1;
    f << ",mode,stage,labels\n";
    f.precision(10);
    for (const auto& s : t.steps) {
        f << s.t;
        for (int i = 0; i < n; ++i) f << ',' << s.x[i];
        for (int i = 0; i < m; ++i) f << ',' << (i < s.u.size() ? std::to_string(s.u[i]) : "");
        f << ',' << s.occurrence << ',' << s.stage << ',';
        bool first = true;
        for (const auto& l : s.labels) {
            f << (first ? "" : " ") << l;
            first = false;
        }
        f << '\n';
    }
}

}  // namespace zp
