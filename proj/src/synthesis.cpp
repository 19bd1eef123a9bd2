#include "zonoplan/synthesis.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace zp {

bool WinResult::empty() const { return std::find(win.begin(), win.end(), 1) == win.end(); }
int WinResult::size() const { return static_cast<int>(std::count(win.begin(), win.end(), 1)); }

std::string to_string(StageKind k) {
    switch (k) {
        case StageKind::safe: return "safe";
        case StageKind::reach: return "reach";
        case StageKind::stay: return "stay";
    }
    return "?";
}

namespace {

bool all_in(const SymbolicModel& m, int q, int u, const StateSet& s) {
    auto [b, e] = m.successors(q, u);
    if (b == e) return false;
    for (auto it = b; it != e; ++it)
        if (!s[*it]) return false;
    return true;
}

void sort_by_norm(const SymbolicModel& m, std::vector<int>& us) {
    std::stable_sort(us.begin(), us.end(), [&](int a, int b) {
        double na = m.inputs[a].norm(), nb = m.inputs[b].norm();
        if (na != nb) return na < nb;
        return a < b;
    });
}

}  // namespace

WinResult solve_invariance(const SymbolicModel& m, const StateSet& safe) {
    const int Q = m.states(), U = m.n_inputs();
    WinResult r;
    r.win = safe;
    r.steps.assign(Q, -1);
    bool changed = true;
    while (changed) {
        changed = false;
        ++r.iterations;
        StateSet next = r.win;
        for (int q = 0; q < Q; ++q) {
            if (!r.win[q]) continue;
            bool ok = false;
            for (int u = 0; u < U && !ok; ++u) ok = all_in(m, q, u, r.win);
            if (!ok) {
                next[q] = 0;
                changed = true;
            }
        }
        r.win.swap(next);
    }
    r.inputs.assign(Q, {});
    for (int q = 0; q < Q; ++q) {
        if (!r.win[q]) continue;
        r.steps[q] = 0;
        for (int u = 0; u < U; ++u)
            if (all_in(m, q, u, r.win)) r.inputs[q].push_back(u);
        sort_by_norm(m, r.inputs[q]);
    }
    return r;
}

WinResult solve_reach_avoid(const SymbolicModel& m, const StateSet& target, const StateSet& safe) {
    const int Q = m.states(), U = m.n_inputs();
    WinResult r;
    r.win.assign(Q, 0);
    r.steps.assign(Q, -1);
    r.inputs.assign(Q, {});
    // reverse edges and outstanding successor counts per (q, u)
    std::vector<int> remaining(static_cast<size_t>(Q) * U, 0);
    std::vector<int> rstart(Q + 1, 0);
    for (int q = 0; q < Q; ++q) {
        if (!safe[q] || target[q]) continue;
        for (int u = 0; u < U; ++u) {
            auto [b, e] = m.successors(q, u);
            remaining[static_cast<size_t>(q) * U + u] = static_cast<int>(e - b);
            for (auto it = b; it != e; ++it) ++rstart[*it + 1];
        }
    }
    for (int q = 0; q < Q; ++q) rstart[q + 1] += rstart[q];
    std::vector<int> redge(rstart[Q]);
    std::vector<int> fill(rstart.begin(), rstart.end() - 1);
    for (int q = 0; q < Q; ++q) {
        if (!safe[q] || target[q]) continue;
        for (int u = 0; u < U; ++u) {
            auto [b, e] = m.successors(q, u);
            for (auto it = b; it != e; ++it) redge[fill[*it]++] = q * U + u;
        }
    }
    std::vector<int> ustep(static_cast<size_t>(Q) * U, -1);
    std::deque<int> frontier;
    for (int q = 0; q < Q; ++q)
        if (target[q] && safe[q]) {
            r.win[q] = 1;
            r.steps[q] = 0;
            frontier.push_back(q);
        }
    int level = 0;
    while (!frontier.empty()) {
        ++level;
        ++r.iterations;
        std::deque<int> next;
        for (int s : frontier) {
            for (int k = rstart[s]; k < rstart[s + 1]; ++k) {
                int qu = redge[k];
                if (--remaining[qu] != 0) continue;
                int q = qu / U;
                ustep[qu] = level;
                if (!r.win[q]) {
                    r.win[q] = 1;
                    r.steps[q] = level;
                    next.push_back(q);
                }
            }
        }
        frontier.swap(next);
    }
    for (int q = 0; q < Q; ++q) {
        if (!r.win[q] || r.steps[q] == 0) continue;
        std::vector<int>& us = r.inputs[q];
        for (int u = 0; u < U; ++u)
            if (ustep[static_cast<size_t>(q) * U + u] > 0) us.push_back(u);
        sort_by_norm(m, us);
        std::stable_sort(us.begin(), us.end(), [&](int a, int b) {
            return ustep[static_cast<size_t>(q) * U + a] < ustep[static_cast<size_t>(q) * U + b];
        });
    }
    return r;
}

WinResult solve_reach_stay(const SymbolicModel& m, const StateSet& target, const StateSet& safe) {
    StateSet t(target.size());
    for (size_t i = 0; i < t.size(); ++i) t[i] = target[i] && safe[i];
    WinResult core = solve_invariance(m, t);
    WinResult r = solve_reach_avoid(m, core.win, safe);
    r.iterations += core.iterations;
    for (int q = 0; q < m.states(); ++q)
        if (core.win[q]) r.inputs[q] = core.inputs[q];
    return r;
}

StateSet lattice_in(const SymbolicModel& m, const std::vector<CZono>& planar, const Obstacles* avoid) {
    const int Q = m.states();
    StateSet s(Q, 0);
    for (int q = 0; q < Q; ++q) {
        Vec2 p(m.lattice.points(0, q), m.lattice.points(1, q));
        Vec pv = p;
        bool in = false;
        for (const auto& z : planar)
            if (!z.empty_marker && z.contains(pv)) {
                in = true;
                break;
            }
        if (in && avoid && avoid->contains(p)) in = false;
        s[q] = in;
    }
    return s;
}

AbstractController synthesize_local(const LocalSpec& spec, const SymbolicModel& m, const CellGraph& g,
                                    const SymbolicModel* next_model, const StateSet* next_win, std::string* failure) {
    AbstractController c;
    c.cell = spec.cell_name;
    c.occurrence = spec.occurrence;
    c.next = spec.next;
    c.spec = spec.formula();
    const StateSet safe = lattice_in(m, {g.shrunk[spec.cell]}, &g.obs);
    c.init = lattice_in(m, spec.init, &g.obs);
    auto fail = [&](const std::string& msg) {
        if (failure) *failure = spec.cell_name + ": " + msg;
    };

    // stages from last to first
    std::vector<ControllerStage> rev;
    StateSet after;  // winning set of the stage that follows
    bool have_after = false;
    if (spec.target) {
        ControllerStage st;
        st.name = "target " + spec.target_desc;
        st.kind = StageKind::reach;
        st.target = lattice_in(m, {*spec.target}, &g.obs);
        if (next_model && next_win) {
            // hand over only where every nearby lattice point of the next cell wins
            GNorm nn = next_model->norm();
            PointIndex idx(next_model->lattice.points, nn, std::max(2 * m.params.eps, 1e-3));
            std::vector<int> near;
            for (int q = 0; q < m.states(); ++q) {
                if (!st.target[q]) continue;
                idx.query(m.lattice.points.col(q).data(), 2 * m.params.eps, near);
                bool ok = !near.empty();
                for (int p : near)
                    if (!(*next_win)[p]) ok = false;
                st.target[q] = ok;
            }
        }
        st.result = solve_reach_avoid(m, st.target, safe);
        after = st.result.win;
        have_after = true;
        rev.push_back(std::move(st));
    }
    for (auto it = spec.internals.rbegin(); it != spec.internals.rend(); ++it) {
        const InternalRegion& in = *it;
        for (int k = static_cast<int>(in.props.size()) - 1; k >= 0; --k) {
            ControllerStage st;
            st.name = in.props[k];
            StateSet reg = lattice_in(m, {in.regions[k]}, &g.obs);
            bool stay = (in.mode == InternalMode::always ||
                         (in.mode == InternalMode::eventually_always && k == 1));
            if (stay) {
                st.kind = StageKind::stay;
                st.result = solve_reach_stay(m, reg, safe);
            } else {
                st.kind = StageKind::reach;
                if (have_after)
                    for (size_t q = 0; q < reg.size(); ++q) reg[q] = reg[q] && after[q];
                st.target = reg;
                st.result = solve_reach_avoid(m, reg, safe);
            }
            after = st.result.win;
            have_after = true;
            rev.push_back(std::move(st));
        }
    }
    if (rev.empty()) {
        ControllerStage st;
        st.name = "safety";
        st.kind = StageKind::safe;
        st.result = solve_invariance(m, safe);
        rev.push_back(std::move(st));
    }
    c.stages.assign(rev.rbegin(), rev.rend());
    int uncovered = 0;
    for (int q = 0; q < m.states(); ++q)
        if (c.init[q] && !c.domain()[q]) ++uncovered;
    int ninit = static_cast<int>(std::count(c.init.begin(), c.init.end(), 1));
    if (ninit == 0) {
        fail("no lattice point in the init region");
    } else if (uncovered > 0) {
        std::ostringstream os;
        os << uncovered << " of " << ninit << " init states outside the winning set";
        for (const auto& st : c.stages) os << "; stage '" << st.name << "' wins " << st.result.size();
        fail(os.str());
    }
    return c;
}

GlobalController synthesize_all(const RealizationResult& r, const Decomposition& d, const CellGraph& g,
                                const ModelProvider& models) {
    GlobalController gc;
    if (!r.realized) {
        gc.status = SynthesisStatus::null;
        gc.failure = "Null: accepting path not realized";
        return gc;
    }
    const int m = static_cast<int>(d.specs.size());
    gc.cycle_start = d.cycle_start;
    gc.local.resize(m);
    std::vector<StateSet> win(m);
    std::string failure;
    auto run = [&](int k) -> bool {
        const LocalSpec& s = d.specs[k];
        const SymbolicModel& mk = models(s.cell);
        const SymbolicModel* nm = nullptr;
        const StateSet* nw = nullptr;
        if (s.next >= 0) {
            nm = &models(d.specs[s.next].cell);
            nw = &win[s.next];
        }
        std::string f;
        gc.local[k] = synthesize_local(s, mk, g, nm, nw, &f);
        win[k] = gc.local[k].domain();
        if (!f.empty()) {
            failure = f;
            return false;
        }
        return true;
    };
    bool ok = true;
    if (d.cycle_start >= 0) {
        // greatest fixed point around the cycle, starting from the safe set
        int cs = d.cycle_start;
        const SymbolicModel& m0 = models(d.specs[cs].cell);
        win[cs] = lattice_in(m0, {g.shrunk[d.specs[cs].cell]}, &g.obs);
        for (int round = 0; round < 50; ++round) {
            StateSet before = win[cs];
            bool all = true;
            for (int k = m - 1; k >= cs; --k) all = run(k) && all;
            if (win[cs] == before) {
                ok = all;
                break;
            }
            for (size_t q = 0; q < win[cs].size(); ++q) win[cs][q] = win[cs][q] && before[q];
            ok = all;
        }
        if (ok)
            for (int k = cs - 1; k >= 0 && ok; --k) ok = run(k);
    } else {
        for (int k = m - 1; k >= 0 && ok; --k) ok = run(k);
    }
    gc.status = ok ? SynthesisStatus::synthesized : SynthesisStatus::failed;
    gc.failure = failure;
    return gc;
}

void save_controller(const AbstractController& c, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "cell " << c.cell << "\noccurrence " << c.occurrence << "\nnext " << c.next << "\nstates " << c.init.size()
      << "\nspec " << c.spec << "\ninit";
    for (size_t q = 0; q < c.init.size(); ++q)
        if (c.init[q]) f << ' ' << q;
    f << "\nstages " << c.stages.size() << "\n";
    for (const auto& st : c.stages) {
        f << "stage " << to_string(st.kind) << ' ' << st.name << "\ntarget";
        for (size_t q = 0; q < st.target.size(); ++q)
            if (st.target[q]) f << ' ' << q;
        f << "\n";
        for (size_t q = 0; q < st.result.win.size(); ++q) {
            if (!st.result.win[q]) continue;
            f << q << " " << st.result.steps[q] << " :";
            for (int u : st.result.inputs[q]) f << ' ' << u;
            f << "\n";
        }
        f << "end\n";
    }
}

AbstractController load_controller(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    AbstractController c;
    std::string line, word;
    auto expect = [&](const std::string& key) {
        if (!std::getline(f, line) || line.rfind(key, 0) != 0)
            throw std::runtime_error(path + ": expected '" + key + "'");
        return line.size() > key.size() ? line.substr(key.size() + 1) : std::string();
    };
    c.cell = expect("cell");
    c.occurrence = std::stoi(expect("occurrence"));
    c.next = std::stoi(expect("next"));
    size_t Q = std::stoul(expect("states"));
    c.spec = expect("spec");
    c.init.assign(Q, 0);
    {
        std::istringstream is(expect("init"));
        size_t q;
        while (is >> q) c.init.at(q) = 1;
    }
    int ns = std::stoi(expect("stages"));
    for (int s = 0; s < ns; ++s) {
        ControllerStage st;
        std::istringstream hs(expect("stage"));
        std::string kind;
        hs >> kind;
        std::getline(hs >> std::ws, st.name);
        st.kind = kind == "safe" ? StageKind::safe : kind == "stay" ? StageKind::stay : StageKind::reach;
        st.target.assign(Q, 0);
        {
            std::istringstream is(expect("target"));
            size_t q;
            while (is >> q) st.target.at(q) = 1;
        }
        st.result.win.assign(Q, 0);
        st.result.steps.assign(Q, -1);
        st.result.inputs.assign(Q, {});
        while (std::getline(f, line) && line != "end") {
            std::istringstream is(line);
            size_t q;
            int steps;
            std::string colon;
            is >> q >> steps >> colon;
            if (!is || colon != ":" || q >= Q) throw std::runtime_error(path + ": bad controller row");
            st.result.win[q] = 1;
            st.result.steps[q] = steps;
            int u;
            while (is >> u) st.result.inputs[q].push_back(u);
        }
        c.stages.push_back(std::move(st));
    }
    return c;
}

}  // namespace zp
