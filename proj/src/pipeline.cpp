#include "zonoplan/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <set>
#include <stdexcept>

#include "zonoplan/log.hpp"

namespace zp {

namespace {

double since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::vector<int> Plan::path_cells() const {
    std::vector<int> out;
    if (!dec) return out;
    for (const auto& s : dec->specs)
        if (std::find(out.begin(), out.end(), s.cell) == out.end()) out.push_back(s.cell);
    return out;
}

Plan make_plan(const Scenario& sc) {
    Plan p;
    auto t0 = std::chrono::steady_clock::now();
    p.cover = build_cover(sc.cover);
    p.t_cover = since(t0);

    t0 = std::chrono::steady_clock::now();
    p.obs = make_obstacles(sc.obstacle_names, sc.obstacles, sc.eps);
    p.robust = robustify_regions(sc.region_names, sc.regions, sc.eps);
    p.graph = build_graph(p.cover, p.obs, sc.eps, sc.conn_delta);
    generalize(p.graph, sc.region_names, p.robust);
    p.t_graph = since(t0);

    t0 = std::chrono::steady_clock::now();
    if (!sc.path_cycle.empty()) {
        p.path = AcceptingPath{sc.path_prefix, sc.path_cycle};
    } else {
        std::set<std::string> declared(sc.region_names.begin(), sc.region_names.end());
        Nba b = load_nba(sc.nba, &declared);
        Kripke k = complete_kripke(sc.region_names, sc.init_props);
        p.path = product_search(k, b, &p.product_states);
    }
    p.t_path = since(t0);

    t0 = std::chrono::steady_clock::now();
    if (!p.path) {
        p.real.realized = false;
        p.real.failure = "no accepting run in the product";
    } else {
        p.real = verify_realization(p.graph, p.path->prefix, p.path->cycle);
        if (p.real.realized) p.dec = decompose(p.graph, p.real);
    }
    p.t_verify = since(t0);
    return p;
}

ModelParams model_params(const Scenario& sc) {
    ModelParams mp;
    mp.tau = sc.tau;
    mp.eps = sc.eps;
    mp.eta = sc.eta;
    mp.kind = sc.relation;
    mp.rk4_steps = sc.rk4_steps;
    mp.jobs = sc.jobs;
    return mp;
}

SymbolicModel build_cell_model(const Scenario& sc, const Plan& p, int cell) {
    const Cell& c = p.cover.cells.at(cell);
    Lattice lat = approximate_cell(c.region, sc.mu_for(c.id), sc.lattice);
    ModelParams mp = model_params(sc);
    mp.eps = sc.eps_for(c.id);
    return build_symbolic_model(c.id, c.region, lat, sc.inputs(), sc.plant, mp);
}

const SymbolicModel& ModelCache::get(int cell) {
    auto it = models.find(cell);
    if (it != models.end()) return it->second;
    auto t0 = std::chrono::steady_clock::now();
    SymbolicModel m = build_cell_model(*sc, *plan, cell);
    seconds[cell] = since(t0);
    return models.emplace(cell, std::move(m)).first->second;
}

std::vector<LabeledRegion> labeled_regions(const Scenario& sc) {
    std::vector<LabeledRegion> out;
    for (size_t i = 0; i < sc.regions.size(); ++i) out.push_back({sc.region_names[i], sc.regions[i]});
    return out;
}

std::vector<CZono> plain_sets(const Scenario& sc, const Plan& p) {
    std::vector<CZono> out;
    for (const auto& c : p.cover.cells) out.push_back(c.plane);
    for (int v = p.graph.n_cells; v < p.graph.size(); ++v) {
        const CZono* r = sc.region(p.graph.names[v]);
        out.push_back(r ? *r : p.graph.shrunk[v]);
    }
    return out;
}

LtlPtr scenario_formula(const Scenario& sc) {
    if (sc.ltl.empty()) return nullptr;
    return parse_ltl(sc.ltl);
}

Vec default_x0(const Scenario& sc) {
    Vec x = 0.5 * (sc.lo + sc.hi);
    if (!sc.init_props.empty()) {
        const CZono* r = sc.region(sc.init_props.front());
        if (r) {
            auto [a, b] = bounding_box(*r);
            x.head(2) = 0.5 * (a + b);
        }
    }
    return x;
}

namespace {

void word_checks(const Scenario& sc, const Plan& p, ClosedLoop& cl) {
    const auto& steps = cl.traj.steps;
    for (const auto& st : steps)
        for (const auto& o : sc.obstacles)
            if (o.contains(Vec(st.x.head(2)))) cl.obstacle_hit = true;
    if (!p.path) return;
    std::vector<std::string> seq = p.path->prefix;
    seq.push_back(p.path->cycle.front());
    std::vector<std::string> order;
    for (const auto& s : seq)
        if (std::find(order.begin(), order.end(), s) == order.end()) order.push_back(s);
    std::vector<int> first;
    for (const auto& s : order) {
        int t = -1;
        for (int i = 0; i < static_cast<int>(steps.size()); ++i)
            if (steps[i].labels.count(s)) {
                t = i;
                break;
            }
        first.push_back(t);
    }
    cl.visited_order = true;
    for (size_t i = 0; i < first.size(); ++i) {
        if (first[i] < 0) cl.visited_order = false;
        if (i > 0 && first[i] < first[i - 1]) cl.visited_order = false;
    }
    if (p.path->cycle.size() == 1) {
        const std::string& fin = p.path->cycle.front();
        int entry = first.back();
        if (entry >= 0) {
            int k = entry + 1;
            while (k < static_cast<int>(steps.size()) && steps[k].labels.count(fin)) ++k;
            cl.steps_in_final = k - entry - 1;
        }
    }
}

}  // namespace

ClosedLoop run_closed_loop(const Scenario& sc, const Plan& p, const GlobalController& gc, ModelCache& cache,
                           const Vec& x0, int horizon) {
    if (!p.dec) throw std::invalid_argument("run_closed_loop: no decomposition");
    std::vector<const SymbolicModel*> per;
    for (const auto& s : p.dec->specs) per.push_back(&cache.get(s.cell));
    RefinedController rc = refine(gc, per);
    ClosedLoop cl;
    cl.traj = simulate(rc, sc.plant, x0, horizon, sc.tau, labeled_regions(sc));
    cl.word = extract_word(cl.traj);
    LtlPtr f = scenario_formula(sc);
    if (f) {
        std::set<std::string> declared(sc.region_names.begin(), sc.region_names.end());
        cl.satisfied = !cl.traj.domain_miss && check_lasso(f, cl.word.prefix, cl.word.cycle, &declared);
    }
    cl.monitor = monitor_local(cl.traj, *p.dec, p.graph, plain_sets(sc, p));
    word_checks(sc, p, cl);
    return cl;
}

GlobalBaseline run_global_baseline(const Scenario& sc, const Plan& p, double mu, bool simulate_run) {
    GlobalBaseline gb;
    auto t0 = std::chrono::steady_clock::now();
    CZono whole = make_box(sc.lo, sc.hi);
    Lattice lat = approximate_cell(whole, mu, LatticeMode::reduced);
    SymbolicModel m = build_symbolic_model("global", whole, lat, sc.inputs(), sc.plant, model_params(sc));
    gb.t_abs = since(t0);
    gb.states = m.states();
    gb.transitions = m.transitions();
    if (!p.path) {
        gb.detail = "no accepting path";
        return gb;
    }

    t0 = std::chrono::steady_clock::now();
    std::vector<std::string> seq = p.path->prefix;
    seq.push_back(p.path->cycle.front());
    std::vector<std::string> stages;
    for (size_t i = 1; i < seq.size(); ++i)
        if (stages.empty() || stages.back() != seq[i]) stages.push_back(seq[i]);
    CZono inner = contract(make_box(Vec(sc.lo.head(2)), Vec(sc.hi.head(2))), sc.eps);
    StateSet space = lattice_in(m, {inner}, &p.obs);
    auto robust_of = [&](const std::string& name) {
        for (size_t i = 0; i < sc.region_names.size(); ++i)
            if (sc.region_names[i] == name) return p.robust[i];
        throw std::invalid_argument("unknown proposition " + name);
    };
    AbstractController c;
    c.cell = "global";
    c.next = -1;
    c.spec = sc.cosafe;
    std::vector<ControllerStage> rev;
    StateSet after;
    for (int k = static_cast<int>(stages.size()) - 1; k >= 0; --k) {
        // avoid propositions that are still to come
        StateSet safe = space;
        for (size_t j = k + 1; j < stages.size(); ++j) {
            if (std::find(stages.begin(), stages.begin() + k + 1, stages[j]) != stages.begin() + k + 1) continue;
            const CZono* r = sc.region(stages[j]);
            CZono fat = inflate(*r, sc.eps);
            StateSet near = lattice_in(m, {fat});
            for (size_t q = 0; q < safe.size(); ++q) safe[q] = safe[q] && !near[q];
        }
        ControllerStage st;
        st.name = stages[k];
        st.kind = StageKind::reach;
        st.target = lattice_in(m, {robust_of(stages[k])}, &p.obs);
        if (k + 1 < static_cast<int>(stages.size()))
            for (size_t q = 0; q < st.target.size(); ++q) st.target[q] = st.target[q] && after[q];
        st.result = solve_reach_avoid(m, st.target, safe);
        after = st.result.win;
        rev.push_back(std::move(st));
    }
    c.stages.assign(rev.rbegin(), rev.rend());
    c.init.assign(m.states(), 0);
    gb.t_con = since(t0);

    Vec x0 = default_x0(sc);
    Quantizer qz(m);
    int q0 = qz(x0);
    gb.synthesized = q0 >= 0 && !c.stages.empty() && c.stages.front().result.win[q0];
    if (!gb.synthesized) {
        std::ostringstream os;
        os << "initial state outside the winning set;";
        for (const auto& st : c.stages) os << " " << st.name << ": " << st.result.size() << " winning";
        gb.detail = os.str();
        return gb;
    }
    if (!simulate_run) return gb;
    GlobalController g;
    g.status = SynthesisStatus::synthesized;
    g.local.push_back(c);
    RefinedController rc = refine(g, {&m});
    Trajectory tr = simulate(rc, sc.plant, x0, std::max(sc.horizon, 2000), sc.tau, labeled_regions(sc));
    if (!tr.completed) {
        gb.detail = tr.domain_miss ? tr.error : "final target not reached within the horizon";
        return gb;
    }
    Word w = extract_word(tr);
    LtlPtr f = parse_ltl(sc.cosafe.empty() ? sc.ltl : sc.cosafe);
    std::set<std::string> declared(sc.region_names.begin(), sc.region_names.end());
    gb.satisfied = check_lasso(f, w.prefix, w.cycle, &declared);
    gb.detail = gb.satisfied ? "co-safe formula satisfied" : "co-safe formula violated by " + w.render();
    return gb;
}

}  // namespace zp
