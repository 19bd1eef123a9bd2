// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "cover_checks.hpp"
#include "geometry_suite.hpp"
#include "ltl_oracle.hpp"
#include "zonoplan/log.hpp"
#include "zonoplan/pipeline.hpp"

using namespace zp;

namespace {

std::string scen(const std::string& name) { return std::string(ZP_SCENARIO_DIR) + "/" + name; }

struct Outcome {
    bool pass = false;
    std::string detail;
};

Vec v1(double a) { return Vec::Constant(1, a); }

int failures = 0;

void criterion(int k, const std::function<Outcome()>& body, double limit_s) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0 && dt > limit_s) {
        o.pass = false;
        o.detail += "; over the time limit";
    }
    if (!o.pass) ++failures;
    char t[32];
    std::snprintf(t, sizeof t, "%.1f s", dt);
    std::cout << "criterion " << k << ": " << (o.pass ? "PASS" : "FAIL") << " (" << t << ") " << o.detail << std::endl;
}

SymbolicModel line(const std::string& plant, Relation kind, double eps, double tau, double mu, double eta,
                   double radius_scale = 1.0, bool allow_uncertified = false) {
    Plant p = make_plant(plant, 1);
    CZono cell = make_box(v1(-1), v1(1));
    ModelParams mp;
    mp.kind = kind;
    mp.eps = eps;
    mp.tau = tau;
    mp.eta = eta;
    mp.radius_scale = radius_scale;
    mp.allow_uncertified = allow_uncertified;
    return build_symbolic_model(plant, cell, approximate_cell(cell, mu), input_grid(v1(-1), v1(1), eta), p, mp);
}

Outcome geometry() {
    auto m = suite::membership_agreement(120, 25, 11);
    auto e = suite::expand_soundness(1000, 3);
    auto c = suite::contract_soundness(1000, 0.1, 4);
    std::ostringstream os;
    os << m.sets << " sets, " << m.compared << " points compared, " << m.disagreements << " disagreements; expand "
       << e.disagreements << "/" << e.compared << "; contract " << c.disagreements << "/" << c.compared;
    bool ok = m.sets >= 100 && m.disagreements == 0 && e.disagreements == 0 && c.disagreements == 0 &&
              e.points >= 1000 && c.points >= 1000;
    return {ok, os.str()};
}

Outcome covering() {
    Scenario sc = load_scenario(scen("fourroom.cfg"));
    Cover cv = build_cover(sc.cover);
    int gaps = cover_checks::uncovered(cv, 10000, 2);
    std::string first;
    int apart = cover_checks::disjoint_links(cv, &first);
    std::ostringstream os;
    os << cv.cells.size() << " cells, expansion " << cv.config.expand_eps << ", " << gaps
       << " of 10000 samples uncovered, " << apart << " linked pairs without overlap";
    return {cv.cells.size() == 18 && cv.config.expand_eps == 0.2 && gaps == 0 && apart == 0, os.str()};
}

Outcome realization() {
    Scenario open = load_scenario(scen("fourroom.cfg"));
    Plan p = make_plan(open);
    std::string got = p.realized() ? p.real.render(p.graph) : "Null";
    Scenario closed = load_scenario(scen("fourroom_closed.cfg"));
    Plan q = make_plan(closed);
    reset_model_build_count();
    ModelCache cache{&closed, &q, {}, {}};
    auto gc = synthesize_all(q.real, q.dec ? *q.dec : Decomposition{}, q.graph,
                             [&](int c) -> const SymbolicModel& { return cache.get(c); });
    uint64_t builds = model_build_count();
    std::ostringstream os;
    os << "open: " << got << "; closed: " << (q.realized() ? "realized" : "Null") << ", " << builds << " model builds";
    bool ok = got == "p0 v11 v6 v1 p1 v2 v5 p2 v7 (p3)^w" && !q.realized() &&
              gc.status == SynthesisStatus::null && builds == 0;
    return {ok, os.str()};
}

Outcome product_paths() {
    Kripke k = complete_kripke({"p0", "p1", "p2", "p3"}, {"p0"});
    auto a = product_search(k, load_nba(scen("patrol.nba")));
    auto b = product_search(k, load_nba(scen("fourroom.nba")));
    std::string ra = a ? a->render() : "none", rb = b ? b->render() : "none";
    return {ra == "p0 p1 p2 p3 (p1 p2)^w" && rb == "p0 p1 p2 (p3)^w", "patrol: " + ra + "; four-room: " + rb};
}

Outcome relations() {
    std::ostringstream os;
    bool ok = true;
    auto integ = line("integrator", Relation::frr, 0.05, 0.1, 0.05, 0.5);
    auto r1 = check_frr_sampled(integ, make_plant("integrator", 1), 1000, 1);
    os << "FRR integrator " << r1.violations << "/" << r1.samples;
    ok = ok && r1.violations == 0 && r1.samples >= 900;

    Scenario sc = load_scenario(scen("fourroom.cfg"));
    Plan p = make_plan(sc);
    auto bike = build_cell_model(sc, p, p.path_cells().front());
    auto r2 = check_frr_sampled(bike, sc.plant, 1000, 2);
    os << "; FRR bicycle " << bike.cell << " " << r2.violations << "/" << r2.samples;
    ok = ok && r2.violations == 0 && r2.samples >= 900;

    auto stable = line("stable", Relation::abr, 0.2, 1.0, 0.02, 0.05);
    auto r3 = check_abr_sampled(stable, make_plant("stable", 1), 1000, 3);
    os << "; ABR stable " << r3.violations << "/" << r3.samples;
    ok = ok && stable.certified && r3.violations == 0 && r3.samples >= 900;

    // negative controls
    auto thin = line("integrator", Relation::frr, 0.05, 0.1, 0.02, 0.5, 0.5);
    auto n1 = check_frr_sampled(thin, make_plant("integrator", 1), 1000, 4);
    auto bad = line("stable", Relation::abr, 0.05, 0.1, 0.1, 0.4, 1.0, true);
    auto n2 = check_abr_sampled(bad, make_plant("stable", 1), 1000, 5);
    os << "; halved radius " << n1.violations << " violations; uncertified ABR " << n2.violations << " violations";
    ok = ok && n1.violations > 0 && !bad.certified && n2.violations > 0;
    return {ok, os.str()};
}

Outcome end_to_end() {
    Scenario sc = load_scenario(scen("fourroom.cfg"));
    Plan p = make_plan(sc);
    if (!p.realized()) return {false, "path not realized"};
    ModelCache cache{&sc, &p, {}, {}};
    auto gc = synthesize_all(p.real, *p.dec, p.graph, [&](int c) -> const SymbolicModel& { return cache.get(c); });
    if (gc.status != SynthesisStatus::synthesized) return {false, "synthesis failed: " + gc.failure};
    ClosedLoop cl = run_closed_loop(sc, p, gc, cache, default_x0(sc), sc.horizon);
    std::ostringstream os;
    os << "word satisfied " << cl.satisfied << ", order " << cl.visited_order << ", steps in p3 " << cl.steps_in_final
       << ", obstacle hit " << cl.obstacle_hit;
    if (cl.traj.domain_miss) os << "; " << cl.traj.error;
    return {cl.satisfied && cl.visited_order && cl.steps_in_final >= 50 && !cl.obstacle_hit, os.str()};
}

Outcome local_vs_global() {
    Scenario sc = load_scenario(scen("fourroom.cfg"));
    Plan p = make_plan(sc);
    if (!p.realized()) return {false, "path not realized"};
    ModelCache cache{&sc, &p, {}, {}};
    size_t local = 0;
    for (int c : p.path_cells()) local += cache.get(c).transitions();
    auto gc = synthesize_all(p.real, *p.dec, p.graph, [&](int c) -> const SymbolicModel& { return cache.get(c); });
    bool local_ok = gc.status == SynthesisStatus::synthesized;
    if (local_ok) local_ok = run_closed_loop(sc, p, gc, cache, default_x0(sc), sc.horizon).satisfied;
    GlobalBaseline gb = run_global_baseline(sc, p, sc.mu, true);
    std::ostringstream os;
    os << "local " << local << " < global " << gb.transitions << ": " << (local < gb.transitions ? "yes" : "no")
       << "; local verdict " << (local_ok ? "satisfied" : "not satisfied (" + gc.failure + ")")
       << "; global verdict " << (gb.satisfied ? "satisfied" : "not satisfied (" + gb.detail + ")");
    return {local < gb.transitions && local_ok && gb.satisfied, os.str()};
}

Outcome semantics() {
    auto r = ltl_oracle::compare_random(200, 29);
    std::ostringstream os;
    os << r.pairs << " pairs, " << r.disagreements << " disagreements";
    if (!r.first.empty()) os << ", first on " << r.first;
    return {r.pairs == 200 && r.disagreements == 0, os.str()};
}

}  // namespace

int main() {
    quiet_flag() = true;
    criterion(1, geometry, 30);
    criterion(2, covering, 10);
    criterion(3, realization, 10);
    criterion(4, product_paths, 0);
    criterion(5, relations, 120);
    criterion(6, end_to_end, 600);
    criterion(7, local_vs_global, 0);
    criterion(8, semantics, 10);
    std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria passed") << std::endl;
    return failures ? 1 : 0;
}
