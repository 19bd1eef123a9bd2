#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "zonoplan/pipeline.hpp"
#include "zonoplan/runtime.hpp"

using namespace zp;

namespace {

Vec v1(double a) { return Vec::Constant(1, a); }

SymbolicModel line_model() {
    Plant p = make_plant("integrator", 1);
    CZono cell = make_box(v1(-1), v1(1));
    ModelParams mp;
    mp.eps = 0.1;
    return build_symbolic_model("x", cell, approximate_cell(cell, 0.1), input_grid(v1(-1), v1(1), 0.5), p, mp);
}

struct Corridor {
    Scenario sc = load_scenario(std::string(ZP_SCENARIO_DIR) + "/corridor.cfg");
    Plan plan = make_plan(sc);
    ModelCache cache{&sc, &plan, {}, {}};
    GlobalController gc;
    Corridor() {
        gc = synthesize_all(plan.real, *plan.dec, plan.graph,
                            [&](int c) -> const SymbolicModel& { return cache.get(c); });
    }
};

Letter L(std::initializer_list<const char*> names) {
    Letter l;
    for (const char* n : names) l.insert(n);
    return l;
}

}  // namespace

TEST_CASE("quantizer picks the nearest point and the lower index on ties") {
    auto m = line_model();
    Quantizer qz(m);
    double d = -1;
    int q = qz(v1(0.31), &d);
    CHECK(m.lattice.points(0, q) == Catch::Approx(0.3));
    CHECK(d == Catch::Approx(0.01));
    // halfway between 0.2 and 0.3
    q = qz(v1(0.25));
    CHECK(m.lattice.points(0, q) == Catch::Approx(0.2));
    q = qz(v1(-0.05));
    CHECK(m.lattice.points(0, q) == Catch::Approx(-0.1));
}

TEST_CASE("labels and word extraction") {
    std::vector<LabeledRegion> regs = {{"a", make_box(Vec::Zero(2), Vec::Ones(2))},
                                       {"b", make_box(Vec::Constant(2, 0.5), Vec::Constant(2, 2))}};
    Vec x(2);
    x << 0.7, 0.7;
    CHECK(label_point(x, regs) == L({"a", "b"}));
    x << 3, 3;
    CHECK(label_point(x, regs).empty());

    auto w = extract_word(std::vector<Letter>{L({"a"}), L({}), L({"b"})});
    CHECK(w.render() == "{a} {} ({b})^w");

    // the last signature repeats two steps back
    Trajectory t;
    for (int k = 0; k < 5; ++k) {
        TrajStep s;
        s.occurrence = 0;
        s.stage = 0;
        s.q = k < 2 ? k : 2 + (k - 2) % 2;
        s.labels = k == 0 ? L({"p0"}) : L({});
        t.steps.push_back(s);
    }
    auto tw = extract_word(t);
    CHECK(tw.prefix.size() == 2);
    CHECK(tw.cycle.size() == 2);
    CHECK_THROWS(extract_word(Trajectory{}));
}

TEST_CASE("refinement rejects uncertified models") {
    GlobalController gc;
    CHECK_THROWS(refine(gc, {}));
    gc.status = SynthesisStatus::synthesized;
    gc.local.resize(1);
    auto m = line_model();
    CHECK_THROWS(refine(gc, {}));
    m.certified = false;
    CHECK_THROWS_WITH(refine(gc, {&m}), Catch::Matchers::ContainsSubstring("certificate"));
}

TEST_CASE("corridor closed loop") {
    Corridor c;
    REQUIRE(c.gc.status == SynthesisStatus::synthesized);
    ClosedLoop cl = run_closed_loop(c.sc, c.plan, c.gc, c.cache, default_x0(c.sc), c.sc.horizon);
    INFO(cl.traj.error);
    CHECK_FALSE(cl.traj.domain_miss);
    CHECK(cl.traj.quantizer_violations == 0);
    CHECK(cl.satisfied);
    CHECK(cl.visited_order);
    CHECK_FALSE(cl.obstacle_hit);
    CHECK(cl.monitor.empty());
    CHECK(cl.steps_in_final > 10);
    REQUIRE_FALSE(cl.word.cycle.empty());
    CHECK(cl.word.cycle.back().count("p2"));

    auto path = (std::filesystem::temp_directory_path() / "zp_traj.csv").string();
    write_trajectory_csv(cl.traj, path);
    std::ifstream f(path);
    int lines = 0;
    for (std::string s; std::getline(f, s);) ++lines;
    CHECK(lines == static_cast<int>(cl.traj.steps.size()) + 1);
    std::filesystem::remove(path);
}

TEST_CASE("zero horizon gives a single sample") {
    Corridor c;
    REQUIRE(c.gc.status == SynthesisStatus::synthesized);
    ClosedLoop cl = run_closed_loop(c.sc, c.plan, c.gc, c.cache, default_x0(c.sc), 0);
    REQUIRE(cl.traj.steps.size() == 1);
    CHECK(cl.word.prefix.empty());
    CHECK(cl.word.cycle.front() == L({"p0"}));
    CHECK_FALSE(cl.satisfied);
}

TEST_CASE("a corrupted controller fails the closed loop") {
    Corridor c;
    REQUIRE(c.gc.status == SynthesisStatus::synthesized);
    // prefer the input that moves left at every state
    const auto& m = c.cache.models.begin()->second;
    int left = 0;
    for (int u = 0; u < m.n_inputs(); ++u)
        if (m.inputs[u][0] < m.inputs[left][0] - 1e-12 ||
            (std::abs(m.inputs[u][0] - m.inputs[left][0]) < 1e-12 && std::abs(m.inputs[u][1]) < std::abs(m.inputs[left][1])))
            left = u;
    for (auto& lc : c.gc.local)
        for (auto& st : lc.stages)
            for (auto& us : st.result.inputs)
                if (!us.empty()) us.insert(us.begin(), left);
    ClosedLoop cl = run_closed_loop(c.sc, c.plan, c.gc, c.cache, default_x0(c.sc), c.sc.horizon);
    CHECK_FALSE(cl.satisfied);
}
