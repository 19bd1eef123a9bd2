#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "zonoplan/io.hpp"
#include "zonoplan/log.hpp"
#include "zonoplan/pipeline.hpp"

namespace fs = std::filesystem;
using namespace zp;

namespace {

struct Options {
    std::string scenario;
    std::string out = "run";
    int jobs = 1;
    std::vector<std::string> mu_override;
    bool global_baseline = false;
    std::vector<double> x0;
    int horizon = -1;
    uint64_t seed = 1;
    std::string ltl, word, word_text;
};

constexpr int kNull = 2;

fs::path stage_dir(const Options& o, const std::string& stage) {
    fs::path d = fs::path(o.out) / stage;
    fs::create_directories(d);
    return d;
}

void write_text(const fs::path& p, const std::string& s) {
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << s;
}

std::string read_text(const fs::path& p) {
    std::ifstream f(p);
    if (!f) throw std::runtime_error("missing artifact " + p.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Scenario load(const Options& o) {
    if (o.scenario.empty()) throw std::runtime_error("--scenario is required");
    Scenario sc = load_scenario(o.scenario);
    sc.jobs = o.jobs;
    for (const auto& kv : o.mu_override) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::runtime_error("--mu-override expects cell=value");
        double v = std::stod(kv.substr(eq + 1));
        if (v <= 0) throw std::runtime_error("--mu-override value must be positive");
        sc.mu_cell[kv.substr(0, eq)] = v;
    }
    if (o.horizon >= 0) sc.horizon = o.horizon;
    return sc;
}

std::string path_text(const Plan& p) {
    std::ostringstream os;
    if (p.path) os << "accepting " << p.path->render() << "\n";
    else os << "accepting none\n";
    os << "product_states " << p.product_states << "\n";
    if (p.realized()) {
        os << "realized " << p.real.render(p.graph) << "\n";
    } else {
        os << "realized Null\n";
        if (!p.real.failure.empty()) os << "failure " << p.real.failure << "\n";
    }
    return os.str();
}

std::vector<PlotLayer> layers(const Scenario& sc, const Plan& p) {
    PlotLayer cells{{}, {}, "#cccccc", "#777777", 0.15};
    for (const auto& c : p.cover.cells) {
        cells.sets.push_back(c.plane);
        cells.labels.push_back(c.id);
    }
    PlotLayer obs{sc.obstacles, sc.obstacle_names, "#333333", "#000000", 0.8};
    PlotLayer regs{sc.regions, sc.region_names, "#f0a030", "#a06000", 0.5};
    return {cells, obs, regs};
}

int cmd_cover(const Options& o) {
    Scenario sc = load(o);
    auto t0 = std::chrono::steady_clock::now();
    Cover c = build_cover(sc.cover);
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto d = stage_dir(o, "cover");
    write_text(d / "cells.txt", describe_cover(c));
    Plan p;
    p.cover = c;
    write_svg((d / "cover.svg").string(), sc.cover.lo, sc.cover.hi, layers(sc, p));
    std::cout << "cover: " << c.cells.size() << " cells (" << c.n_zonotopes << " zonotopes, " << c.n_gaps
              << " gap cells) in " << dt << " s\n";
    return 0;
}

int cmd_graph(const Options& o) {
    Scenario sc = load(o);
    Plan p = make_plan(sc);
    auto d = stage_dir(o, "graph");
    write_graph_dot((d / "graph.dot").string(), p.graph, p.real.path);
    std::ostringstream os;
    os << "vertices " << p.graph.size() << "\nedges " << p.graph.edge_count() << "\n";
    for (int a = 0; a < p.graph.size(); ++a)
        for (int b = a + 1; b < p.graph.size(); ++b)
            if (p.graph.adj[a][b]) os << p.graph.names[a] << " -- " << p.graph.names[b] << "\n";
    for (int v = 0; v < p.graph.n_cells; ++v)
        if (p.graph.isolated[v]) os << "isolated " << p.graph.names[v] << "\n";
    for (const auto& w : p.graph.warnings) os << "warning " << w << "\n";
    write_text(d / "graph.txt", os.str());
    std::cout << "graph: " << p.graph.size() << " vertices, " << p.graph.edge_count() << " edges\n";
    return 0;
}

int cmd_verify(const Options& o) {
    Scenario sc = load(o);
    Plan p = make_plan(sc);
    auto d = stage_dir(o, "verify");
    write_text(d / "path.txt", path_text(p));
    std::ostringstream ws;
    for (const auto& w : p.real.witnesses)
        ws << w.cell << " " << w.kind << " components " << w.components << " points " << w.points << " bbox ["
           << w.lo[0] << ", " << w.hi[0] << "] x [" << w.lo[1] << ", " << w.hi[1] << "]\n";
    for (const auto& l : p.real.log) ws << "log " << l << "\n";
    write_text(d / "witnesses.txt", ws.str());
    if (p.path) std::cout << "accepting path: " << p.path->render() << "\n";
    if (!p.realized()) {
        std::cout << "Null: accepting path not realized\n";
        if (!p.real.failure.empty()) std::cout << "  " << p.real.failure << "\n";
        return kNull;
    }
    std::cout << "realized: " << p.real.render(p.graph) << "\n";
    write_text(d / "decomposition.txt", [&] {
        std::ostringstream os;
        for (const auto& s : p.dec->specs) os << s.occurrence << " " << s.cell_name << ": " << s.formula() << "\n";
        os << "composed " << p.dec->composed << "\n";
        return os.str();
    }());
    return 0;
}

int cmd_abstract(const Options& o) {
    Scenario sc = load(o);
    Plan p = make_plan(sc);
    if (!p.realized()) {
        std::cout << "Null: accepting path not realized; no abstraction built\n";
        return kNull;
    }
    auto d = stage_dir(o, "abstract");
    for (int cell : p.path_cells()) {
        auto t0 = std::chrono::steady_clock::now();
        SymbolicModel m = build_cell_model(sc, p, cell);
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        save_model(m, (d / (m.cell + ".model")).string());
        write_text(d / (m.cell + ".txt"), m.summary());
        write_text(d / (m.cell + ".time"), std::to_string(dt) + "\n");
        std::cout << m.cell << ": " << m.states() << " states, " << m.transitions() << " transitions, " << dt
                  << " s\n";
    }
    return 0;
}

struct Loaded {
    std::map<int, SymbolicModel> models;
};

void load_models(const Options& o, const Plan& p, Loaded& l) {
    auto d = fs::path(o.out) / "abstract";
    for (int cell : p.path_cells()) {
        auto f = d / (p.graph.names[cell] + ".model");
        if (!fs::exists(f)) throw std::runtime_error("missing model " + f.string() + "; run 'abstract' first");
        l.models.emplace(cell, load_model(f.string()));
    }
}

int cmd_synthesize(const Options& o) {
    Scenario sc = load(o);
    Plan p = make_plan(sc);
    auto d = stage_dir(o, "synthesize");
    if (!p.realized()) {
        write_text(d / "supervisor.txt", "status null\n");
        std::cout << "Null: accepting path not realized\n";
        return kNull;
    }
    Loaded l;
    load_models(o, p, l);
    auto t0 = std::chrono::steady_clock::now();
    GlobalController gc = synthesize_all(p.real, *p.dec, p.graph, [&](int c) -> const SymbolicModel& {
        return l.models.at(c);
    });
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream sup;
    sup << "status " << (gc.status == SynthesisStatus::synthesized ? "synthesized" : "failed") << "\n";
    sup << "controllers " << gc.local.size() << "\ncycle_start " << gc.cycle_start << "\n";
    if (!gc.failure.empty()) sup << "failure " << gc.failure << "\n";
    for (size_t k = 0; k < gc.local.size(); ++k) {
        const auto& c = gc.local[k];
        if (c.stages.empty()) continue;
        std::string name = std::to_string(k) + "_" + c.cell + ".ctrl";
        save_controller(c, (d / name).string());
        sup << "controller " << k << " " << c.cell << " next " << c.next << " file " << name << " domain "
            << std::count(c.domain().begin(), c.domain().end(), 1) << "\n";
    }
    write_text(d / "supervisor.txt", sup.str());
    write_text(d / "time", std::to_string(dt) + "\n");
    if (gc.status != SynthesisStatus::synthesized) {
        std::cout << "synthesis failed: " << gc.failure << "\n";
        return 1;
    }
    std::cout << "synthesized " << gc.local.size() << " local controllers in " << dt << " s\n";
    return 0;
}

GlobalController load_global(const Options& o, const Plan& p) {
    auto d = fs::path(o.out) / "synthesize";
    std::istringstream is(read_text(d / "supervisor.txt"));
    GlobalController gc;
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "status") {
            std::string s;
            ls >> s;
            gc.status = s == "synthesized" ? SynthesisStatus::synthesized
                        : s == "null"      ? SynthesisStatus::null
                                           : SynthesisStatus::failed;
        } else if (key == "cycle_start") {
            ls >> gc.cycle_start;
        } else if (key == "controller") {
            int k;
            std::string cell, w, file;
            int next;
            ls >> k >> cell >> w >> next >> w >> file;
            if (static_cast<int>(gc.local.size()) <= k) gc.local.resize(k + 1);
            gc.local[k] = load_controller((d / file).string());
        }
    }
    if (p.dec && gc.local.size() != p.dec->specs.size() && gc.status == SynthesisStatus::synthesized)
        throw std::runtime_error("controllers do not match the current scenario; rerun 'synthesize'");
    return gc;
}

int cmd_simulate(const Options& o) {
    Scenario sc = load(o);
    Plan p = make_plan(sc);
    if (!p.realized()) {
        std::cout << "Null: accepting path not realized\n";
        return kNull;
    }
    GlobalController gc = load_global(o, p);
    if (gc.status != SynthesisStatus::synthesized) {
        std::cout << "no synthesized controller to simulate\n";
        return 1;
    }
    Loaded l;
    load_models(o, p, l);
    ModelCache cache;
    cache.sc = &sc;
    cache.plan = &p;
    cache.models = std::move(l.models);
    Vec x0 = default_x0(sc);
    if (!o.x0.empty()) {
        if (static_cast<int>(o.x0.size()) != sc.dim()) throw std::runtime_error("--x0 has the wrong dimension");
        for (int i = 0; i < sc.dim(); ++i) x0[i] = o.x0[i];
    }
    ClosedLoop cl = run_closed_loop(sc, p, gc, cache, x0, sc.horizon);
    auto d = stage_dir(o, "simulate");
    write_trajectory_csv(cl.traj, (d / "trajectory.csv").string());
    write_svg((d / "plot.svg").string(), sc.cover.lo, sc.cover.hi, layers(sc, p), &cl.traj);
    write_inputs_svg((d / "inputs.svg").string(), cl.traj);
    std::ostringstream os;
    os << "word " << cl.word.render() << "\nsatisfied " << (cl.satisfied ? "yes" : "no") << "\nsteps "
       << cl.traj.steps.size() << "\nquantizer_violations " << cl.traj.quantizer_violations << "\ndomain_miss "
       << (cl.traj.domain_miss ? cl.traj.error : "none") << "\nvisited_in_order " << (cl.visited_order ? "yes" : "no")
       << "\nsteps_in_final_region " << cl.steps_in_final << "\nobstacle_hit " << (cl.obstacle_hit ? "yes" : "no")
       << "\n";
    for (const auto& m : cl.monitor) os << "monitor " << m << "\n";
    write_text(d / "checks.txt", os.str());
    std::cout << os.str();
    return cl.satisfied && !cl.obstacle_hit ? 0 : 1;
}

size_t model_transitions(const fs::path& summary) {
    std::istringstream is(read_text(summary));
    std::string k;
    size_t v;
    while (is >> k) {
        if (k == "transitions" && is >> v) return v;
    }
    throw std::runtime_error("no transition count in " + summary.string());
}

int cmd_report(const Options& o) {
    Scenario sc = load(o);
    Plan p = make_plan(sc);
    nlohmann::json j;
    j["scenario"] = fs::path(o.scenario).filename().string();
    j["accepting_path"] = p.path ? p.path->render() : "none";
    j["realized"] = p.realized() ? p.real.render(p.graph) : "Null";
    nlohmann::json timing;
    timing["cover"] = p.t_cover;
    timing["graph"] = p.t_graph;
    timing["verify"] = p.t_verify;
    std::ostringstream os;
    os << "accepting path   " << (p.path ? p.path->render() : "none") << "\n";
    os << "realization      " << (p.realized() ? p.real.render(p.graph) : "Null") << "\n\n";
    size_t local_sum = 0;
    if (p.realized()) {
        os << "cell        states   transitions    t_abs (s)\n";
        auto d = fs::path(o.out) / "abstract";
        nlohmann::json cells = nlohmann::json::array();
        for (int c : p.path_cells()) {
            const std::string& name = p.graph.names[c];
            auto sum = d / (name + ".txt");
            if (!fs::exists(sum)) throw std::runtime_error("missing " + sum.string() + "; run 'abstract' first");
            size_t tr = model_transitions(sum);
            int states = 0;
            {
                std::istringstream is(read_text(sum));
                std::string k;
                while (is >> k)
                    if (k == "states") is >> states;
            }
            double t = fs::exists(d / (name + ".time")) ? std::stod(read_text(d / (name + ".time"))) : 0.0;
            local_sum += tr;
            char buf[128];
            std::snprintf(buf, sizeof buf, "%-10s %7d %13zu %12.2f\n", name.c_str(), states, tr, t);
            os << buf;
            cells.push_back({{"cell", name}, {"states", states}, {"transitions", tr}});
            timing["abstract_" + name] = t;
        }
        os << "local sum            " << local_sum << "\n";
        j["cells"] = cells;
        j["local_transitions"] = local_sum;
        auto sup = fs::path(o.out) / "synthesize" / "supervisor.txt";
        if (fs::exists(sup)) {
            std::istringstream is(read_text(sup));
            std::string k, v;
            is >> k >> v;
            j["synthesis"] = v;
            os << "synthesis        " << v << "\n";
        }
        auto chk = fs::path(o.out) / "simulate" / "checks.txt";
        if (fs::exists(chk)) {
            std::istringstream is(read_text(chk));
            std::string line;
            while (std::getline(is, line))
                if (line.rfind("satisfied", 0) == 0) {
                    j["closed_loop_satisfied"] = line.substr(10);
                    os << "closed loop      " << line << "\n";
                }
        }
    } else {
        j["cells"] = nlohmann::json::array();
        j["local_transitions"] = 0;
    }
    if (o.global_baseline) {
        GlobalBaseline gb = run_global_baseline(sc, p, sc.mu, true);
        os << "\nglobal baseline  states " << gb.states << ", transitions " << gb.transitions << "\n";
        os << "                 " << (gb.satisfied ? "satisfied" : "not satisfied") << ": " << gb.detail << "\n";
        if (p.realized())
            os << "local < global   " << (local_sum < gb.transitions ? "yes" : "no") << "\n";
        j["global"] = {{"states", gb.states},
                       {"transitions", gb.transitions},
                       {"synthesized", gb.synthesized},
                       {"satisfied", gb.satisfied},
                       {"detail", gb.detail}};
        timing["global_abs"] = gb.t_abs;
        timing["global_con"] = gb.t_con;
    }
    j["timing"] = timing;
    auto d = stage_dir(o, "report");
    write_text(d / "report.txt", os.str());
    write_text(d / "report.json", j.dump(2) + "\n");
    std::cout << os.str();
    return 0;
}

int cmd_check_word(const Options& o) {
    std::string formula = o.ltl;
    std::set<std::string> declared;
    bool have_declared = false;
    if (formula.empty()) {
        Scenario sc = load(o);
        formula = sc.ltl;
        declared.insert(sc.region_names.begin(), sc.region_names.end());
        have_declared = true;
    }
    if (formula.empty()) throw std::runtime_error("no formula: pass --ltl or a scenario with 'ltl'");
    std::string text = o.word_text;
    if (!o.word.empty()) text = read_text(o.word);
    if (text.empty()) throw std::runtime_error("no word: pass --word FILE or --word-text");
    std::string body;
    {
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line)) body += line.substr(0, line.find('#')) + " ";
    }
    LtlPtr f = parse_ltl(formula);
    LassoText lt = parse_lasso_text(body);
    auto conv = [](const std::vector<std::vector<std::string>>& v) {
        std::vector<Letter> out;
        for (const auto& l : v) out.emplace_back(l.begin(), l.end());
        return out;
    };
    bool ok = check_lasso(f, conv(lt.prefix), conv(lt.cycle), have_declared ? &declared : nullptr);
    std::cout << (ok ? "satisfied" : "violated") << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zonoplan: zonotope-cover symbolic control pipeline"};
    app.require_subcommand(1);
    Options o;
    bool quiet = false;
    auto common = [&](CLI::App* s) {
        s->add_option("--scenario", o.scenario, "scenario config file");
        s->add_option("--out", o.out, "run directory")->capture_default_str();
        s->add_option("--jobs", o.jobs, "worker threads for model construction")->check(CLI::PositiveNumber);
        s->add_option("--mu-override", o.mu_override, "per-cell lattice bound, cell=value");
        s->add_option("--seed", o.seed, "seed for sampled checks");
        s->add_flag("--quiet", quiet, "suppress warnings");
    };
    std::map<std::string, std::function<int(const Options&)>> cmds = {
        {"cover", cmd_cover},           {"graph", cmd_graph},       {"verify", cmd_verify},
        {"abstract", cmd_abstract},     {"synthesize", cmd_synthesize}, {"simulate", cmd_simulate},
        {"report", cmd_report},         {"check-word", cmd_check_word}};
    std::map<std::string, std::string> help = {
        {"cover", "build the cell cover"},
        {"graph", "build the cell graph"},
        {"verify", "find and verify the accepting path (exit 2 on Null)"},
        {"abstract", "build local symbolic models for the path cells"},
        {"synthesize", "synthesize local controllers"},
        {"simulate", "run the closed loop"},
        {"report", "transition counts and verdicts"},
        {"check-word", "check a lasso word against a formula"}};
    std::vector<CLI::App*> subs;
    for (const auto& [name, fn] : cmds) {
        CLI::App* s = app.add_subcommand(name, help[name]);
        common(s);
        if (name == "simulate") {
            s->add_option("--x0", o.x0, "initial state")->expected(-1);
            s->add_option("--horizon", o.horizon, "simulation steps");
        }
        if (name == "report") s->add_flag("--global-baseline", o.global_baseline, "also build the global abstraction");
        if (name == "check-word") {
            s->add_option("--ltl", o.ltl, "formula (defaults to the scenario's)");
            s->add_option("--word", o.word, "word file, e.g. 'p0 p1 p2 (p3)^w'");
            s->add_option("--word-text", o.word_text, "word given inline");
        }
        subs.push_back(s);
    }
    CLI11_PARSE(app, argc, argv);
    quiet_flag() = quiet;
    for (auto* s : subs) {
        if (!s->parsed()) continue;
        try {
            return cmds[s->get_name()](o);
        } catch (const ScenarioError& e) {
            for (const auto& m : e.errors()) std::cerr << "error: " << m << "\n";
            return 1;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    }
    return 1;
}
