#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(ZP_CLI_PATH) + " " + args + " 2>&1";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    char buf[4096];
    while (fgets(buf, sizeof buf, p)) r.out += buf;
    int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string scen(const std::string& name) { return std::string(ZP_SCENARIO_DIR) + "/" + name; }

fs::path fresh_dir(const std::string& name) {
    fs::path d = fs::temp_directory_path() / ("zp_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string common(const std::string& scenario, const fs::path& out) {
    return "--scenario " + scen(scenario) + " --out " + out.string() + " --quiet";
}

}  // namespace

TEST_CASE("verify on the four-room layout") {
    auto d = fresh_dir("verify");
    Run r = run("verify " + common("fourroom.cfg", d));
    INFO(r.out);
    CHECK(r.code == 0);
    CHECK(r.out.find("accepting path: p0 p1 p2 (p3)^w") != std::string::npos);
    CHECK(r.out.find("realized: p0 v11 v6 v1 p1 v2 v5 p2 v7 (p3)^w") != std::string::npos);
    CHECK(fs::exists(d / "verify" / "decomposition.txt"));
    CHECK(slurp(d / "verify" / "path.txt").find("realized p0 v11") != std::string::npos);
}

TEST_CASE("closed door is Null and builds nothing") {
    auto d = fresh_dir("closed");
    Run r = run("verify " + common("fourroom_closed.cfg", d));
    INFO(r.out);
    CHECK(r.code == 2);
    CHECK(r.out.find("Null: accepting path not realized") != std::string::npos);
    Run a = run("abstract " + common("fourroom_closed.cfg", d));
    CHECK(a.code == 2);
    CHECK_FALSE(fs::exists(d / "abstract"));
    Run s = run("synthesize " + common("fourroom_closed.cfg", d));
    CHECK(s.code == 2);
    CHECK(slurp(d / "synthesize" / "supervisor.txt") == "status null\n");
}

TEST_CASE("check-word") {
    Run ok = run("check-word --scenario " + scen("fourroom.cfg") + " --word " + scen("fourroom.word"));
    CHECK(ok.code == 0);
    CHECK(ok.out == "satisfied\n");
    Run bad = run("check-word --scenario " + scen("fourroom.cfg") + " --word-text 'p0 p3 (p3)^w'");
    CHECK(bad.code == 1);
    CHECK(bad.out == "violated\n");
    Run inline_ltl = run("check-word --ltl 'G F a' --word-text 'b (a b)^w'");
    CHECK(inline_ltl.out == "satisfied\n");
    Run undeclared = run("check-word --scenario " + scen("fourroom.cfg") + " --word-text '(q)^w'");
    CHECK(undeclared.code == 1);
    CHECK(undeclared.out.find("error") != std::string::npos);
}

TEST_CASE("configuration errors") {
    auto d = fresh_dir("cfg");
    std::ofstream(d / "empty.cfg").close();
    Run e = run("verify --scenario " + (d / "empty.cfg").string() + " --out " + d.string());
    CHECK(e.code == 1);
    CHECK(e.out.find("error:") != std::string::npos);

    std::string text = slurp(scen("corridor.cfg"));
    auto pos = text.find("eps = 0.2");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 9, "eps = 0.3");
    std::ofstream(d / "wide.cfg") << text;
    Run w = run("verify --scenario " + (d / "wide.cfg").string() + " --out " + d.string());
    CHECK(w.code == 1);
    CHECK(w.out.find("exceeds the cover expansion") != std::string::npos);

    Run m = run("verify --out " + d.string());
    CHECK(m.code == 1);
    CHECK(m.out.find("--scenario is required") != std::string::npos);
    CHECK(run("bogus").code != 0);
}

TEST_CASE("corridor runs end to end") {
    auto d = fresh_dir("corridor");
    for (const char* stage : {"cover", "graph", "verify", "abstract", "synthesize", "simulate"}) {
        Run r = run(std::string(stage) + " " + common("corridor.cfg", d));
        INFO(stage << "\n" << r.out);
        CHECK(r.code == 0);
    }
    CHECK(slurp(d / "simulate" / "checks.txt").find("satisfied yes") != std::string::npos);
    Run rep = run("report " + common("corridor.cfg", d));
    CHECK(rep.code == 0);
    CHECK(rep.out.find("synthesis        synthesized") != std::string::npos);
    CHECK(fs::exists(d / "report" / "report.json"));
}

TEST_CASE("artifacts do not depend on the job count") {
    auto a = fresh_dir("jobs1"), b = fresh_dir("jobs3");
    REQUIRE(run("abstract " + common("corridor.cfg", a) + " --jobs 1").code == 0);
    REQUIRE(run("abstract " + common("corridor.cfg", b) + " --jobs 3").code == 0);
    REQUIRE(run("synthesize " + common("corridor.cfg", a)).code == 0);
    REQUIRE(run("synthesize " + common("corridor.cfg", b)).code == 0);
    int compared = 0;
    for (const char* stage : {"abstract", "synthesize"})
        for (const auto& e : fs::directory_iterator(a / stage)) {
            auto ext = e.path().extension();
            if (ext != ".model" && ext != ".ctrl" && ext != ".txt") continue;
            CHECK(slurp(e.path()) == slurp(b / stage / e.path().filename()));
            ++compared;
        }
    CHECK(compared >= 4);
}
