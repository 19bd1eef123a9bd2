#include "zonoplan/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace zp {

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& e : v) s += e + "\n";
    return s;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool parse_number(const std::string& w, double& out) {
    std::string t = w;
    double sign = 1.0;
    if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
        if (t[0] == '-') sign = -1.0;
        t = t.substr(1);
    }
    if (t == "pi") {
        out = sign * M_PI;
        return true;
    }
    try {
        size_t used = 0;
        double v = std::stod(t, &used);
        if (used != t.size()) return false;
        out = sign * v;
        return std::isfinite(out);
    } catch (...) {
        return false;
    }
}

struct Line {
    int no;
    std::string key, value;
};

struct Section {
    std::string kind, name;
    int no;
    std::vector<Line> lines;
};

}  // namespace

ScenarioError::ScenarioError(std::vector<std::string> errors)
    : std::runtime_error("scenario errors:\n" + join(errors)), errors_(std::move(errors)) {}

double Scenario::mu_for(const std::string& cell) const {
    auto it = mu_cell.find(cell);
    return it == mu_cell.end() ? mu : it->second;
}

double Scenario::eps_for(const std::string& cell) const {
    auto it = eps_cell.find(cell);
    return it == eps_cell.end() ? eps : it->second;
}

std::vector<Vec> Scenario::inputs() const { return input_grid(plant.u_lo, plant.u_hi, input_step); }

const CZono* Scenario::region(const std::string& name) const {
    for (size_t i = 0; i < region_names.size(); ++i)
        if (region_names[i] == name) return &regions[i];
    return nullptr;
}

LassoText parse_lasso_text(const std::string& s) {
    LassoText out;
    bool in_cycle = false, closed = false;
    size_t i = 0;
    auto letter = [&](std::vector<std::string> l) { (in_cycle ? out.cycle : out.prefix).push_back(std::move(l)); };
    while (i < s.size()) {
        char ch = s[i];
        if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',') {
            ++i;
        } else if (ch == '(') {
            if (in_cycle || closed) throw std::invalid_argument("lasso: nested '('");
            in_cycle = true;
            ++i;
        } else if (ch == ')') {
            if (!in_cycle) throw std::invalid_argument("lasso: unmatched ')'");
            in_cycle = false;
            closed = true;
            ++i;
            for (const char* suffix : {"^omega", "^\u03c9", "^w"}) {
                const std::string t = suffix;
                if (s.compare(i, t.size(), t) == 0) {
                    i += t.size();
                    break;
                }
            }
        } else if (ch == '{') {
            size_t j = s.find('}', i);
            if (j == std::string::npos) throw std::invalid_argument("lasso: unterminated '{'");
            std::vector<std::string> l;
            std::string body = s.substr(i + 1, j - i - 1);
            for (char& c : body)
                if (c == ',') c = ' ';
            std::istringstream is(body);
            std::string w;
            while (is >> w) l.push_back(w);
            letter(l);
            i = j + 1;
        } else {
            size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
            if (j == i) throw std::invalid_argument(std::string("lasso: unexpected '") + ch + "'");
            if (closed) throw std::invalid_argument("lasso: letters after the cycle");
            letter({s.substr(i, j - i)});
            i = j;
        }
    }
    if (in_cycle) throw std::invalid_argument("lasso: missing ')'");
    if (out.cycle.empty()) throw std::invalid_argument("lasso: empty cycle");
    return out;
}

Scenario parse_scenario(const std::string& text, const std::string& dir, const std::string& source) {
    std::vector<std::string> errs;
    auto err = [&](int no, const std::string& m) {
        errs.push_back(source + (no > 0 ? ":" + std::to_string(no) : "") + ": " + m);
    };
    std::vector<Section> secs;
    {
        std::istringstream is(text);
        std::string raw;
        int no = 0;
        while (std::getline(is, raw)) {
            ++no;
            std::string line = trim(raw.substr(0, raw.find('#')));
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') {
                    err(no, "malformed section header");
                    continue;
                }
                std::istringstream hs(line.substr(1, line.size() - 2));
                Section s;
                s.no = no;
                hs >> s.kind;
                std::getline(hs >> std::ws, s.name);
                s.name = trim(s.name);
                secs.push_back(s);
                continue;
            }
            size_t eq = line.find('=');
            if (eq == std::string::npos) {
                err(no, "expected 'key = value'");
                continue;
            }
            if (secs.empty()) {
                err(no, "key outside of a section");
                continue;
            }
            secs.back().lines.push_back({no, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
        }
    }

    Scenario sc;
    sc.source = source;
    sc.dir = dir;
    auto numbers = [&](const Line& l, std::vector<double>& out) {
        out.clear();
        std::istringstream is(l.value);
        std::string w;
        while (is >> w) {
            double v;
            if (!parse_number(w, v)) {
                err(l.no, "'" + w + "' is not a number");
                return false;
            }
            out.push_back(v);
        }
        return true;
    };
    auto scalar = [&](const Line& l, double& out) {
        std::vector<double> v;
        if (!numbers(l, v)) return false;
        if (v.size() != 1) {
            err(l.no, l.key + " expects one number");
            return false;
        }
        out = v[0];
        return true;
    };
    auto shape = [&](const Section& s, CZono& out) {
        bool found = false;
        for (const auto& l : s.lines) {
            std::vector<double> v;
            if (l.key == "box") {
                if (!numbers(l, v)) return false;
                if (v.size() != 4 || v[0] >= v[1] || v[2] >= v[3]) {
                    err(l.no, "box expects 'x0 x1 y0 y1' with x0 < x1, y0 < y1");
                    return false;
                }
                out = make_box(Vec2(v[0], v[2]), Vec2(v[1], v[3]));
                found = true;
            } else if (l.key == "polygon") {
                if (!numbers(l, v)) return false;
                if (v.size() < 6 || v.size() % 2) {
                    err(l.no, "polygon expects at least three 'x y' pairs");
                    return false;
                }
                std::vector<Vec2> pts;
                for (size_t i = 0; i < v.size(); i += 2) pts.emplace_back(v[i], v[i + 1]);
                if (polygon_area(convex_hull_2d(pts)) <= 1e-12) {
                    err(l.no, "degenerate polygon");
                    return false;
                }
                out = from_vertices_2d(pts);
                found = true;
            } else {
                err(l.no, "unknown key '" + l.key + "' in [" + s.kind + "]");
            }
        }
        if (!found) err(s.no, "[" + s.kind + " " + s.name + "] needs a box or polygon");
        return found;
    };

    std::set<std::string> seen;
    bool have_space = false, have_cover = false, have_spec = false;
    std::string plant_model = "bicycle";
    std::vector<double> u_box;
    double lipschitz = -1;
    std::vector<double> beta;
    double expand = -1;
    std::vector<std::pair<int, int>> links1;
    std::vector<double> seed;
    int plant_line = 0;

    for (const auto& s : secs) {
        if (s.kind == "space") {
            have_space = true;
            for (const auto& l : s.lines) {
                std::vector<double> v;
                if (l.key == "box") {
                    if (!numbers(l, v)) continue;
                    if (v.size() < 4 || v.size() % 2) {
                        err(l.no, "box expects 'lo hi' per dimension, at least two dimensions");
                        continue;
                    }
                    int n = static_cast<int>(v.size() / 2);
                    sc.lo.resize(n);
                    sc.hi.resize(n);
                    for (int i = 0; i < n; ++i) {
                        sc.lo[i] = v[2 * i];
                        sc.hi[i] = v[2 * i + 1];
                        if (sc.lo[i] >= sc.hi[i]) err(l.no, "empty interval on axis " + std::to_string(i + 1));
                    }
                } else if (l.key == "plane") {
                    if (!numbers(l, v)) continue;
                    if (v.size() != 2 || v[0] != 0 || v[1] != 1) err(l.no, "only 'plane = 0 1' is supported");
                } else {
                    err(l.no, "unknown key '" + l.key + "' in [space]");
                }
            }
        } else if (s.kind == "cover") {
            have_cover = true;
            for (const auto& l : s.lines) {
                std::vector<double> v;
                if (l.key == "expand") {
                    scalar(l, expand);
                } else if (l.key == "center") {
                    if (!numbers(l, v)) continue;
                    if (v.size() != 2) err(l.no, "center expects 'x y'");
                    else sc.cover.centers.emplace_back(v[0], v[1]);
                } else if (l.key == "link") {
                    if (!numbers(l, v)) continue;
                    if (v.size() != 2 || v[0] != std::floor(v[0]) || v[1] != std::floor(v[1]))
                        err(l.no, "link expects two 1-based center indices");
                    else links1.emplace_back(static_cast<int>(v[0]), static_cast<int>(v[1]));
                } else if (l.key == "seed") {
                    std::istringstream is(l.value);
                    std::string kind, sp;
                    is >> kind >> sp;
                    double d;
                    if (kind != "hex" || !parse_number(sp, d) || d <= 0) err(l.no, "seed expects 'hex SPACING'");
                    else seed = {d};
                } else {
                    err(l.no, "unknown key '" + l.key + "' in [cover]");
                }
            }
        } else if (s.kind == "obstacle" || s.kind == "region") {
            if (s.name.empty()) {
                err(s.no, "[" + s.kind + "] needs a name");
                continue;
            }
            if (!seen.insert(s.name).second) err(s.no, "duplicate name '" + s.name + "'");
            CZono z;
            if (!shape(s, z)) continue;
            if (s.kind == "obstacle") {
                sc.obstacle_names.push_back(s.name);
                sc.obstacles.push_back(z);
            } else {
                sc.region_names.push_back(s.name);
                sc.regions.push_back(z);
            }
        } else if (s.kind == "spec") {
            have_spec = true;
            for (const auto& l : s.lines) {
                if (l.key == "ltl") {
                    sc.ltl = l.value;
                } else if (l.key == "cosafe") {
                    sc.cosafe = l.value;
                } else if (l.key == "nba") {
                    std::filesystem::path p(l.value);
                    if (p.is_relative()) p = std::filesystem::path(dir) / p;
                    sc.nba = p.string();
                    if (!std::filesystem::exists(p)) err(l.no, "nba file not found: " + sc.nba);
                } else if (l.key == "path") {
                    try {
                        LassoText t = parse_lasso_text(l.value);
                        for (auto& x : t.prefix) {
                            if (x.size() != 1) throw std::invalid_argument("path letters must be single propositions");
                            sc.path_prefix.push_back(x[0]);
                        }
                        for (auto& x : t.cycle) {
                            if (x.size() != 1) throw std::invalid_argument("path letters must be single propositions");
                            sc.path_cycle.push_back(x[0]);
                        }
                    } catch (const std::exception& e) {
                        err(l.no, e.what());
                    }
                } else if (l.key == "init") {
                    std::istringstream is(l.value);
                    std::string w;
                    while (is >> w) sc.init_props.push_back(w);
                } else {
                    err(l.no, "unknown key '" + l.key + "' in [spec]");
                }
            }
        } else if (s.kind == "params") {
            for (const auto& l : s.lines) {
                double v = 0;
                if (l.key == "tau") scalar(l, sc.tau);
                else if (l.key == "eps") scalar(l, sc.eps);
                else if (l.key == "mu") scalar(l, sc.mu);
                else if (l.key.rfind("mu.", 0) == 0) {
                    if (scalar(l, v)) sc.mu_cell[l.key.substr(3)] = v;
                } else if (l.key.rfind("eps.", 0) == 0) {
                    if (scalar(l, v)) sc.eps_cell[l.key.substr(4)] = v;
                } else if (l.key == "eta") scalar(l, sc.eta);
                else if (l.key == "input_step") scalar(l, sc.input_step);
                else if (l.key == "conn_delta") scalar(l, sc.conn_delta);
                else if (l.key == "horizon") {
                    if (scalar(l, v)) sc.horizon = static_cast<int>(v);
                } else if (l.key == "rk4_steps") {
                    if (scalar(l, v)) sc.rk4_steps = static_cast<int>(v);
                } else if (l.key == "relation") {
                    if (l.value == "frr") sc.relation = Relation::frr;
                    else if (l.value == "abr") sc.relation = Relation::abr;
                    else err(l.no, "relation must be frr or abr");
                } else if (l.key == "lattice") {
                    if (l.value == "full") sc.lattice = LatticeMode::full;
                    else if (l.value == "reduced") sc.lattice = LatticeMode::reduced;
                    else err(l.no, "lattice must be full or reduced");
                } else {
                    err(l.no, "unknown key '" + l.key + "' in [params]");
                }
            }
        } else if (s.kind == "plant") {
            plant_line = s.no;
            for (const auto& l : s.lines) {
                if (l.key == "model") plant_model = l.value;
                else if (l.key == "inputs") numbers(l, u_box);
                else if (l.key == "lipschitz") scalar(l, lipschitz);
                else if (l.key == "beta") numbers(l, beta);
                else err(l.no, "unknown key '" + l.key + "' in [plant]");
            }
        } else {
            err(s.no, "unknown section [" + s.kind + "]");
        }
    }
    if (!have_space) err(0, "missing [space] section");
    if (!have_cover) err(0, "missing [cover] section");
    if (!have_spec) err(0, "missing [spec] section");
    if (have_space && sc.lo.size() < 2) err(0, "[space] needs 'box'");

    if (sc.lo.size() >= 2) {
        try {
            sc.plant = make_plant(plant_model, static_cast<int>(sc.lo.size()));
            if (sc.plant.n != sc.lo.size())
                err(plant_line, "plant '" + plant_model + "' has dimension " + std::to_string(sc.plant.n) +
                                    " but the space has " + std::to_string(sc.lo.size()));
        } catch (const std::exception& e) {
            err(plant_line, e.what());
        }
        if (!u_box.empty()) {
            if (static_cast<int>(u_box.size()) != 2 * sc.plant.m) {
                err(plant_line, "inputs expects 'lo hi' per input");
            } else {
                for (int i = 0; i < sc.plant.m; ++i) {
                    sc.plant.u_lo[i] = u_box[2 * i];
                    sc.plant.u_hi[i] = u_box[2 * i + 1];
                }
            }
        }
        if (lipschitz >= 0) sc.plant.lipschitz = lipschitz;
        if (!beta.empty()) {
            if (beta.size() != 2 || beta[0] <= 0 || beta[1] <= 0) err(plant_line, "beta expects 'C lambda' > 0");
            else sc.plant.beta = Beta{beta[0], beta[1]};
        }
        Vec2 plo(sc.lo[0], sc.lo[1]), phi(sc.hi[0], sc.hi[1]);
        sc.cover.lo = plo;
        sc.cover.hi = phi;
        int extra = static_cast<int>(sc.lo.size()) - 2;
        sc.cover.extra_lo = sc.lo.tail(extra);
        sc.cover.extra_hi = sc.hi.tail(extra);
        auto inside = [&](const CZono& z) {
            auto [a, b] = bounding_box(z);
            return a[0] >= plo[0] - 1e-9 && a[1] >= plo[1] - 1e-9 && b[0] <= phi[0] + 1e-9 && b[1] <= phi[1] + 1e-9;
        };
        for (size_t i = 0; i < sc.obstacles.size(); ++i)
            if (!inside(sc.obstacles[i])) err(0, "obstacle '" + sc.obstacle_names[i] + "' leaves the state space");
        for (size_t i = 0; i < sc.regions.size(); ++i)
            if (!inside(sc.regions[i])) err(0, "region '" + sc.region_names[i] + "' leaves the state space");
        if (!seed.empty()) {
            CoverConfig c = seed_hex(plo, phi, seed[0], expand > 0 ? expand : 0.0);
            sc.cover.centers = c.centers;
            sc.cover.links = c.links;
        }
        for (const auto& c : sc.cover.centers)
            if (c[0] < plo[0] || c[0] > phi[0] || c[1] < plo[1] || c[1] > phi[1])
                err(0, "cover center outside the state space");
    }
    const int nc = static_cast<int>(sc.cover.centers.size());
    for (auto [i, j] : links1) {
        if (i < 1 || j < 1 || i > nc || j > nc || i == j) err(0, "link " + std::to_string(i) + " " + std::to_string(j) +
                                                                 " does not name two distinct centers");
        else sc.cover.links.emplace_back(i - 1, j - 1);
    }
    if (have_cover && nc == 0) err(0, "[cover] needs centers or a seed");
    if (expand <= 0) {
        if (have_cover) err(0, "[cover] expand must be positive");
    } else {
        sc.cover.expand_eps = expand;
    }
    if (sc.tau <= 0) err(0, "tau must be positive");
    if (sc.eps <= 0) err(0, "eps must be positive");
    if (sc.mu <= 0) err(0, "mu must be positive");
    for (auto& [k, v] : sc.mu_cell)
        if (v <= 0) err(0, "mu." + k + " must be positive");
    for (auto& [k, v] : sc.eps_cell)
        if (v <= 0 || (expand > 0 && v > expand)) err(0, "eps." + k + " must lie in (0, expansion]");
    if (sc.eta < 0) err(0, "eta must be non-negative");
    if (sc.input_step <= 0) err(0, "input_step must be positive");
    if (sc.horizon < 0) err(0, "horizon must be non-negative");
    if (sc.rk4_steps < 1) err(0, "rk4_steps must be at least 1");
    if (expand > 0 && sc.eps > expand)
        err(0, "eps (" + std::to_string(sc.eps) + ") exceeds the cover expansion (" + std::to_string(expand) +
                   "); eps must lie in (0, expansion]");
    if (have_spec) {
        if (sc.nba.empty() && sc.path_cycle.empty()) err(0, "[spec] needs 'nba' or 'path'");
        std::set<std::string> names(sc.region_names.begin(), sc.region_names.end());
        for (const auto& p : sc.path_prefix)
            if (!names.count(p)) err(0, "path proposition '" + p + "' has no region");
        for (const auto& p : sc.path_cycle)
            if (!names.count(p)) err(0, "path proposition '" + p + "' has no region");
        if (sc.init_props.empty() && !sc.region_names.empty()) sc.init_props.push_back(sc.region_names.front());
        for (const auto& p : sc.init_props)
            if (!names.count(p)) err(0, "init proposition '" + p + "' has no region");
    }
    if (!errs.empty()) throw ScenarioError(errs);
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ScenarioError({path + ": cannot open"});
    std::stringstream ss;
    ss << f.rdbuf();
    std::filesystem::path p(path);
    return parse_scenario(ss.str(), p.parent_path().empty() ? "." : p.parent_path().string(), path);
}

}  // namespace zp
