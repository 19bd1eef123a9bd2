#include "zonoplan/nba.hpp"

#include <fstream>
#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace zp {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

}  // namespace

int Nba::index_of(const std::string& s) const {
    for (size_t i = 0; i < states.size(); ++i)
        if (states[i] == s) return static_cast<int>(i);
    return -1;
}

Nba parse_nba(const std::string& text, const std::set<std::string>* declared) {
    Nba b;
    auto state = [&](const std::string& name) {
        int i = b.index_of(name);
        if (i >= 0) return i;
        b.states.push_back(name);
        b.accepting.push_back(0);
        return static_cast<int>(b.states.size()) - 1;
    };
    std::vector<std::string> init_names, acc_names;
    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw std::runtime_error("nba line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(is, raw)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        line = trim(line);
        if (line.empty()) continue;
        if (line.rfind("init:", 0) == 0) {
            for (auto& w : words(line.substr(5))) init_names.push_back(w);
            continue;
        }
        if (line.rfind("accepting:", 0) == 0) {
            for (auto& w : words(line.substr(10))) acc_names.push_back(w);
            continue;
        }
        size_t a = line.find("--");
        size_t c = line.rfind("-->");
        if (a == std::string::npos || c == std::string::npos || c <= a) fail("expected 'src -- guard --> dst'");
        std::string src = trim(line.substr(0, a));
        std::string guard = trim(line.substr(a + 2, c - a - 2));
        std::string dst = trim(line.substr(c + 3));
        if (src.empty() || dst.empty() || words(src).size() != 1 || words(dst).size() != 1)
            fail("bad state name");
        if (guard.empty()) fail("empty guard");
        LtlPtr g;
        try {
            g = parse_ltl(guard);
        } catch (const LtlSyntaxError& e) {
            fail(std::string("guard ") + e.what());
        }
        if (!is_propositional(g)) fail("guard uses a temporal operator");
        if (declared)
            for (const auto& at : ltl_atoms(g))
                if (!declared->count(at)) fail("undeclared proposition " + at);
        int s = state(src);
        int d = state(dst);
        b.transitions.push_back({s, g, d});
    }
    if (init_names.empty()) throw std::runtime_error("nba: no initial state");
    if (acc_names.empty()) throw std::runtime_error("nba: no accepting state");
    for (auto& n : init_names) b.initial.push_back(state(n));
    for (auto& n : acc_names) b.accepting[state(n)] = 1;
    return b;
}

Nba load_nba(const std::string& path, const std::set<std::string>* declared) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_nba(ss.str(), declared);
}

std::string to_text(const Nba& b) {
    std::ostringstream os;
    os << "init:";
    for (int i : b.initial) os << ' ' << b.states[i];
    os << "\naccepting:";
    for (size_t i = 0; i < b.states.size(); ++i)
        if (b.accepting[i]) os << ' ' << b.states[i];
    os << '\n';
    for (const auto& t : b.transitions)
        os << b.states[t.src] << " -- " << to_string(t.guard) << " --> " << b.states[t.dst] << '\n';
    return os.str();
}

Kripke complete_kripke(const std::vector<std::string>& props, const std::vector<std::string>& initial) {
    Kripke k;
    k.props = props;
    const size_t n = props.size();
    k.trans.assign(n, std::vector<char>(n, 1));
    for (const auto& s : initial) {
        auto it = std::find(props.begin(), props.end(), s);
        if (it == props.end()) throw std::invalid_argument("kripke: unknown initial proposition " + s);
        k.initial.push_back(static_cast<int>(it - props.begin()));
    }
    return k;
}

std::string AcceptingPath::render() const {
    std::string s;
    for (const auto& p : prefix) s += p + " ";
    s += "(";
    for (size_t i = 0; i < cycle.size(); ++i) s += (i ? " " : "") + cycle[i];
    s += ")^w";
    return s;
}

AcceptingPath normalize_lasso(AcceptingPath p) {
    const size_t n = p.cycle.size();
    for (size_t per = 1; per < n; ++per) {
        if (n % per) continue;
        bool ok = true;
        for (size_t i = per; i < n && ok; ++i) ok = p.cycle[i] == p.cycle[i - per];
        if (ok) {
            p.cycle.resize(per);
            break;
        }
    }
    while (!p.prefix.empty() && p.prefix.back() == p.cycle.back()) {
        p.cycle.insert(p.cycle.begin(), p.cycle.back());
        p.cycle.pop_back();
        p.prefix.pop_back();
    }
    return p;
}

std::optional<AcceptingPath> product_search(const Kripke& k, const Nba& b, size_t* product_states) {
    const int nk = static_cast<int>(k.props.size());
    const int nq = static_cast<int>(b.states.size());
    std::vector<std::vector<const NbaTransition*>> out(nq);
    for (const auto& t : b.transitions) out[t.src].push_back(&t);
    std::vector<Letter> labels(nk);
    for (int i = 0; i < nk; ++i) labels[i] = k.label(i);

    auto id = [&](int kk, int q) { return kk * nq + q; };
    auto succ = [&](int s) {
        std::vector<int> r;
        int kk = s / nq, q = s % nq;
        for (const auto* t : out[q])
            for (int k2 = 0; k2 < nk; ++k2)
                if (k.trans[kk][k2] && eval_letter(t->guard, labels[k2])) r.push_back(id(k2, t->dst));
        return r;
    };
    std::vector<int> roots;
    for (int k0 : k.initial)
        for (int q0 : b.initial)
            for (const auto* t : out[q0])
                if (eval_letter(t->guard, labels[k0])) roots.push_back(id(k0, t->dst));

    const int N = nk * nq;
    std::vector<char> visited(N, 0);
    size_t count = 0;
    struct Frame {
        int s;
        std::vector<int> next;
        size_t i = 0;
    };
    // cycle through s, searched depth first in successor order; empty if none
    auto cycle_through = [&](int s) {
        std::vector<char> seen(N, 0);
        std::vector<Frame> inner;
        inner.push_back({s, succ(s)});
        while (!inner.empty()) {
            Frame& g = inner.back();
            if (g.i == g.next.size()) {
                inner.pop_back();
                continue;
            }
            int t = g.next[g.i++];
            if (t == s) {
                std::vector<int> c;
                for (const auto& h : inner) c.push_back(h.s);
                return c;
            }
            if (!seen[t]) {
                seen[t] = 1;
                inner.push_back({t, succ(t)});
            }
        }
        return std::vector<int>{};
    };
    // accepting states are tested when first reached, each with its own inner search
    for (int root : roots) {
        if (visited[root]) continue;
        std::vector<Frame> stack;
        auto enter = [&](int t) {
            visited[t] = 1;
            ++count;
            stack.push_back({t, succ(t)});
            if (!b.accepting[t % nq]) return false;
            auto c = cycle_through(t);
            if (c.empty()) return false;
            if (product_states) *product_states = count;
            return true;
        };
        auto result = [&] {
            std::vector<int> c = cycle_through(stack.back().s);
            AcceptingPath p;
            for (size_t i = 0; i + 1 < stack.size(); ++i) p.prefix.push_back(k.props[stack[i].s / nq]);
            for (int s : c) p.cycle.push_back(k.props[s / nq]);
            return normalize_lasso(p);
        };
        if (enter(root)) return result();
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.i == f.next.size()) {
                stack.pop_back();
                continue;
            }
            int t = f.next[f.i++];
            if (!visited[t] && enter(t)) return result();
        }
    }
    if (product_states) *product_states = count;
    return std::nullopt;
}

bool nba_accepts(const Nba& b, const std::vector<Letter>& prefix, const std::vector<Letter>& cycle) {
    if (cycle.empty()) throw std::invalid_argument("nba_accepts: empty cycle");
    const int P = static_cast<int>(prefix.size());
    const int L = P + static_cast<int>(cycle.size());
    const int nq = static_cast<int>(b.states.size());
    auto letter = [&](int i) -> const Letter& { return i < P ? prefix[i] : cycle[i - P]; };
    // node (i, q): about to read position i in state q
    auto nxt = [&](int i) { return i + 1 < L ? i + 1 : P; };
    const int N = L * nq;
    std::vector<std::vector<int>> adj(N);
    for (int i = 0; i < L; ++i)
        for (const auto& t : b.transitions)
            if (eval_letter(t.guard, letter(i))) adj[i * nq + t.src].push_back(nxt(i) * nq + t.dst);
    std::vector<char> reach(N, 0);
    std::vector<int> st;
    for (int q : b.initial)
        if (!reach[q]) reach[q] = 1, st.push_back(q);
    while (!st.empty()) {
        int u = st.back();
        st.pop_back();
        for (int v : adj[u])
            if (!reach[v]) reach[v] = 1, st.push_back(v);
    }
    // accepting node on a cycle: v reaches itself
    for (int v = 0; v < N; ++v) {
        if (!reach[v] || !b.accepting[v % nq]) continue;
        std::vector<char> seen(N, 0);
        std::vector<int> s2(adj[v].begin(), adj[v].end());
        while (!s2.empty()) {
            int u = s2.back();
            s2.pop_back();
            if (u == v) return true;
            if (seen[u]) continue;
            seen[u] = 1;
            for (int w : adj[u]) s2.push_back(w);
        }
    }
    return false;
}

}  // namespace zp
