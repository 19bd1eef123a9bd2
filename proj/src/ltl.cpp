#include "zonoplan/ltl.hpp"

#include <cctype>
#include <functional>
#include <unordered_map>

namespace zp {

namespace {

LtlPtr node(LtlOp op, LtlPtr a = nullptr, LtlPtr b = nullptr, std::string atom = {}) {
    auto n = std::make_shared<Ltl>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    n->atom = std::move(atom);
    return n;
}

enum class Tok { Atom, True, False, Not, And, Or, Next, Until, Eventually, Always, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    size_t pos;
};

std::vector<Token> tokenize(const std::string& s) {
    std::vector<Token> out;
    size_t i = 0;
    auto starts = [&](const char* lit) { return s.compare(i, std::char_traits<char>::length(lit), lit) == 0; };
    while (i < s.size()) {
        unsigned char ch = static_cast<unsigned char>(s[i]);
        if (std::isspace(ch)) {
            ++i;
            continue;
        }
        size_t p = i;
        struct Alias {
            const char* lit;
            Tok kind;
        };
        static const Alias aliases[] = {{"\xC2\xAC", Tok::Not},          {"\xE2\x88\xA7", Tok::And},
                                        {"\xE2\x88\xA8", Tok::Or},       {"\xE2\x97\x8B", Tok::Next},
                                        {"\xE2\x97\x87", Tok::Eventually}, {"\xE2\x96\xA1", Tok::Always},
                                        {"&&", Tok::And},                {"||", Tok::Or}};
        bool matched = false;
        for (const auto& a : aliases) {
            if (starts(a.lit)) {
                out.push_back({a.kind, a.lit, p});
                i += std::char_traits<char>::length(a.lit);
                matched = true;
                break;
            }
        }
        if (matched) continue;
        switch (ch) {
            case '!': out.push_back({Tok::Not, "!", p}); ++i; continue;
            case '~': out.push_back({Tok::Not, "~", p}); ++i; continue;
            case '&': out.push_back({Tok::And, "&", p}); ++i; continue;
            case '|': out.push_back({Tok::Or, "|", p}); ++i; continue;
            case '(': out.push_back({Tok::LParen, "(", p}); ++i; continue;
            case ')': out.push_back({Tok::RParen, ")", p}); ++i; continue;
            default: break;
        }
        if (std::isalpha(ch) || ch == '_') {
            size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
            std::string w = s.substr(i, j - i);
            Tok k = Tok::Atom;
            if (w == "X") k = Tok::Next;
            else if (w == "U") k = Tok::Until;
            else if (w == "F") k = Tok::Eventually;
            else if (w == "G") k = Tok::Always;
            else if (w == "true") k = Tok::True;
            else if (w == "false") k = Tok::False;
            out.push_back({k, w, p});
            i = j;
            continue;
        }
        throw LtlSyntaxError(p, std::string("unexpected character '") + s[i] + "'");
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

class Parser {
public:
    explicit Parser(const std::string& s) : toks_(tokenize(s)) {}

    LtlPtr parse() {
        LtlPtr f = disj();
        if (peek().kind != Tok::End) throw LtlSyntaxError(peek().pos, "unexpected '" + peek().text + "'");
        return f;
    }

private:
    std::vector<Token> toks_;
    size_t k_ = 0;

    const Token& peek() const { return toks_[k_]; }
    Token take() { return toks_[k_++]; }

    LtlPtr disj() {
        LtlPtr f = conj();
        while (peek().kind == Tok::Or) {
            take();
            f = ltl_or(f, conj());
        }
        return f;
    }
    LtlPtr conj() {
        LtlPtr f = until();
        while (peek().kind == Tok::And) {
            take();
            f = ltl_and(f, until());
        }
        return f;
    }
    LtlPtr until() {
        LtlPtr f = unary();
        if (peek().kind == Tok::Until) {
            take();
            return ltl_until(f, until());
        }
        return f;
    }
    LtlPtr unary() {
        switch (peek().kind) {
            case Tok::Not: take(); return ltl_not(unary());
            case Tok::Next: take(); return ltl_next(unary());
            case Tok::Eventually: take(); return ltl_eventually(unary());
            case Tok::Always: take(); return ltl_always(unary());
            default: return primary();
        }
    }
    LtlPtr primary() {
        Token t = take();
        switch (t.kind) {
            case Tok::True: return ltl_true();
            case Tok::False: return ltl_not(ltl_true());
            case Tok::Atom: return ltl_atom(t.text);
            case Tok::LParen: {
                LtlPtr f = disj();
                if (peek().kind != Tok::RParen) throw LtlSyntaxError(peek().pos, "expected ')'");
                take();
                return f;
            }
            case Tok::End: throw LtlSyntaxError(t.pos, "expected operand at end of input");
            default: throw LtlSyntaxError(t.pos, "expected operand, found '" + t.text + "'");
        }
    }
};

bool is_eventually(const LtlPtr& f) { return f->op == LtlOp::Until && f->a->op == LtlOp::True; }
bool is_always(const LtlPtr& f) {
    return f->op == LtlOp::Not && is_eventually(f->a) && f->a->b->op == LtlOp::Not;
}

}  // namespace

LtlPtr ltl_true() { return node(LtlOp::True); }
LtlPtr ltl_atom(const std::string& name) { return node(LtlOp::Atom, nullptr, nullptr, name); }
LtlPtr ltl_not(LtlPtr a) { return node(LtlOp::Not, std::move(a)); }
LtlPtr ltl_and(LtlPtr a, LtlPtr b) { return node(LtlOp::And, std::move(a), std::move(b)); }
LtlPtr ltl_or(LtlPtr a, LtlPtr b) { return node(LtlOp::Or, std::move(a), std::move(b)); }
LtlPtr ltl_next(LtlPtr a) { return node(LtlOp::Next, std::move(a)); }
LtlPtr ltl_until(LtlPtr a, LtlPtr b) { return node(LtlOp::Until, std::move(a), std::move(b)); }
LtlPtr ltl_eventually(LtlPtr a) { return ltl_until(ltl_true(), std::move(a)); }
LtlPtr ltl_always(LtlPtr a) { return ltl_not(ltl_eventually(ltl_not(std::move(a)))); }

LtlPtr parse_ltl(const std::string& text) { return Parser(text).parse(); }

std::string to_string(const LtlPtr& f) {
    switch (f->op) {
        case LtlOp::True: return "true";
        case LtlOp::Atom: return f->atom;
        case LtlOp::Not:
            if (is_always(f)) return "G " + to_string(f->a->b->a);
            if (f->a->op == LtlOp::True) return "false";
            return "!" + to_string(f->a);
        case LtlOp::Next: return "X " + to_string(f->a);
        case LtlOp::And: return "(" + to_string(f->a) + " & " + to_string(f->b) + ")";
        case LtlOp::Or: return "(" + to_string(f->a) + " | " + to_string(f->b) + ")";
        case LtlOp::Until:
            if (is_eventually(f)) return "F " + to_string(f->b);
            return "(" + to_string(f->a) + " U " + to_string(f->b) + ")";
    }
    return "?";
}

bool ltl_equal(const LtlPtr& x, const LtlPtr& y) {
    if (x->op != y->op) return false;
    switch (x->op) {
        case LtlOp::True: return true;
        case LtlOp::Atom: return x->atom == y->atom;
        case LtlOp::Not:
        case LtlOp::Next: return ltl_equal(x->a, y->a);
        default: return ltl_equal(x->a, y->a) && ltl_equal(x->b, y->b);
    }
}

std::set<std::string> ltl_atoms(const LtlPtr& f) {
    std::set<std::string> out;
    std::function<void(const LtlPtr&)> walk = [&](const LtlPtr& g) {
        if (!g) return;
        if (g->op == LtlOp::Atom) out.insert(g->atom);
        walk(g->a);
        walk(g->b);
    };
    walk(f);
    return out;
}

bool is_propositional(const LtlPtr& f) {
    if (!f) return true;
    if (f->op == LtlOp::Next || f->op == LtlOp::Until) return false;
    return is_propositional(f->a) && is_propositional(f->b);
}

int ltl_depth(const LtlPtr& f) {
    if (!f) return 0;
    return 1 + std::max(ltl_depth(f->a), ltl_depth(f->b));
}

bool eval_letter(const LtlPtr& f, const Letter& l) {
    switch (f->op) {
        case LtlOp::True: return true;
        case LtlOp::Atom: return l.count(f->atom) > 0;
        case LtlOp::Not: return !eval_letter(f->a, l);
        case LtlOp::And: return eval_letter(f->a, l) && eval_letter(f->b, l);
        case LtlOp::Or: return eval_letter(f->a, l) || eval_letter(f->b, l);
        default: throw std::invalid_argument("eval_letter: temporal operator in a guard");
    }
}

bool check_lasso(const LtlPtr& f, const std::vector<Letter>& prefix, const std::vector<Letter>& cycle,
                 const std::set<std::string>* declared) {
    if (cycle.empty()) throw std::invalid_argument("check_lasso: empty cycle");
    if (declared)
        for (const auto& a : ltl_atoms(f))
            if (!declared->count(a)) throw std::invalid_argument("check_lasso: undeclared atom " + a);
    if (declared)
        for (const auto* part : {&prefix, &cycle})
            for (const auto& l : *part)
                for (const auto& a : l)
                    if (!declared->count(a)) throw std::invalid_argument("check_lasso: undeclared atom " + a + " in word");
    const int P = static_cast<int>(prefix.size());
    const int N = P + static_cast<int>(cycle.size());
    auto letter = [&](int i) -> const Letter& { return i < P ? prefix[i] : cycle[i - P]; };
    auto next = [&](int i) { return i + 1 < N ? i + 1 : P; };
    std::unordered_map<const Ltl*, std::vector<char>> memo;
    std::function<const std::vector<char>&(const LtlPtr&)> val = [&](const LtlPtr& g) -> const std::vector<char>& {
        auto it = memo.find(g.get());
        if (it != memo.end()) return it->second;
        std::vector<char> v(N, 0);
        switch (g->op) {
            case LtlOp::True: std::fill(v.begin(), v.end(), 1); break;
            case LtlOp::Atom:
                for (int i = 0; i < N; ++i) v[i] = letter(i).count(g->atom) > 0;
                break;
            case LtlOp::Not: {
                const auto& a = val(g->a);
                for (int i = 0; i < N; ++i) v[i] = !a[i];
                break;
            }
            case LtlOp::And: {
                const auto& a = val(g->a);
                const auto& b = val(g->b);
                for (int i = 0; i < N; ++i) v[i] = a[i] && b[i];
                break;
            }
            case LtlOp::Or: {
                const auto& a = val(g->a);
                const auto& b = val(g->b);
                for (int i = 0; i < N; ++i) v[i] = a[i] || b[i];
                break;
            }
            case LtlOp::Next: {
                const auto& a = val(g->a);
                for (int i = 0; i < N; ++i) v[i] = a[next(i)];
                break;
            }
            case LtlOp::Until: {
                const auto& a = val(g->a);
                const auto& b = val(g->b);
                // least fixed point, iterated from all-false
                bool changed = true;
                while (changed) {
                    changed = false;
                    for (int i = N - 1; i >= 0; --i) {
                        char nv = b[i] || (a[i] && v[next(i)]);
                        if (nv != v[i]) {
                            v[i] = nv;
                            changed = true;
                        }
                    }
                }
                break;
            }
        }
        return memo.emplace(g.get(), std::move(v)).first->second;
    };
    return val(f)[0];
}

}  // namespace zp
