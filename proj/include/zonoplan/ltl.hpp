#pragma once

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace zp {

// Desugared LTL: F a = true U a, G a = !(true U !a), false = !true.
enum class LtlOp { True, Atom, Not, And, Or, Next, Until };

struct Ltl;
using LtlPtr = std::shared_ptr<const Ltl>;

struct Ltl {
    LtlOp op = LtlOp::True;
    std::string atom;
    LtlPtr a, b;
};

class LtlSyntaxError : public std::runtime_error {
public:
    LtlSyntaxError(size_t pos, const std::string& msg)
        : std::runtime_error("at " + std::to_string(pos) + ": " + msg), pos_(pos) {}
    size_t position() const { return pos_; }

private:
    size_t pos_;
};

LtlPtr ltl_true();
LtlPtr ltl_atom(const std::string& name);
LtlPtr ltl_not(LtlPtr a);
LtlPtr ltl_and(LtlPtr a, LtlPtr b);
LtlPtr ltl_or(LtlPtr a, LtlPtr b);
LtlPtr ltl_next(LtlPtr a);
LtlPtr ltl_until(LtlPtr a, LtlPtr b);
LtlPtr ltl_eventually(LtlPtr a);
LtlPtr ltl_always(LtlPtr a);

// Operators: ! X F G (unary) > U (right assoc) > & > |.
// Unicode aliases: ¬ ○ ◇ □ ∧ ∨.
LtlPtr parse_ltl(const std::string& text);
std::string to_string(const LtlPtr& f);
bool ltl_equal(const LtlPtr& x, const LtlPtr& y);
std::set<std::string> ltl_atoms(const LtlPtr& f);
bool is_propositional(const LtlPtr& f);
int ltl_depth(const LtlPtr& f);

using Letter = std::set<std::string>;

// Evaluate a propositional formula on one letter.
bool eval_letter(const LtlPtr& f, const Letter& l);

// Exact semantics on prefix . cycle^w. If declared is given, atoms outside it
// are rejected, in the formula and in the word.
bool check_lasso(const LtlPtr& f, const std::vector<Letter>& prefix, const std::vector<Letter>& cycle,
                 const std::set<std::string>* declared = nullptr);

}  // namespace zp
