#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zonoplan/ltl.hpp"

namespace zp {

struct NbaTransition {
    int src = 0;
    LtlPtr guard;  // propositional
    int dst = 0;
};

struct Nba {
    std::vector<std::string> states;
    std::vector<int> initial;
    std::vector<char> accepting;
    std::vector<NbaTransition> transitions;  // file order

    int index_of(const std::string& s) const;
};

// Text format, '#' starts a comment:
//   init: q0
//   accepting: q3 q4
//   q0 -- !p1 & !p2 --> q0
Nba parse_nba(const std::string& text, const std::set<std::string>* declared = nullptr);
Nba load_nba(const std::string& path, const std::set<std::string>* declared = nullptr);
std::string to_text(const Nba& b);

struct Kripke {
    std::vector<std::string> props;
    std::vector<int> initial;
    std::vector<std::vector<char>> trans;
    // identity labelling: L(pi) = {pi}
    Letter label(int k) const { return {props[k]}; }
};

Kripke complete_kripke(const std::vector<std::string>& props, const std::vector<std::string>& initial);

struct AcceptingPath {
    std::vector<std::string> prefix;
    std::vector<std::string> cycle;
    std::string render() const;
};

// Nested depth-first search over the product in transition-file order, then
// Kripke order. nullopt when no accepting run exists.
std::optional<AcceptingPath> product_search(const Kripke& k, const Nba& b, size_t* product_states = nullptr);

// Shortest cycle period, then rotate the loop back into the prefix.
AcceptingPath normalize_lasso(AcceptingPath p);

// Whether the automaton accepts prefix . cycle^w.
bool nba_accepts(const Nba& b, const std::vector<Letter>& prefix, const std::vector<Letter>& cycle);

}  // namespace zp
