#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "groveq/graph.hpp"
#include "groveq/semantics.hpp"

namespace groveq {

// A context-free grammar over word tokens. Terminals are letter tokens,
// variables x1..xp act as terminals of the target sort. One start symbol per
// root of the encoded graph.
struct Cfg {
    std::set<std::string> terminals;
    std::set<std::string> nonterminals;
    std::vector<std::string> starts;
    // Right-hand sides are token lists; a token is either a terminal, a
    // variable marker "x<j>", or a nonterminal.
    std::map<std::string, std::vector<std::vector<std::string>>> productions;
};

// Checks referential integrity; throws domain_error on dangling symbols.
void cfg_validate(const Cfg& g);

// Re-presents a graph over a ranked alphabet as a graph over a unary one.
// Each action edge becomes a branch state: the letter itself now has rank 1
// and leads to the branch, which hangs one #-chain of length i to the i-th
// original target, so the child position is recoverable from the marker
// count. Rank-0 letters keep their name and lead to a shared dead state.
// The output alphabet is every input name at rank 1 plus the marker #.
ProcessGraph encode_unary(const ProcessGraph& g, const RankedAlphabet& sigma,
                          RankedAlphabet* sigma_out);

// Reads a graph all of whose action letters have rank 0 or 1 as a grammar:
// state v yields N_v, an edge v -a-> w yields N_v -> a R_v_w with
// R_v_w -> eps | R_v_w # N_w $, exits yield N_v -> x_j. Throws on rank >= 2.
Cfg encode_cfg(const ProcessGraph& g, const RankedAlphabet& sigma);

// All words of length <= max_len derivable from each start symbol, sorted by
// length then lexicographically.
std::vector<std::vector<Word>> cfg_enumerate(const Cfg& g, int max_len);

// Membership for one word from the given start (0-based index into starts).
bool cfg_member(const Cfg& g, int start, const Word& w);

// A word separating the languages of two unary-letter graphs of equal sort
// 1 -> p, derived from the simulation game that g wins against h. The result
// is a member of g's language and not of h's; both facts are re-checked
// through the grammars and an internal error is raised if the game and the
// grammars disagree.
Word distinguishing_word(const ProcessGraph& g, const ProcessGraph& h,
                         const RankedAlphabet& sigma);

// The trees t_0 .. t_k over a binary letter `cat` and leaves {a, #, $, x1}
// whose frontiers are a(#x1$)^i for i = 0..k; they present the grammar
// language of a unary letter as frontiers of a regular tree family.
std::vector<TreeObj> emb2_generator(const std::string& letter, int k);

// Grammar in displayable form, productions sorted, `_eps_` for the empty
// right-hand side.
std::string to_string(const Cfg& g);

}  // namespace groveq
