#pragma once

#include <map>
#include <random>
#include <string>

#include "groveq/encode.hpp"
#include "groveq/graph.hpp"
#include "groveq/semantics.hpp"
#include "groveq/simulation.hpp"
#include "groveq/term.hpp"

namespace groveq {

enum class Direction { lhs_not_below_rhs, rhs_not_below_lhs };

std::string to_string(Direction d);

// Outcome of an identity check. On failure it carries enough data to exhibit
// the failure concretely: a grammar interpretation per variable and a word
// generated by exactly one side's encoding.
struct Verdict {
    bool equivalent = false;
    Direction direction = Direction::lhs_not_below_rhs;
    int failing_root = 0;  // 1-based root where simulation first fails
    Word witness_word;
    RankedAlphabet generic_alphabet;
    std::map<std::string, Cfg> interpretation;  // per variable
};

struct GenericInterp {
    RankedAlphabet alphabet;  // declared letters plus the fresh ones
    std::map<std::string, ProcessGraph> graphs;  // per variable
};

// Interprets each variable v: k -> m by k fresh letters v_1..v_k of rank m,
// tupled. Fresh names are suffixed with underscores if they collide with
// declared letters. Declared letters interpret as themselves.
GenericInterp generic_interp(const std::map<std::string, Sort>& vars,
                             const Signature& sig);

// Structural evaluation of a desugared, sort-annotated term to a graph.
// Variables come from interp; letters map to their single-edge graphs unless
// interp overrides them.
ProcessGraph compile(const Term& t,
                     const std::map<std::string, ProcessGraph>& interp);

// Decides whether lhs = rhs holds in every model, by simulation equivalence
// of the compiled graphs under the generic interpretation. On failure,
// reports the direction, the first failing root, a grammar per variable, and
// a verified witness word separating the two encodings.
Verdict check_identity(const Term& lhs, const Term& rhs, const Signature& sig);

// One-line JSON rendering of a verdict.
std::string verdict_json(const Verdict& v);

// Letter names occurring in a term.
std::set<std::string> used_letters(const Term& t);

// Random finite interpretations for cross-checking verdicts against bounded
// evaluation: each name gets per-component sets of at most 3 words (length
// at most 3) or trees (at most 7 nodes).
std::map<std::string, WordLang> sample_word_interp(
    const std::map<std::string, Sort>& names, std::mt19937& rng);
std::map<std::string, TreeLang> sample_tree_interp(
    const std::map<std::string, Sort>& names, std::mt19937& rng);

// Cross-checks an Equivalent verdict against bounded word and tree semantics
// under random interpretations. Returns an empty string when every sample
// agrees, else a description of the first discrepancy. A NotEquivalent
// verdict is never contradicted by bounded agreement, so it only re-checks
// the witness through the grammars.
std::string oracle_check(const Term& lhs, const Term& rhs,
                         const Signature& sig, const Verdict& v,
                         int word_samples, int tree_samples, Bound b,
                         unsigned seed);

}  // namespace groveq
