#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "groveq/term.hpp"

namespace groveq {

// Size cap for the bounded power-set semantics. Objects whose measure (word
// length, tree node count) exceeds max_size are dropped; substitution never
// shrinks the measure, so dropped objects have no within-bound descendants.
struct Bound {
    int max_size = 0;
};

// One symbol of a word: a letter, or the j-th morphism variable x_j.
struct WordToken {
    int var = 0;  // 0 for letters, else 1-based variable index
    std::string letter;

    friend auto operator<=>(const WordToken&, const WordToken&) = default;
};

using Word = std::vector<WordToken>;

WordToken letter_token(std::string name);
WordToken var_token(int j);

// Finite tree over a ranked alphabet with variable leaves.
struct TreeObj {
    int var = 0;  // 0 for letter nodes, else 1-based variable index (leaf)
    std::string label;
    std::vector<TreeObj> children;
};

bool operator==(const TreeObj& a, const TreeObj& b);
bool operator<(const TreeObj& a, const TreeObj& b);
inline bool operator!=(const TreeObj& a, const TreeObj& b) { return !(a == b); }

int measure(const Word& w);
int measure(const TreeObj& t);

// Finite language morphism n -> p: n finite sets of objects mentioning
// variables x_1..x_p.
template <class Obj>
struct LanguageMorphism {
    Sort sort;
    std::vector<std::set<Obj>> components;

    friend bool operator==(const LanguageMorphism&,
                           const LanguageMorphism&) = default;
};

using WordLang = LanguageMorphism<Word>;
using TreeLang = LanguageMorphism<TreeObj>;

// Composition in the power-set theory: every occurrence of a variable is
// replaced independently by a member of the matching component. Results
// above the bound are dropped.
WordLang ps_compose(const WordLang& l, const WordLang& k, Bound b);
TreeLang ps_compose(const TreeLang& l, const TreeLang& k, Bound b);

// Componentwise union; sorts must agree.
WordLang ps_sum(const WordLang& l, const WordLang& k);
TreeLang ps_sum(const TreeLang& l, const TreeLang& k);

// Least fixed point of S = trunc(l . <S, identity>), iterated from empty
// components inside the finite bounded lattice.
WordLang ps_dagger(const WordLang& l, Bound b);
TreeLang ps_dagger(const TreeLang& l, Bound b);

// Evaluates a desugared, sorted term. Variables must be covered by the
// interpretation with matching sorts; letters default to their canonical
// interpretation (trees: sigma(x_1..x_k); words: rank <= 1 only) unless the
// interpretation overrides them.
WordLang eval_term(const Term& t, const Signature& sig,
                   const std::map<std::string, WordLang>& interp, Bound b);
TreeLang eval_term(const Term& t, const Signature& sig,
                   const std::map<std::string, TreeLang>& interp, Bound b);

// Left-to-right leaf word of a tree.
Word frontier(const TreeObj& t);

// "a x1 b" -> tokens; "x<digits>" reads as a variable, "" is the empty word.
Word parse_word(const std::string& text);
// "sigma(a, x1)" prefix form with parenthesized children.
TreeObj parse_tree(const std::string& text);

std::string to_string(const Word& w);  // tokens joined by single spaces
std::string to_string(const TreeObj& t);

// Interpretation files (words are space-separated tokens):
//   interp { f = { "a b", "a x1 b x1" }, g = { "" } }
// Multi-source variables list one brace set per component:
//   interp { f = [ { "a" }, { "b x1" } ] }
// Tree interpretations use prefix tree syntax inside the quotes; a file is
// read as trees when any quoted entry contains '('.
bool interp_file_is_trees(const std::string& text);
std::map<std::string, WordLang> parse_word_interp(const std::string& text,
                                                  const Signature& sig);
std::map<std::string, TreeLang> parse_tree_interp(const std::string& text,
                                                  const Signature& sig);

}  // namespace groveq
