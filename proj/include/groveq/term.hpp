#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "groveq/common.hpp"

namespace groveq {

// Declared material a term may mention: ranked letters and morphism variables.
// Names are unique across both kinds. "#", "$" and names of the shape x<digits>
// are reserved for the word encodings and rejected here.
struct Signature {
    std::map<std::string, int> letters;  // name -> rank (>= 0)
    std::map<std::string, Sort> variables;

    void add_letter(const std::string& name, int rank);
    void add_variable(const std::string& name, Sort sort);
    bool has(const std::string& name) const {
        return letters.count(name) || variables.count(name);
    }
};

enum class TermKind {
    var,      // morphism variable
    letter,   // ranked letter, sort 1 -> rank
    id,       // identity, n -> n             (a = n)
    dist,     // distinguished i-th of n, 1 -> n (a = i, b = n)
    zero,     // additive zero, n -> p        (a = n, b = p)
    comp,     // diagrammatic composition f . g
    tuple,    // pairing <t1, ..., tk>; core form has all components 1 -> p
    sum,      // f + g, same sorts
    dagger,   // dg(f), f : n -> n+p gives n -> p
    oplus,    // sugar: f (+) g
    star,     // sugar: st(f), f : n -> n+p gives n -> n+p
};

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
    TermKind kind;
    std::string name;          // var / letter
    int a = 0;                 // id: n, dist: i, zero: n
    int b = 0;                 // dist: n, zero: p
    std::vector<Term> children;
    std::optional<Sort> sort;  // filled by infer_sort
};

Term mk_var(std::string name);
Term mk_letter(std::string name);
Term mk_id(int n);
Term mk_dist(int i, int n);
Term mk_zero(int n, int p);
Term mk_comp(Term f, Term g);
Term mk_tuple(std::vector<Term> components);
Term mk_pair(Term f, Term g);  // same node as a two-component tuple
Term mk_sum(Term f, Term g);
Term mk_dagger(Term f);
Term mk_oplus(Term f, Term g);
Term mk_star(Term f);

// Structural equality, ignoring cached sorts.
bool term_equal(const Term& s, const Term& t);

// Computes the sort of t under sig, annotating every subterm. Throws
// sort_error with the offending subterm's path on mismatch.
Sort infer_sort(const Term& t, const Signature& sig);

// Rewrites oplus, star and non-unit tuple components into the core
// constructors. Idempotent; preserves sorts. Expects an inferred term.
Term desugar(const Term& t, const Signature& sig);

// Free morphism variables with their sorts.
std::map<std::string, Sort> free_vars(const Term& t, const Signature& sig);

// Concrete syntax emitter; parse(pretty_print(t)) reproduces t.
std::string pretty_print(const Term& t);

// Parses a single term against an existing signature.
Term parse_term(const std::string& text, const Signature& sig);

// Parses a definition file: alphabet / vars blocks and def statements.
struct ParsedFile {
    Signature signature;
    std::vector<std::pair<std::string, Term>> definitions;  // in file order

    const Term& definition(const std::string& name) const;
};

ParsedFile parse_file(const std::string& text);

// Base morphism [n] -> [p]: image of i is map_[i-1], each in 1..p.
struct BaseMorphism {
    int target = 0;
    std::vector<int> images;

    int source() const { return static_cast<int>(images.size()); }
    int apply(int i) const { return images.at(i - 1); }
    static BaseMorphism identity(int n);
    BaseMorphism then(const BaseMorphism& g) const;
    // Injection of a block of `count` slots starting at `offset` into [total].
    static BaseMorphism block(int offset, int count, int total);
    // The tupling term <(offset+1)_total, ..., (offset+count)_total>.
    Term to_term() const;
};

}  // namespace groveq
