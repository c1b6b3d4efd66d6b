#pragma once

#include <map>
#include <string>
#include <vector>

#include "groveq/common.hpp"

namespace groveq {

using StateId = int;

// Ranked alphabet; ranks are implicit in edges (target count), this type is
// carried where fresh letters are minted or arities must be declared.
struct RankedAlphabet {
    std::vector<std::pair<std::string, int>> letters;  // name -> rank

    bool has(const std::string& name) const;
    int rank(const std::string& name) const;
    void add(const std::string& name, int rank);
};

struct EdgeLabel {
    enum class Kind { action, exit };
    Kind kind = Kind::action;
    std::string name;  // action letter
    int index = 0;     // exit index, 1-based

    static EdgeLabel action(std::string name) {
        return {Kind::action, std::move(name), 0};
    }
    static EdgeLabel exit(int j) { return {Kind::exit, "", j}; }
    bool is_exit() const { return kind == Kind::exit; }

    friend auto operator<=>(const EdgeLabel&, const EdgeLabel&) = default;
};

std::string to_string(const EdgeLabel& l);

// Hyper-edge: exit edges have no targets, an action edge has rank-many,
// ordered targets.
struct Edge {
    EdgeLabel label;
    std::vector<StateId> targets;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Finite rooted hypergraph presenting an n-tuple of synchronization trees
// with exits 1..p. Invariants (maintained by the g_* constructors):
// every state is reachable from a root, per-state edge lists are sorted and
// duplicate-free, exit indices lie in 1..p, and an action letter is used at
// one arity only.
struct ProcessGraph {
    Sort sort;
    int num_states = 0;
    std::vector<StateId> roots;            // size sort.source
    std::vector<std::vector<Edge>> out;    // indexed by state

    friend bool operator==(const ProcessGraph&, const ProcessGraph&) = default;
};

// Re-establishes the representation invariants: dedupes and sorts edge lists,
// prunes states unreachable from the roots, validates exits and arities.
ProcessGraph normalize(ProcessGraph g);

// Distinguished i-th injection 1 -> n (a single exit-i edge).
ProcessGraph g_dist(int i, int n);
// Additive zero n -> p: n rootonly components.
ProcessGraph g_zero(int n, int p);
// Identity n -> n.
ProcessGraph g_identity(int n);
// One letter of rank k as the tree sigma(ex_1, ..., ex_k), sort 1 -> k.
ProcessGraph g_letter(const std::string& name, int rank);

// Composition G . H (splices H's root out-edges over G's exit edges).
ProcessGraph g_compose(const ProcessGraph& g, const ProcessGraph& h);
// Pairing: disjoint union with concatenated root lists (targets same p).
ProcessGraph g_pair(const ProcessGraph& g, const ProcessGraph& h);
// Tupling of components, each of any source; pairing folded left.
ProcessGraph g_tuple(const std::vector<ProcessGraph>& components);
// Sum: fresh roots carrying both root's out-edges, componentwise.
ProcessGraph g_sum(const ProcessGraph& g, const ProcessGraph& h);
// Dagger of G : n -> n+p. Exits 1..n become links back to the roots
// (resolved by closure, pure exit-cycles drop), exits beyond n renumber.
ProcessGraph g_dagger(const ProcessGraph& g);

// The subgraph generated by root i (1-based), sort 1 -> p.
ProcessGraph g_component(const ProcessGraph& g, int i);

// Prefix of the unfolding: keeps every path of at most `depth` action or
// exit steps; edges with targets are cut once their source sits at the cut
// depth, target-less edges at the cut depth remain.
ProcessGraph unfold(const ProcessGraph& g, int depth);

// Same unfolding as unfold(g, depth), but with subtrees shared: one state
// per (state, remaining depth) pair, so the result stays linear in
// num_states * depth where the tree can be exponential. Interchangeable
// with unfold under simulation or bisimulation checks.
ProcessGraph truncate(const ProcessGraph& g, int depth);

// Drops out-edges dominated in the simulation preorder (same label, targets
// componentwise below), keeping one representative per maximal equivalence
// class; iterates to a fixpoint. Result is sim-equivalent to the input.
ProcessGraph reduce(const ProcessGraph& g);

// True when the graph has no directed cycle through hyper-edges.
bool is_acyclic(const ProcessGraph& g);

// Isomorphism of finite trees/forests up to sibling order, componentwise on
// roots. Pre: both acyclic.
bool tree_iso(const ProcessGraph& g, const ProcessGraph& h);

// Canonical code of root i's subtree (acyclic graphs only); sibling edges
// sorted by label then code.
std::string tree_code(const ProcessGraph& g, int i);

// Graphviz rendering: states as circles (roots bold and numbered), one
// diamond per action edge with numbered target arcs, exits as doublecircle
// leaves. Output is deterministic.
std::string to_dot(const ProcessGraph& g, const std::string& name = "G");

}  // namespace groveq
