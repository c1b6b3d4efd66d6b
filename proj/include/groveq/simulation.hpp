#pragma once

#include <memory>
#include <string>
#include <vector>

#include "groveq/graph.hpp"

namespace groveq {

// Largest simulation between the states of two graphs, plus the round at
// which each deleted pair fell out of the greatest-fixpoint iteration.
class SimRelation {
  public:
    SimRelation(int left_states, int right_states);

    bool related(StateId u, StateId v) const {
        return rounds_[u * right_ + v] == 0;
    }
    // 0 when still related, otherwise the 1-based deletion round.
    int deletion_round(StateId u, StateId v) const {
        return rounds_[u * right_ + v];
    }
    void remove(StateId u, StateId v, int round) {
        rounds_[u * right_ + v] = round;
    }

    std::vector<std::pair<StateId, StateId>> pairs() const;
    std::string to_string() const;  // sorted pair list

  private:
    int right_;
    std::vector<int> rounds_;
};

// Greatest simulation: starts from all state pairs and deletes (u, v)
// whenever some edge of u has no equally-labeled edge of v with pairwise
// related targets. Pre: equal exit sorts, compatible letter arities.
SimRelation sim_preorder(const ProcessGraph& g, const ProcessGraph& h);

// Roots componentwise in the simulation preorder. Pre: equal sorts.
bool simulates(const ProcessGraph& g, const ProcessGraph& h);
bool sim_equiv(const ProcessGraph& g, const ProcessGraph& h);

// Symmetric variant: deletes a pair when either side has an unmatched edge.
bool bisim_equiv(const ProcessGraph& g, const ProcessGraph& h);

// The `rounds`-round simulation game, equivalently simulates() of the two
// depth-`rounds` unfoldings (prefixes share subtrees per state and depth, so
// the game is played on (state, state, remaining) triples directly).
bool simulates_bounded(const ProcessGraph& g, const ProcessGraph& h,
                       int rounds);

// Winning strategy for the challenger at a failing root pair: at each node
// the chosen left edge defeats every right response; responses carry the
// component on which they lose and the continuation below it. Depth is
// bounded by the deletion round of the node's state pair.
struct GameStrategy {
    StateId left = 0;
    std::vector<StateId> right;  // right-state set the move defeats
    Edge move;
    struct Response {
        Edge edge;           // the matching right edge
        int component;       // 1-based losing component, 0 if none needed
        std::shared_ptr<GameStrategy> continuation;
    };
    std::vector<Response> responses;
};

// Pre: !simulates(g, h). Builds the strategy at the first failing root.
GameStrategy game_witness(const ProcessGraph& g, const ProcessGraph& h);

}  // namespace groveq
