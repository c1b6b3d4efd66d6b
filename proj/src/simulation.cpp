#include "groveq/simulation.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace groveq {

SimRelation::SimRelation(int left_states, int right_states)
    : right_(right_states),
      rounds_(static_cast<std::size_t>(left_states) * right_states, 0) {}

std::vector<std::pair<StateId, StateId>> SimRelation::pairs() const {
    std::vector<std::pair<StateId, StateId>> out;
    int left = right_ == 0 ? 0 : static_cast<int>(rounds_.size()) / right_;
    for (StateId u = 0; u < left; ++u)
        for (StateId v = 0; v < right_; ++v)
            if (related(u, v)) out.emplace_back(u, v);
    return out;
}

std::string SimRelation::to_string() const {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (auto [u, v] : pairs()) {
        if (!first) os << ", ";
        first = false;
        os << '(' << u << ',' << v << ')';
    }
    os << '}';
    return os.str();
}

namespace {

void check_compatible(const ProcessGraph& g, const ProcessGraph& h) {
    if (g.sort.target != h.sort.target)
        throw sort_error("simulation between exit sorts " +
                         std::to_string(g.sort.target) + " and " +
                         std::to_string(h.sort.target));
    std::map<std::string, std::size_t> arity;
    for (const ProcessGraph* x : {&g, &h})
        for (StateId v = 0; v < x->num_states; ++v)
            for (const Edge& e : x->out[v]) {
                if (e.label.is_exit()) continue;
                auto [it, fresh] = arity.emplace(e.label.name, e.targets.size());
                if (!fresh && it->second != e.targets.size())
                    throw sort_error("letter " + e.label.name +
                                     " has two arities across the graphs");
            }
}

bool edge_matched(const Edge& e, const std::vector<Edge>& candidates,
                  const SimRelation& rel) {
    for (const Edge& c : candidates) {
        if (c.label != e.label) continue;
        bool ok = true;
        for (std::size_t i = 0; i < e.targets.size() && ok; ++i)
            ok = rel.related(e.targets[i], c.targets[i]);
        if (ok) return true;
    }
    return false;
}

}  // namespace

SimRelation sim_preorder(const ProcessGraph& g, const ProcessGraph& h) {
    check_compatible(g, h);
    SimRelation rel(g.num_states, h.num_states);
    for (int round = 1;; ++round) {
        std::vector<std::pair<StateId, StateId>> drop;
        for (StateId u = 0; u < g.num_states; ++u) {
            for (StateId v = 0; v < h.num_states; ++v) {
                if (!rel.related(u, v)) continue;
                for (const Edge& e : g.out[u]) {
                    if (!edge_matched(e, h.out[v], rel)) {
                        drop.emplace_back(u, v);
                        break;
                    }
                }
            }
        }
        if (drop.empty()) return rel;
        for (auto [u, v] : drop) rel.remove(u, v, round);
    }
}

bool simulates(const ProcessGraph& g, const ProcessGraph& h) {
    if (g.sort != h.sort)
        throw sort_error("simulates between sorts " + to_string(g.sort) +
                         " and " + to_string(h.sort));
    SimRelation rel = sim_preorder(g, h);
    for (int i = 0; i < g.sort.source; ++i)
        if (!rel.related(g.roots[i], h.roots[i])) return false;
    return true;
}

bool sim_equiv(const ProcessGraph& g, const ProcessGraph& h) {
    return simulates(g, h) && simulates(h, g);
}

bool bisim_equiv(const ProcessGraph& g, const ProcessGraph& h) {
    if (g.sort != h.sort)
        throw sort_error("bisimulation between sorts " + to_string(g.sort) +
                         " and " + to_string(h.sort));
    check_compatible(g, h);
    SimRelation rel(g.num_states, h.num_states);
    for (int round = 1;; ++round) {
        std::vector<std::pair<StateId, StateId>> drop;
        for (StateId u = 0; u < g.num_states; ++u)
            for (StateId v = 0; v < h.num_states; ++v) {
                if (!rel.related(u, v)) continue;
                bool bad = false;
                for (const Edge& e : g.out[u])
                    if (!edge_matched(e, h.out[v], rel)) {
                        bad = true;
                        break;
                    }
                // Mirror direction reuses the same relation, reading it as
                // its inverse would be wrong; check explicitly.
                if (!bad)
                    for (const Edge& e : h.out[v]) {
                        bool ok = false;
                        for (const Edge& c : g.out[u]) {
                            if (c.label != e.label) continue;
                            bool all = true;
                            for (std::size_t i = 0;
                                 i < e.targets.size() && all; ++i)
                                all = rel.related(c.targets[i], e.targets[i]);
                            if (all) {
                                ok = true;
                                break;
                            }
                        }
                        if (!ok) {
                            bad = true;
                            break;
                        }
                    }
                if (bad) drop.emplace_back(u, v);
            }
        if (drop.empty()) break;
        for (auto [u, v] : drop) rel.remove(u, v, round);
    }
    for (int i = 0; i < g.sort.source; ++i)
        if (!rel.related(g.roots[i], h.roots[i])) return false;
    return true;
}

namespace {

struct BoundedGame {
    const ProcessGraph& g;
    const ProcessGraph& h;
    // memo[(u, v, remaining)] -> result
    std::map<std::tuple<StateId, StateId, int>, bool> memo;

    bool run(StateId u, StateId v, int remaining) {
        auto key = std::make_tuple(u, v, remaining);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        memo.emplace(key, true);  // provisional; cycles cannot occur (remaining decreases)
        bool ok = true;
        for (const Edge& e : g.out[u]) {
            if (!e.targets.empty() && remaining == 0) continue;  // cut by prefix
            bool matched = false;
            for (const Edge& c : h.out[v]) {
                if (c.label != e.label) continue;
                if (!c.targets.empty() && remaining == 0) continue;
                bool all = true;
                for (std::size_t i = 0; i < e.targets.size() && all; ++i)
                    all = run(e.targets[i], c.targets[i], remaining - 1);
                if (all) {
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                ok = false;
                break;
            }
        }
        memo[key] = ok;
        return ok;
    }
};

}  // namespace

bool simulates_bounded(const ProcessGraph& g, const ProcessGraph& h,
                       int rounds) {
    if (g.sort != h.sort)
        throw sort_error("simulates_bounded between sorts " +
                         to_string(g.sort) + " and " + to_string(h.sort));
    check_compatible(g, h);
    BoundedGame game{g, h, {}};
    for (int i = 0; i < g.sort.source; ++i)
        if (!game.run(g.roots[i], h.roots[i], rounds)) return false;
    return true;
}

namespace {

struct WitnessBuilder {
    const ProcessGraph& g;
    const ProcessGraph& h;
    const SimRelation& rel;
    std::map<std::pair<StateId, StateId>, std::shared_ptr<GameStrategy>> memo;

    std::shared_ptr<GameStrategy> build(StateId u, StateId v) {
        auto key = std::make_pair(u, v);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        int round = rel.deletion_round(u, v);
        if (round == 0)
            throw domain_error("game witness requested for a related pair");
        // The deletion round guarantees a move all of whose responses lost
        // strictly earlier; edges are kept in canonical (sorted) order, so
        // the first qualifying edge is the smallest one.
        for (const Edge& e : g.out[u]) {
            bool wins = true;
            std::vector<GameStrategy::Response> responses;
            for (const Edge& c : h.out[v]) {
                if (c.label != e.label) continue;
                int best = 0;
                int best_round = 0;
                for (std::size_t i = 0; i < e.targets.size(); ++i) {
                    int r = rel.deletion_round(e.targets[i], c.targets[i]);
                    if (r != 0 && r < round && (best == 0 || r < best_round)) {
                        best = static_cast<int>(i) + 1;
                        best_round = r;
                    }
                }
                if (best == 0) {
                    wins = false;
                    break;
                }
                responses.push_back({c, best, nullptr});
            }
            if (!wins) continue;
            auto node = std::make_shared<GameStrategy>();
            node->left = u;
            node->right = {v};
            node->move = e;
            memo.emplace(key, node);
            for (GameStrategy::Response& r : responses) {
                r.continuation = build(e.targets[r.component - 1],
                                       r.edge.targets[r.component - 1]);
            }
            node->responses = std::move(responses);
            return node;
        }
        throw std::logic_error("deleted pair without a winning move");
    }
};

}  // namespace

GameStrategy game_witness(const ProcessGraph& g, const ProcessGraph& h) {
    if (g.sort != h.sort)
        throw sort_error("game witness between sorts " + to_string(g.sort) +
                         " and " + to_string(h.sort));
    SimRelation rel = sim_preorder(g, h);
    for (int i = 0; i < g.sort.source; ++i) {
        if (rel.related(g.roots[i], h.roots[i])) continue;
        WitnessBuilder builder{g, h, rel, {}};
        return *builder.build(g.roots[i], h.roots[i]);
    }
    throw domain_error("game witness requested but simulation holds");
}

}  // namespace groveq
