#include <doctest.h>

#include "groveq/graph.hpp"
#include "groveq/simulation.hpp"
#include "testutil.hpp"

using namespace groveq;

namespace {

ProcessGraph letter_sum(const char* x, const char* y) {
    return g_sum(g_letter(x, 1), g_letter(y, 1));
}

// a . <G> for unary a: prefix a single action.
ProcessGraph prefixed(const char* a, const ProcessGraph& g) {
    return g_compose(g_letter(a, 1), g);
}

int strategy_depth(const GameStrategy& s) {
    int best = 0;
    for (const auto& r : s.responses)
        if (r.continuation)
            best = std::max(best, strategy_depth(*r.continuation));
    return best + 1;
}

}  // namespace

TEST_CASE("sim_preorder basics") {
    // The edgeless root is below every state.
    RankedAlphabet sigma = testutil::unary_alphabet({"a", "b"});
    std::mt19937 rng(3);
    for (int i = 0; i < 10; ++i) {
        ProcessGraph h = testutil::random_graph(rng, 1, 1, 5, sigma);
        ProcessGraph z = g_zero(1, 1);
        SimRelation rel = sim_preorder(z, h);
        for (StateId v = 0; v < h.num_states; ++v)
            CHECK(rel.related(z.roots[0], v));
    }

    ProcessGraph ab = letter_sum("a", "b");
    ProcessGraph a = g_letter("a", 1);
    CHECK(!simulates(ab, a));
    CHECK(simulates(a, ab));

    // Identity pairs always survive.
    for (int i = 0; i < 10; ++i) {
        ProcessGraph g = testutil::random_graph(rng, 1, 1, 5, sigma);
        SimRelation self = sim_preorder(g, g);
        for (StateId v = 0; v < g.num_states; ++v) CHECK(self.related(v, v));
    }
}

TEST_CASE("deleted pairs carry a meaningful round") {
    ProcessGraph ab = prefixed("a", prefixed("b", g_zero(1, 1)));
    ProcessGraph ac = prefixed("a", prefixed("c", g_zero(1, 1)));
    SimRelation rel = sim_preorder(ab, ac);
    CHECK(!rel.related(ab.roots[0], ac.roots[0]));
    // The root falls in round 2: its a-edge response dies in round 1.
    CHECK(rel.deletion_round(ab.roots[0], ac.roots[0]) == 2);

    SimRelation r1 = sim_preorder(letter_sum("a", "b"), g_letter("a", 1));
    CHECK(r1.deletion_round(0, 0) == 1);  // roots are state 0 in both
}

TEST_CASE("simulates properties on random graphs") {
    RankedAlphabet sigma;
    sigma.add("a", 1);
    sigma.add("b", 1);
    sigma.add("s", 2);
    std::mt19937 rng(13);
    for (int i = 0; i < 30; ++i) {
        int n = testutil::pick(rng, 1, 2);
        int p = testutil::pick(rng, 0, 2);
        ProcessGraph g = testutil::random_graph(rng, n, p, 5, sigma);
        ProcessGraph h = testutil::random_graph(rng, n, p, 5, sigma);
        CHECK(simulates(g, g_sum(g, h)));
        CHECK(simulates(h, g_sum(g, h)));
        CHECK(simulates(g, g));
        CHECK(sim_equiv(g_sum(g, g), g));
        CHECK(bisim_equiv(g, g));
        int d = testutil::pick(rng, 0, 4);
        CHECK(simulates(unfold(g, d), g));

        // Transitivity via a third graph.
        ProcessGraph k = testutil::random_graph(rng, n, p, 5, sigma);
        if (simulates(g, h) && simulates(h, k)) CHECK(simulates(g, k));

        // Precongruence under sum and composition contexts.
        if (simulates(g, h)) {
            CHECK(simulates(g_sum(g, k), g_sum(h, k)));
            ProcessGraph ctx = testutil::random_graph(rng, p, 1, 3, sigma);
            CHECK(simulates(g_compose(g, ctx), g_compose(h, ctx)));
        }
    }
    CHECK(!simulates(g_letter("a", 1), g_letter("b", 1)));
    CHECK_THROWS_AS(simulates(g_zero(1, 1), g_zero(1, 2)), sort_error);
    CHECK_THROWS_AS(simulates(g_zero(1, 1), g_zero(2, 1)), sort_error);
}

TEST_CASE("simulation versus bisimulation separation") {
    // a.(b+c) strictly dominates a.b + a.c: after the a-move neither the
    // b-branch nor the c-branch can answer for b+c.
    ProcessGraph l = prefixed("a", letter_sum("b", "c"));
    ProcessGraph r = g_sum(prefixed("a", g_letter("b", 1)),
                           prefixed("a", g_letter("c", 1)));
    CHECK(simulates(r, l));
    CHECK(!simulates(l, r));
    CHECK(!sim_equiv(l, r));

    // a.b + a and a.b: simulation equivalent but not bisimilar (the bare
    // a-branch ends where the other side can still move).
    ProcessGraph ab = prefixed("a", g_letter("b", 1));
    ProcessGraph aba = g_sum(ab, g_compose(g_letter("a", 1), g_zero(1, 1)));
    CHECK(sim_equiv(aba, ab));
    CHECK(!bisim_equiv(aba, ab));
    CHECK(bisim_equiv(l, l));
}

TEST_CASE("bounded game agrees with unfolding simulation") {
    RankedAlphabet sigma;
    sigma.add("a", 1);
    sigma.add("s", 2);
    sigma.add("z", 0);
    std::mt19937 rng(29);
    for (int i = 0; i < 40; ++i) {
        int n = testutil::pick(rng, 1, 2);
        int p = testutil::pick(rng, 0, 1);
        ProcessGraph g = testutil::random_graph(rng, n, p, 4, sigma);
        ProcessGraph h = testutil::random_graph(rng, n, p, 4, sigma);
        for (int d = 0; d <= 4; ++d) {
            bool direct = simulates_bounded(g, h, d);
            bool via_unfold = simulates(unfold(g, d), unfold(h, d));
            CHECK(direct == via_unfold);
        }
        // The bound D = |G||H|+1 already decides the unbounded preorder.
        int big = g.num_states * h.num_states + 1;
        CHECK(simulates_bounded(g, h, big) == simulates(g, h));
    }
}

TEST_CASE("game_witness strategies defeat every response") {
    // a+b against a: one round, pick the b-edge.
    GameStrategy s1 = game_witness(letter_sum("a", "b"), g_letter("a", 1));
    CHECK(s1.move.label == EdgeLabel::action("b"));
    CHECK(s1.responses.empty());
    CHECK(strategy_depth(s1) == 1);

    // a.b against a.c: play a, the lone response leads to b vs c.
    ProcessGraph gab = prefixed("a", prefixed("b", g_zero(1, 1)));
    ProcessGraph gac = prefixed("a", prefixed("c", g_zero(1, 1)));
    GameStrategy s2 = game_witness(gab, gac);
    CHECK(s2.move.label == EdgeLabel::action("a"));
    REQUIRE(s2.responses.size() == 1);
    REQUIRE(s2.responses[0].continuation != nullptr);
    CHECK(s2.responses[0].continuation->move.label == EdgeLabel::action("b"));
    CHECK(s2.responses[0].continuation->responses.empty());
    CHECK(strategy_depth(s2) == 2);

    // Exit labels work as moves too.
    GameStrategy s3 = game_witness(g_dist(1, 1), g_zero(1, 1));
    CHECK(s3.move.label == EdgeLabel::exit(1));
    CHECK(s3.responses.empty());

    CHECK_THROWS_AS(game_witness(g_letter("a", 1), g_letter("a", 1)),
                    domain_error);

    // Strategy depth is bounded by the deletion round on random failures.
    RankedAlphabet sigma;
    sigma.add("a", 1);
    sigma.add("b", 1);
    sigma.add("s", 2);
    std::mt19937 rng(37);
    int found = 0;
    for (int i = 0; i < 60 && found < 25; ++i) {
        ProcessGraph g = testutil::random_graph(rng, 1, 1, 5, sigma);
        ProcessGraph h = testutil::random_graph(rng, 1, 1, 5, sigma);
        if (simulates(g, h)) continue;
        ++found;
        SimRelation rel = sim_preorder(g, h);
        GameStrategy s = game_witness(g, h);
        CHECK(strategy_depth(s) <= rel.deletion_round(g.roots[0], h.roots[0]));
        // Following the strategy for that many rounds defeats the bounded game.
        CHECK(!simulates_bounded(g, h, strategy_depth(s)));
    }
    CHECK(found >= 10);
}

TEST_CASE("park induction on sampled pairs") {
    RankedAlphabet sigma;
    sigma.add("a", 1);
    sigma.add("s", 2);
    std::mt19937 rng(47);
    int applicable = 0;
    for (int i = 0; i < 200; ++i) {
        int n = testutil::pick(rng, 1, 2);
        int p = testutil::pick(rng, 0, 1);
        ProcessGraph f = testutil::random_graph(rng, n, n + p, 4, sigma);
        ProcessGraph gq = testutil::random_graph(rng, n, p, 4, sigma);
        if (!simulates(g_compose(f, g_pair(gq, g_identity(p))), gq)) continue;
        ++applicable;
        CHECK(simulates(g_dagger(f), gq));
    }
    CHECK(applicable >= 20);  // the sample actually exercised the rule
}
