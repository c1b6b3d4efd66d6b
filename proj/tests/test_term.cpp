#include <doctest.h>

#include "groveq/term.hpp"
#include "testutil.hpp"

using namespace groveq;

namespace {

Signature fg_signature() {
    Signature sig;
    sig.add_letter("a", 1);
    sig.add_letter("b", 1);
    sig.add_letter("c", 1);
    sig.add_letter("nil", 0);
    sig.add_letter("sigma", 2);
    sig.add_variable("f", {1, 2});
    sig.add_variable("g", {2, 2});
    return sig;
}

}  // namespace

TEST_CASE("parse builds the expected node shapes") {
    Signature sig = fg_signature();

    Term t = parse_term("dg(id(1))", sig);
    REQUIRE(t->kind == TermKind::dagger);
    CHECK(t->children[0]->kind == TermKind::id);
    CHECK(t->children[0]->a == 1);

    Term u = parse_term("f . <pi(1,2), pi(2,2)>", sig);
    REQUIRE(u->kind == TermKind::comp);
    CHECK(u->children[0]->kind == TermKind::var);
    CHECK(u->children[0]->name == "f");
    REQUIRE(u->children[1]->kind == TermKind::tuple);
    CHECK(u->children[1]->children.size() == 2);
    CHECK(u->children[1]->children[0]->kind == TermKind::dist);
    CHECK(u->children[1]->children[0]->a == 1);
    CHECK(u->children[1]->children[0]->b == 2);

    Term v = parse_term("st(g) + zero(2, 2)", sig);
    REQUIRE(v->kind == TermKind::sum);
    CHECK(v->children[0]->kind == TermKind::star);
    CHECK(v->children[1]->kind == TermKind::zero);

    Term w = parse_term("(a (+) nil) . g", sig);
    REQUIRE(w->kind == TermKind::comp);
    CHECK(w->children[0]->kind == TermKind::oplus);
}

TEST_CASE("parse rejects unknown identifiers with position info") {
    Signature sig = fg_signature();
    CHECK_THROWS_AS(parse_term("zero(2,2) + x", sig), parse_error);
    try {
        parse_term("zero(2,2) + x", sig);
    } catch (const parse_error& e) {
        CHECK(std::string(e.what()).find("unknown identifier") != std::string::npos);
        CHECK(e.line() == 1);
        CHECK(e.column() == 13);
    }
    CHECK_THROWS_AS(parse_term("f .", sig), parse_error);
    CHECK_THROWS_AS(parse_term("<f>", sig), parse_error);
    CHECK_THROWS_AS(parse_term("dg(f", sig), parse_error);
    CHECK_THROWS_AS(parse_term("", sig), parse_error);
}

TEST_CASE("infer_sort on the core constructors") {
    Signature sig = fg_signature();

    CHECK(infer_sort(mk_dist(2, 3), sig) == Sort{1, 3});
    CHECK(infer_sort(mk_id(2), sig) == Sort{2, 2});
    CHECK(infer_sort(mk_zero(2, 3), sig) == Sort{2, 3});
    CHECK(infer_sort(mk_letter("sigma"), sig) == Sort{1, 2});
    CHECK(infer_sort(mk_letter("nil"), sig) == Sort{1, 0});
    CHECK(infer_sort(mk_var("f"), sig) == Sort{1, 2});

    Term comp = mk_comp(mk_var("f"), mk_var("g"));
    CHECK(infer_sort(comp, sig) == Sort{1, 2});
    CHECK(comp->sort == Sort{1, 2});  // annotation is written back

    // f : 1 -> 2 qualifies as 1 -> 1+1, so dg(f) : 1 -> 1.
    CHECK(infer_sort(mk_dagger(mk_var("f")), sig) == Sort{1, 1});
    CHECK(infer_sort(mk_star(mk_var("f")), sig) == Sort{1, 2});
    CHECK(infer_sort(mk_tuple({mk_var("f"), mk_var("f")}), sig) == Sort{2, 2});
    CHECK(infer_sort(mk_oplus(mk_var("f"), mk_var("g")), sig) == Sort{3, 4});
}

TEST_CASE("infer_sort rejects ill-sorted terms") {
    Signature sig = fg_signature();

    // g : 2 -> 2 cannot be read as n -> n+p with n = 2 ... it can (p = 0).
    CHECK(infer_sort(mk_dagger(mk_var("g")), sig) == Sort{2, 0});

    // But a 2 -> 1 morphism has no dagger.
    sig.add_variable("h", {2, 1});
    CHECK_THROWS_AS(infer_sort(mk_dagger(mk_var("h")), sig), sort_error);
    CHECK_THROWS_AS(infer_sort(mk_star(mk_var("h")), sig), sort_error);

    CHECK_THROWS_AS(infer_sort(mk_comp(mk_var("f"), mk_var("f")), sig), sort_error);
    CHECK_THROWS_AS(infer_sort(mk_sum(mk_var("f"), mk_var("g")), sig), sort_error);
    CHECK_THROWS_AS(infer_sort(mk_tuple({mk_var("f"), mk_var("h")}), sig), sort_error);
    CHECK_THROWS_AS(infer_sort(mk_dist(3, 2), sig), sort_error);
    CHECK_THROWS_AS(infer_sort(mk_dist(0, 1), sig), sort_error);
    CHECK_THROWS_AS(infer_sort(mk_var("nope"), sig), sort_error);
    CHECK_THROWS_AS(infer_sort(mk_tuple({}), sig), sort_error);

    // The error message points into the offending subterm.
    try {
        infer_sort(mk_sum(mk_var("f"), mk_comp(mk_var("f"), mk_var("f"))), sig);
        CHECK(false);
    } catch (const sort_error& e) {
        CHECK(std::string(e.what()).find("composition") != std::string::npos);
    }
}

TEST_CASE("desugar eliminates oplus and star") {
    Signature sig = fg_signature();

    // 0_{0,0} (+) f collapses to f itself.
    Term t = desugar(mk_oplus(mk_zero(0, 0), mk_var("f")), sig);
    CHECK(term_equal(t, mk_var("f")));

    Term u = desugar(mk_oplus(mk_var("f"), mk_zero(0, 2)), sig);
    CHECK(term_equal(u, mk_var("f")) == false);  // target widened to 4
    CHECK(infer_sort(u, sig) == Sort{1, 4});

    Term st = desugar(mk_star(mk_id(1)), sig);
    CHECK(st->kind == TermKind::dagger);
    CHECK(infer_sort(st, sig) == Sort{1, 1});

    // Desugared terms contain no sugar nodes anywhere.
    std::mt19937 rng(7);
    for (int i = 0; i < 60; ++i) {
        Signature rsig = testutil::small_signature(rng, 3);
        Sort sort{testutil::pick(rng, 0, 3), testutil::pick(rng, 0, 3)};
        Term any = testutil::random_term(rng, rsig, sort, 10);
        REQUIRE(infer_sort(any, rsig) == sort);
        Term core = desugar(any, rsig);
        std::vector<Term> stack{core};
        while (!stack.empty()) {
            Term cur = stack.back();
            stack.pop_back();
            CHECK(cur->kind != TermKind::oplus);
            CHECK(cur->kind != TermKind::star);
            for (const Term& c : cur->children) stack.push_back(c);
        }
        // Sort is preserved and desugaring is idempotent.
        CHECK(infer_sort(core, rsig) == sort);
        CHECK(term_equal(desugar(core, rsig), core));
    }
}

TEST_CASE("free_vars collects variables with sorts, not letters") {
    Signature sig = fg_signature();
    auto fv = free_vars(parse_term("dg(f . <g, pi(1,2) + pi(2,2)>)", sig), sig);
    REQUIRE(fv.size() == 2);
    CHECK(fv.at("f") == Sort{1, 2});
    CHECK(fv.at("g") == Sort{2, 2});
    CHECK(free_vars(parse_term("a + b", sig), sig).empty());
    CHECK(free_vars(parse_term("f + f", sig), sig).size() == 1);
}

TEST_CASE("pretty_print round-trips through the parser") {
    Signature sig = fg_signature();
    const char* samples[] = {
        "dg(f . <g, pi(1,2) + pi(2,2)>)",
        "st(g) . (f (+) id(1))",
        "<a . f, b . f> . g",
        "zero(0,1) (+) (nil . zero(0,2))",
        "id(3)",
    };
    for (const char* s : samples) {
        Term t = parse_term(s, sig);
        Term back = parse_term(pretty_print(t), sig);
        CHECK(term_equal(t, back));
    }

    std::mt19937 rng(11);
    for (int i = 0; i < 80; ++i) {
        Signature rsig = testutil::small_signature(rng, 3);
        Sort sort{testutil::pick(rng, 0, 3), testutil::pick(rng, 0, 3)};
        Term t = testutil::random_term(rng, rsig, sort, 12);
        infer_sort(t, rsig);
        Term back = parse_term(pretty_print(t), rsig);
        CHECK(term_equal(t, back));
    }
}

TEST_CASE("signature rejects reserved and duplicate names") {
    Signature sig;
    sig.add_letter("a", 1);
    CHECK_THROWS_AS(sig.add_letter("a", 2), sort_error);
    CHECK_THROWS_AS(sig.add_variable("a", Sort{1, 1}), sort_error);
    CHECK_THROWS_AS(sig.add_letter("#", 1), sort_error);
    CHECK_THROWS_AS(sig.add_letter("$", 0), sort_error);
    CHECK_THROWS_AS(sig.add_letter("x1", 0), sort_error);
    CHECK_THROWS_AS(sig.add_variable("x12", Sort{1, 1}), sort_error);
    CHECK_THROWS_AS(sig.add_letter("b", -1), sort_error);
    sig.add_letter("x", 0);       // bare x is fine
    sig.add_letter("x1y", 0);     // and so is x1y
}

TEST_CASE("parse_file reads signature blocks and definitions") {
    const char* text =
        "-- example input\n"
        "alphabet { sigma: 2, a: 1, nil: 0 }\n"
        "vars { f: 1 -> 2, g: 2 -> 1 }\n"
        "\n"
        "def lhs = dg(f . <g, pi(1,2) + pi(2,2)>);\n"
        "def rhs = dg(f . <g, id(2) . <pi(1,2), pi(2,2)>>);\n";
    ParsedFile file = parse_file(text);
    CHECK(file.signature.letters.at("sigma") == 2);
    CHECK(file.signature.letters.at("nil") == 0);
    CHECK(file.signature.variables.at("f") == Sort{1, 2});
    REQUIRE(file.definitions.size() == 2);
    CHECK(file.definitions[0].first == "lhs");
    CHECK(file.definitions[1].first == "rhs");
    CHECK_THROWS_AS(file.definition("missing"), domain_error);
    CHECK(file.definition("lhs")->kind == TermKind::dagger);

    ParsedFile typed = parse_file(
        "alphabet { a: 1 }\n"
        "vars { f: 1 -> 2 }\n"
        "def body = f . <a . pi(1,1), pi(1,1)>;\n");
    CHECK(infer_sort(typed.definition("body"), typed.signature) == Sort{1, 1});

    CHECK_THROWS_AS(parse_file("def a = id(1);\ndef a = id(1);"), parse_error);
    CHECK_THROWS_AS(parse_file("alphabet { a: 1 }\nvars { a: 1 -> 1 }"), parse_error);
    CHECK_THROWS_AS(parse_file("def broken = dg(;"), parse_error);
}

TEST_CASE("base morphisms compose and embed as terms") {
    BaseMorphism id3 = BaseMorphism::identity(3);
    CHECK(id3.images == std::vector<int>{1, 2, 3});

    BaseMorphism blk = BaseMorphism::block(1, 2, 4);  // maps 1,2 to 2,3 of 4
    CHECK(blk.target == 4);
    CHECK(blk.images == std::vector<int>{2, 3});
    CHECK(blk.apply(1) == 2);
    CHECK(blk.then(BaseMorphism::identity(4)).images == blk.images);

    Signature sig;
    Term t = blk.to_term();
    CHECK(infer_sort(t, sig) == Sort{2, 4});
    Term t1 = BaseMorphism::identity(1).to_term();
    CHECK(infer_sort(t1, sig) == Sort{1, 1});
}
