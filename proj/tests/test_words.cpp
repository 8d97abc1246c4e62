#include <doctest.h>

#include "fbc/error.hpp"
#include "fbc/sampling.hpp"
#include "fbc/words.hpp"

using namespace fbc;

namespace {

Word w2(const char* s) { return parse_word(s, 2); }
Word w3(const char* s) { return parse_word(s, 3); }

FreeRingElem terms(std::initializer_list<std::pair<const char*, int>> list, int rank) {
    FreeRingElem r;
    for (auto [s, c] : list) fr_add_term(r, parse_word(s, rank), c);
    return r;
}

}  // namespace

TEST_CASE("parse and reduce") {
    CHECK(to_string(w2("a b A")) == "a b A");
    CHECK(to_string(w2("a A b")) == "b");
    CHECK(w2("").empty());
    CHECK(w2("1").empty());
    CHECK(w2("abA") == w2("a b A"));
    CHECK_THROWS_AS(w2("c B"), InputError);
    CHECK_THROWS_AS(w2("a $"), InputError);
}

TEST_CASE("multiply") {
    CHECK(multiply(w2("a b"), w2("B A")).empty());
    CHECK(multiply(w2("a"), w2("b")) == w2("a b"));
    CHECK(multiply(w3("a b"), w3("B c")) == w3("a c"));
    CHECK_THROWS(multiply_checked(w3("c"), w3("a"), 2));
}

TEST_CASE("fox derivative examples") {
    CHECK(fox_derivative(w2("a b"), 1) == terms({{"1", 1}}, 2));
    CHECK(fox_derivative(w2("A"), 1) == terms({{"A", -1}}, 2));
    CHECK(fox_derivative(w3("a b c B C"), 2) == terms({{"a", 1}, {"a b c B", -1}}, 3));
    CHECK(fundamental_formula_check(Word(), 2));
    CHECK(fundamental_formula_check(w3("a b c B C"), 3));
}

TEST_CASE("fox calculus properties on random words") {
    Rng rng(7);
    for (int k = 0; k < 300; ++k) {
        int n = 2 + k % 3;
        Word u = random_word(rng, n, 20), v = random_word(rng, n, 20);
        CHECK(multiply(u, inverse(u)).empty());
        CHECK(multiply(u, v).size() <= u.size() + v.size());
        for (int i = 1; i <= n; ++i) {
            FreeRingElem lhs = fox_derivative(multiply(u, v), i);
            FreeRingElem rhs = fr_add(fox_derivative(u, i), fr_mul(fr_word(u), fox_derivative(v, i)));
            CHECK(lhs == rhs);
        }
        CHECK(fundamental_formula_check(random_word(rng, n, 40), n));
    }
}

TEST_CASE("folding") {
    auto all = fold_subgroup({w2("a"), w2("b")}, 2);
    CHECK(all.rank() == 2);
    CHECK(all.contains(w2("a B a a")));
    CHECK(all.is_whole_group());

    auto sq = fold_subgroup({w2("a a"), w2("b")}, 2);
    CHECK(sq.rank() == 2);
    CHECK_FALSE(sq.contains(w2("a")));
    CHECK(sq.contains(w2("a a b")));
    CHECK(sq.preimage(w2("a a b")) == w2("a b"));
    CHECK_THROWS_AS(sq.preimage(w2("a")), InputError);

    Endomorphism g3 = parse_endomorphism("rank: 3\na -> b\nb -> c\nc -> a b c B C\n");
    CHECK(fold_subgroup(g3.images, 3).rank() == 3);
    CHECK(is_injective(g3));
    CHECK(is_automorphism(g3));
}

TEST_CASE("preimages through edge memory") {
    Rng rng(11);
    for (int k = 0; k < 100; ++k) {
        Endomorphism g = random_injective(rng, 2, 4);
        FoldedGraph fg(g.images, 2);
        REQUIRE(fg.is_basis());
        Word x = random_word(rng, 2, 8);
        Word y = g.apply(x);
        CHECK(fg.contains(y));
        CHECK(fg.preimage(y) == x);
    }
}

TEST_CASE("injectivity via folded rank") {
    Rng rng(3);
    for (int k = 0; k < 100; ++k) {
        int n = 2 + k % 3;
        Endomorphism g = random_automorphism(rng, n, 8);
        CHECK(fold_subgroup(g.images, n).rank() == n);
        CHECK(is_automorphism(g));
        Endomorphism h = inverse(g);
        CHECK(h.compose(g) == Endomorphism::identity(n));
        CHECK(g.compose(h) == Endomorphism::identity(n));
        Endomorphism bad = g;
        bad.images[1] = bad.images[0];
        CHECK(fold_subgroup(bad.images, n).rank() < n);
        CHECK_FALSE(is_injective(bad));
    }
    Endomorphism sq = parse_endomorphism("rank: 2\na -> a a\nb -> b b\n");
    CHECK(is_injective(sq));
    CHECK_FALSE(is_automorphism(sq));
}

TEST_CASE("endomorphism file format") {
    Endomorphism g = parse_endomorphism("# comment\nrank: 2\na -> a\nb -> b a  # tail\n");
    CHECK(g.images[1] == w2("b a"));
    CHECK(parse_endomorphism(to_text(g)) == g);
    CHECK_THROWS_AS(parse_endomorphism("rank: 2\na -> a\n"), InputError);
    CHECK_THROWS_AS(parse_endomorphism("a -> a\n"), InputError);
    CHECK_THROWS_AS(parse_endomorphism("rank: 2\na -> a\nb -> c\n"), InputError);
}
