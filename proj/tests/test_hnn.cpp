#include <doctest.h>

#include "fbc/error.hpp"
#include "fbc/group_ring.hpp"
#include "fbc/hnn.hpp"
#include "fbc/laurent.hpp"
#include "fbc/sampling.hpp"

using namespace fbc;

namespace {

Endomorphism endo(const char* text) { return parse_endomorphism(text); }

const char* kId2 = "rank: 2\na -> a\nb -> b\n";
const char* kG3 = "rank: 3\na -> b\nb -> c\nc -> a b c B C\n";
const char* kTwist = "rank: 2\na -> a\nb -> b a\n";

HnnElement el(const HnnGroup& G, long long p, const char* w, long long q) {
    return G.normalize(p, parse_word(w, G.rank()), q);
}

// Random element as a product of letters a, A, ..., t, T.
HnnElement random_element(Rng& rng, const HnnGroup& G, int len, std::vector<HnnElement>* letters = nullptr) {
    std::uniform_int_distribution<int> pick(-(G.rank() + 1), G.rank() + 1);
    HnnElement x;
    for (int i = 0; i < len; ++i) {
        int l = 0;
        while (l == 0) l = pick(rng);
        HnnElement y;
        if (std::abs(l) == G.rank() + 1)
            y = l > 0 ? G.stable_letter() : G.inverse(G.stable_letter());
        else
            y = G.element(Word({l}));
        if (letters) letters->push_back(y);
        x = G.multiply(x, y);
    }
    return x;
}

}  // namespace

TEST_CASE("normal form examples") {
    HnnGroup G3(endo(kG3));
    HnnElement r = G3.normalize(1, G3.endomorphism().images[0], 1);
    CHECK(r == HnnElement{0, parse_word("a", 3), 0});

    HnnGroup T(endo(kTwist));
    CHECK(el(T, 1, "b a", 1) == HnnElement{0, parse_word("b", 2), 0});

    HnnGroup Id(endo(kId2));
    HnnElement t = Id.stable_letter();
    HnnElement a = Id.element(parse_word("a", 2));
    CHECK(Id.multiply(t, a) == HnnElement{1, parse_word("a", 2), 0});
    CHECK(Id.multiply(a, t) == Id.multiply(t, a));

    HnnGroup S(endo("rank: 2\na -> b\nb -> a a\n"));
    HnnElement conj = S.multiply(S.multiply(S.inverse(S.stable_letter()), S.element(parse_word("a", 2))),
                                 S.stable_letter());
    CHECK(conj == HnnElement{0, parse_word("b", 2), 0});

    HnnGroup Sq(endo("rank: 2\na -> a a\nb -> b b\n"));
    HnnElement x = el(Sq, 1, "a", 1), y = el(Sq, 1, "b", 1);
    CHECK(Sq.multiply(x, y) == HnnElement{1, parse_word("a b", 2), 1});
    CHECK(to_string(Sq.multiply(x, y)) == "t*ab*t^-1");

    CHECK_THROWS_AS(HnnGroup(endo("rank: 2\na -> a\nb -> a\n")), MathError);
}

TEST_CASE("group laws and word problem") {
    Rng rng(5);
    for (const char* text : {kId2, kG3, kTwist, "rank: 2\na -> a b\nb -> b a\n", "rank: 2\na -> b\nb -> a a\n"}) {
        HnnGroup G(endo(text));
        for (int k = 0; k < 60; ++k) {
            HnnElement x = random_element(rng, G, 6), y = random_element(rng, G, 6), z = random_element(rng, G, 6);
            CHECK(G.multiply(G.multiply(x, y), z) == G.multiply(x, G.multiply(y, z)));
            CHECK(G.multiply(x, G.inverse(x)) == HnnElement{});
            CHECK(G.normalize(x.p, x.w, x.q) == x);
            // inserting a relator t^-1 s t g(s)^-1 anywhere does not change the element
            std::vector<HnnElement> letters;
            HnnElement w = random_element(rng, G, 8, &letters);
            int s = 1 + k % G.rank();
            HnnElement rel = G.multiply(G.multiply(G.inverse(G.stable_letter()), G.element(generator(s))),
                                        G.multiply(G.stable_letter(),
                                                   G.element(inverse(G.endomorphism().images[s - 1]))));
            CHECK(rel == HnnElement{});
            size_t cut = letters.size() / 2;
            HnnElement v;
            for (size_t i = 0; i < letters.size(); ++i) {
                if (i == cut) {
                    v = G.multiply(v, G.inverse(G.stable_letter()));
                    v = G.multiply(v, G.element(generator(s)));
                    v = G.multiply(v, G.stable_letter());
                    v = G.multiply(v, G.element(inverse(G.endomorphism().images[s - 1])));
                }
                v = G.multiply(v, letters[i]);
            }
            CHECK(v == w);
        }
    }
}

TEST_CASE("automorphism exponent bound") {
    Rng rng(9);
    HnnGroup G(endo(kG3));
    for (int k = 1; k <= 12; ++k) {
        HnnElement x = random_element(rng, G, k);
        CHECK(x.p <= k);
        CHECK(x.q <= k);
    }
}

TEST_CASE("abelianization") {
    Abelianization id = abelianize(endo(kId2));
    CHECK(id.r() == 3);
    CHECK(id.coords.labels == std::vector<std::string>{"a", "b", "t"});

    Abelianization g3 = abelianize(endo(kG3));
    CHECK(g3.r() == 2);
    CHECK(g3.coords.labels == std::vector<std::string>{"a", "t"});
    for (int i = 0; i < 3; ++i) CHECK(g3.coords.gen[i] == HVec{1, 0});
    CHECK(g3.coords.t == HVec{0, 1});

    Abelianization tw = abelianize(endo(kTwist));
    CHECK(tw.r() == 2);
    CHECK(tw.coords.gen[0] == HVec{0, 0});
    CHECK(tw.coords.gen[1] == HVec{1, 0});
    CHECK(tw.coords.labels == std::vector<std::string>{"b", "t"});

    // torsion is discarded: a -> a^-1 gives H_1 = Z/2 + Z
    Abelianization inv = abelianize(endo("rank: 1\na -> A\n"));
    CHECK(inv.r() == 1);
    CHECK(inv.coords.gen[0] == HVec{0});
}

TEST_CASE("characters") {
    Endomorphism g3 = endo(kG3);
    Abelianization ab = abelianize(g3);
    HnnGroup G(g3);
    Character phi = parse_character("phi: a=1, t=0", ab);
    CHECK(evaluate(phi, ab, parse_word("c", 3)) == 1);
    Character psi = parse_character("a=0, t=1", ab);
    CHECK(psi.values == std::vector<Rational>{0, 1});
    CHECK(evaluate(psi, ab, HnnElement{2, Word(), 0}) == 2);
    CHECK(parse_character("a=1/2, b=1/2, c=1/2, t=3", ab).values == std::vector<Rational>{Rational(1, 2), 3});
    CHECK_THROWS_WITH_AS(parse_character("a=1, b=2, c=1, t=0", ab), doctest::Contains("relation"), InputError);
    CHECK_THROWS_WITH_AS(parse_character("a=1", ab), doctest::Contains("give values for: t"), InputError);
    CHECK_THROWS_AS(parse_character("z=1", ab), InputError);
    CHECK(parse_character(to_text(phi, ab), ab) == phi);

    Rng rng(2);
    for (int k = 0; k < 200; ++k) {
        std::vector<HnnElement> dummy;
        HnnElement x = random_element(rng, G, 7), y = random_element(rng, G, 7);
        Character c = character_from_integral(random_direction(rng, 2, 5));
        CHECK(evaluate(c, ab, G.multiply(x, y)) == evaluate(c, ab, x) + evaluate(c, ab, y));
        HnnElement comm = G.multiply(G.multiply(x, y), G.inverse(G.multiply(y, x)));
        CHECK(evaluate(c, ab, comm) == 0);
    }
}

TEST_CASE("fox matrix and A") {
    HnnGroup Id(endo(kId2));
    GRMatrix F = fox_matrix(Id);
    CHECK(F[0][0] == gr_one());
    CHECK(F[0][1].empty());

    HnnGroup G3(endo(kG3));
    GRMatrix F3 = fox_matrix(G3);
    auto fr = [&](std::initializer_list<std::pair<const char*, int>> list) {
        GRElem r;
        for (auto [s, c] : list) gr_add_term(r, G3.element(parse_word(s, 3)), c);
        return r;
    };
    CHECK(F3[0][1] == gr_one());
    CHECK(F3[2][0] == gr_one());
    CHECK(F3[2][1] == fr({{"a", 1}, {"a b c B", -1}}));
    CHECK(F3[2][2] == fr({{"a b", 1}, {"a b c B C", -1}}));

    HnnGroup Tw(endo(kTwist));
    GRMatrix Ft = fox_matrix(Tw);
    CHECK(Ft[1][0] == gr_elem(Tw.element(parse_word("b", 2))));
    CHECK(Ft[1][1] == gr_one());

    // A(id; S, a) = [[0, a - 1], [1 - t, b - 1]]
    GRMatrix A = build_A(Id, 0);
    GRElem one_minus_t = gr_one();
    gr_add_term(one_minus_t, Id.stable_letter(), -1);
    CHECK(A[0][0].empty());
    CHECK(A[1][0] == one_minus_t);
    GRElem am1 = gr_elem(Id.element(generator(1)));
    gr_add_term(am1, HnnElement{}, -1);
    CHECK(A[0][1] == am1);
    GRMatrix At = build_A(Id, 2);
    CHECK(At[0][0] == one_minus_t);
    CHECK(At[1][1] == one_minus_t);
    CHECK(At[0][1].empty());
    CHECK_THROWS_AS(build_A(Id, 3), InputError);
}

TEST_CASE("group ring identities") {
    Rng rng(13);
    for (int k = 0; k < 20; ++k) {
        Endomorphism g = random_injective(rng, 2 + k % 2, 4);
        HnnGroup G(g);
        int n = g.rank;
        // row-wise fundamental formula
        GRMatrix F = fox_matrix(G);
        for (int i = 0; i < n; ++i) {
            GRElem sum;
            for (int j = 0; j < n; ++j) {
                GRElem d = gr_one();
                gr_add_term(d, G.element(generator(j + 1)), -1);
                sum = gr_add(sum, gr_mul(G, F[i][j], d));
            }
            GRElem rhs = gr_one();
            gr_add_term(rhs, G.element(g.images[i]), -1);
            CHECK(sum == rhs);
        }
        // chain identity A(g;S) (s_1 - 1, ..., s_n - 1, t - 1)^T = 0
        GRMatrix A = build_A_full(G);
        GRMatrix col(n + 1, std::vector<GRElem>(1));
        for (int j = 0; j <= n; ++j) {
            HnnElement s = j < n ? G.element(generator(j + 1)) : G.stable_letter();
            col[j][0] = gr_elem(s);
            gr_add_term(col[j][0], HnnElement{}, -1);
        }
        GRMatrix prod = gr_matmul(G, A, col);
        for (int i = 0; i < n; ++i) CHECK(prod[i][0].empty());
    }
}

TEST_CASE("p0 projection") {
    Endomorphism g3 = endo(kG3);
    HnnGroup G(g3);
    Abelianization ab = abelianize(g3);
    GRElem x = gr_one();
    gr_add_term(x, HnnElement{1, parse_word("a a", 3), 0}, -1);
    CHECK(lp_to_string(project_p0(x, ab.coords), ab.coords.labels) == "-A^2*T + 1");
    GRElem c = gr_elem(G.element(parse_word("a b A B", 3)));
    gr_add_term(c, HnnElement{}, -1);
    CHECK(project_p0(c, ab.coords).empty());

    Rng rng(4);
    std::uniform_int_distribution<int> coef(-2, 2);
    auto rnd = [&]() {
        GRElem e;
        for (int i = 0; i < 3; ++i) {
            HnnElement h = G.normalize(i, random_word(rng, 3, 3), 0);
            gr_add_term(e, h, coef(rng));
        }
        return e;
    };
    for (int k = 0; k < 50; ++k) {
        GRElem u = rnd(), v = rnd(), w = rnd();
        CHECK(gr_mul(G, gr_mul(G, u, v), w) == gr_mul(G, u, gr_mul(G, v, w)));
        CHECK(project_p0(gr_mul(G, u, v), ab.coords) ==
              lp_mul(project_p0(u, ab.coords), project_p0(v, ab.coords)));
        CHECK(project_p0(gr_add(u, v), ab.coords) == lp_add(project_p0(u, ab.coords), project_p0(v, ab.coords)));
    }
    CHECK(project_p0(gr_one(), ab.coords) == lp_const(1, 2));
}
