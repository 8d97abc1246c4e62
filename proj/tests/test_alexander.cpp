#include <doctest.h>

#include "fbc/alexander.hpp"
#include "fbc/laurent.hpp"
#include "fbc/sampling.hpp"

using namespace fbc;

namespace {

struct Case {
    HnnGroup G;
    Abelianization ab;
    explicit Case(const char* text) : G(parse_endomorphism(text)), ab(abelianize(G.endomorphism())) {}
};

const char* kId2 = "rank: 2\na -> a\nb -> b\n";
const char* kG3 = "rank: 3\na -> b\nb -> c\nc -> a b c B C\n";
const char* kTwist = "rank: 2\na -> a\nb -> b a\n";

}  // namespace

TEST_CASE("laurent polynomial text") {
    std::vector<std::string> lab{"a", "t"};
    LaurentPoly p = lp_parse("T^2 - A^2*T + A*T + T + 1", lab);
    CHECK(lp_to_string(p, lab) == "T^2 - A^2*T + A*T + T + 1");
    CHECK(lp_parse(lp_to_string(lp_parse("A^-1*T - 3", lab), lab), lab) == lp_parse("A^-1*T - 3", lab));
    CHECK(lp_to_string(lp_normalize(lp_parse("-A^-1*T^-1 + A^-1", lab)), lab) == "-T + 1");
}

TEST_CASE("exact division") {
    std::vector<std::string> lab{"a", "t"};
    LaurentPoly x = lp_parse("A*T - 1", lab), y = lp_parse("A^2 + T^-1 + 3", lab);
    auto q = lp_divide_exact(lp_mul(x, y), x);
    REQUIRE(q);
    CHECK(*q == y);
    CHECK_FALSE(lp_divide_exact(lp_add(lp_mul(x, y), lp_const(1, 2)), x));
}

TEST_CASE("determinants") {
    std::vector<std::string> lab{"t"};
    LaurentPoly omt = lp_parse("1 - T", lab);
    LaurentMatrix D{{omt, {}}, {{}, omt}};
    CHECK(laurent_det(D) == lp_mul(omt, omt));

    Case g3(kG3);
    LaurentMatrix M = project_p0(build_A(g3.G, 3), g3.ab.coords);
    LaurentPoly expect = lp_parse("-T^3 + A^2*T^2 - A*T^2 + A*T - A^2*T + 1", g3.ab.coords.labels);
    CHECK(laurent_det(M) == expect);
    CHECK(laurent_det_cofactor(M) == expect);

    Rng rng(1);
    std::uniform_int_distribution<int> c(-3, 3), e(-2, 2);
    for (int k = 0; k < 200; ++k) {
        LaurentMatrix R(3, std::vector<LaurentPoly>(3));
        for (auto& row : R)
            for (auto& x : row)
                for (int t = 0; t < 3; ++t) lp_add_term(x, {e(rng), e(rng)}, c(rng));
        CHECK(laurent_det(R) == laurent_det_cofactor(R));
    }
}

TEST_CASE("alexander polynomials") {
    Case id(kId2);
    auto a = alexander_polynomial(id.G, id.ab);
    CHECK(lp_to_string(a.delta, id.ab.coords.labels) == "-T + 1");
    CHECK(a.polytope.plus.vertices() == std::vector<HVec>{{0, 0, 0}, {0, 0, 1}});
    CHECK(alexander_norm(a, parse_character("a=0, b=0, t=1", id.ab)) == 1);

    Case g3(kG3);
    auto r = alexander_polynomial(g3.G, g3.ab);
    CHECK(r.b1 == 2);
    CHECK(lp_associate(r.delta, lp_parse("T^2 - A^2*T + A*T + T + 1", g3.ab.coords.labels)));
    CHECK(r.polytope.plus.normalized().vertices() == std::vector<HVec>{{0, 0}, {0, 2}, {2, 1}});
    CHECK(alexander_norm(r, parse_character("a=0, t=1", g3.ab)) == 2);
    CHECK(alexander_norm(r, parse_character("a=1, t=0", g3.ab)) == 2);

    Case tw(kTwist);
    auto s = alexander_polynomial(tw.G, tw.ab);
    CHECK(s.removed == 1);
    CHECK(lp_to_string(s.delta, tw.ab.coords.labels) == "-T + 1");

    Case inv("rank: 1\na -> A\n");
    auto u = alexander_polynomial(inv.G, inv.ab);
    CHECK(u.b1 == 1);
    CHECK(lp_to_string(u.delta, inv.ab.coords.labels) == "T + 1");
    AlexanderResult zero;
    zero.polytope = VirtualPolytope::of(IntPolytope::origin(2));
    CHECK(alexander_norm(zero, parse_character("a=1, t=1", g3.ab)) == 0);
}

TEST_CASE("independence of the removed column") {
    Rng rng(8);
    for (int k = 0; k < 30; ++k) {
        Endomorphism g = random_injective(rng, 2 + k % 2, 3);
        HnnGroup G(g);
        Abelianization ab = abelianize(g);
        auto ref = alexander_polynomial(G, ab);
        if (ab.r() < 2) continue;
        for (int s = 0; s <= g.rank; ++s) {
            const HVec& v = s == g.rank ? ab.coords.t : ab.coords.gen[s];
            if (v == HVec(ab.r(), 0)) continue;
            CHECK(lp_associate(alexander_polynomial(G, ab, s).delta, ref.delta));
        }
    }
}

TEST_CASE("newton polytope of a product") {
    Rng rng(12);
    std::uniform_int_distribution<int> c(-3, 3), e(-2, 2);
    for (int k = 0; k < 100; ++k) {
        int r = 2 + k % 2;
        auto rnd = [&]() {
            LaurentPoly p;
            while (p.empty())
                for (int t = 0; t < 4; ++t) {
                    HVec v(r);
                    for (auto& x : v) x = e(rng);
                    lp_add_term(p, v, c(rng));
                }
            return p;
        };
        LaurentPoly x = rnd(), y = rnd();
        auto np = [r](const LaurentPoly& p) {
            std::vector<HVec> s;
            for (const auto& [v, coef] : p) s.push_back(v);
            return newton_polytope(s, r);
        };
        CHECK(np(lp_mul(x, y)) == minkowski_sum(np(x), np(y)));
    }
}
