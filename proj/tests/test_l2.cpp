#include <doctest.h>

#include "fbc/l2.hpp"
#include "fbc/sampling.hpp"

using namespace fbc;

namespace {

struct Ctx {
    GroupPtr G;
    Abelianization ab;
    explicit Ctx(const std::string& text) : G(make_group(parse_endomorphism(text))), ab(abelianize(G->endomorphism())) {}
    HVec phi(const char* text) const { return parse_character(text, ab).integral(); }
};

std::string identity_text(int n) {
    std::string s = "rank: " + std::to_string(n) + "\n";
    for (int i = 1; i <= n; ++i) s += std::string(1, letter_name(i)) + " -> " + letter_name(i) + "\n";
    return s;
}

std::string conj_text(int k) {
    return "rank: 2\na -> a\nb -> " + std::string(k, 'a') + " b " + std::string(k, 'A') + "\n";
}

const char* kG3 = "rank: 3\na -> b\nb -> c\nc -> a b c B C\n";

}  // namespace

TEST_CASE("leading terms of the Dieudonne determinant") {
    Ctx id(identity_text(2));
    GRMatrix Ax = build_A(*id.G, 0);
    auto gr = [&](HVec phi) { return make_grading(id.G, id.ab.coords, phi); };
    LeadingSample s = dieudonne_leading(Ax, gr({1, 1, 1}));
    CHECK(s.determined);
    CHECK(s.level == 0);
    CHECK(s.witness == std::vector<HVec>{{0, 0, 0}});

    LeadingSample m = dieudonne_leading(Ax, gr({-1, -1, -1}));
    CHECK(m.level == -2);
    CHECK(m.witness == std::vector<HVec>{{1, 0, 1}});

    GRMatrix At = build_A(*id.G, 2);
    LeadingSample t = dieudonne_leading(At, gr({0, 0, 1}));
    CHECK(t.level == 0);
    CHECK(t.witness == std::vector<HVec>{{0, 0, 0}});
    CHECK_FALSE(dieudonne_leading(At, gr({1, 1, 0})).determined);
}

TEST_CASE("polytopes of the basic examples") {
    for (int n = 2; n <= 4; ++n) {
        Ctx id(identity_text(n));
        L2Engine eng(id.G, id.ab);
        L2Result res = l2_polytope(eng);
        CHECK(res.verified);
        HVec top(n + 1, 0);
        top[n] = n - 1;
        CHECK(polt_equal(res.polytope, VirtualPolytope::of(IntPolytope::segment(HVec(n + 1, 0), top))));
    }
    for (int k = 1; k <= 3; ++k) {
        Ctx cj(conj_text(k));
        L2Engine eng(cj.G, cj.ab);
        L2Result res = l2_polytope(eng);
        CHECK(res.verified);
        CHECK(polt_equal(res.polytope, VirtualPolytope::of(IntPolytope::segment({0, 0, 0}, {k, 0, 1}))));
    }
    Ctx g3(kG3);
    L2Engine eng(g3.G, g3.ab);
    L2Result res = l2_polytope(eng);
    CHECK(res.verified);
    CHECK(polt_equal(res.polytope, VirtualPolytope::of(IntPolytope::hull(2, {{0, 0}, {2, 1}, {0, 2}}))));
    // Independent commutative pipeline gives the same triangle.
    AlexanderResult alex = alexander_polynomial(*g3.G, g3.ab);
    CHECK(polt_equal(res.polytope, alex.polytope));
}

TEST_CASE("thurston widths") {
    for (int n = 2; n <= 4; ++n) {
        Ctx id(identity_text(n));
        L2Engine eng(id.G, id.ab);
        HVec psi(n + 1, 0);
        psi[n] = 1;
        CHECK(eng.width(psi) == n - 1);
    }
    Ctx g3(kG3);
    L2Engine eng(g3.G, g3.ab);
    CHECK(thurston_width(eng, parse_character("a=0, t=1", g3.ab)) == 2);
    CHECK(thurston_width(eng, parse_character("a=1, t=0", g3.ab)) == 2);
    CHECK(thurston_width(eng, parse_character("a=1/2, t=0", g3.ab)) == 1);
}

TEST_CASE("width is a seminorm and does not depend on the chart") {
    Rng rng(5);
    int pairs = 0;
    for (int k = 0; k < 12; ++k) {
        Endomorphism g = k % 2 ? random_automorphism(rng, 2, 5) : random_injective(rng, 2, 3);
        GroupPtr G = make_group(g);
        Abelianization ab = abelianize(g);
        L2Engine eng(G, ab);
        for (int j = 0; j < 4; ++j) {
            HVec phi = random_direction(rng, ab.r(), 4), psi = random_direction(rng, ab.r(), 4);
            std::int64_t w = eng.width(phi);
            CHECK(w >= 0);
            CHECK(eng.width(scale(phi, -1)) == w);
            CHECK(eng.width(scale(phi, 2)) == 2 * w);
            if (add(phi, psi) != HVec(ab.r(), 0)) CHECK(eng.width(add(phi, psi)) <= w + eng.width(psi));
            eng.add_positive_chart(phi);
            std::vector<std::int64_t> seen;
            for (int f = 0; f < eng.frame_count(); ++f)
                if (auto wf = eng.width_in_frame(phi, f)) seen.push_back(*wf);
            for (size_t a = 1; a < seen.size(); ++a) CHECK(seen[a] == seen[0]);
            pairs += static_cast<int>(seen.size()) - 1;
        }
    }
    CHECK(pairs >= 50);
}

TEST_CASE("alexander polytope is a shadow of the L2 polytope") {
    Rng rng(9);
    for (int k = 0; k < 6; ++k) {
        Endomorphism g = random_injective(rng, 2, 3);
        GroupPtr G = make_group(g);
        Abelianization ab = abelianize(g);
        L2Engine eng(G, ab);
        L2Result res = l2_polytope(eng, 10);
        AlexanderResult alex = alexander_polynomial(*G, ab);
        for (int j = 0; j < 10; ++j) {
            HVec phi = random_direction(rng, ab.r(), 5);
            CHECK(width(alex.polytope.plus, phi) - width(alex.polytope.minus, phi) <=
                  width(res.det_polytope, phi));
        }
    }
}

TEST_CASE("bns components") {
    Ctx id(identity_text(2));
    SigmaReport r = bns_components(*id.G, id.ab);
    CHECK(r.certified);
    CHECK(r.components == 2);
    for (const auto& c : r.cells) CHECK(c.in == (c.rep[2] != 0));

    for (int k = 1; k <= 2; ++k) {
        Ctx cj(conj_text(k));
        SigmaReport rc = bns_components(*cj.G, cj.ab);
        CHECK(rc.certified);
        CHECK(rc.components == 2);
        for (const auto& c : rc.cells) CHECK(c.in == (c.rep[2] + k * c.rep[0] != 0));
        Rng rng(k);
        for (int j = 0; j < 100; ++j) {
            HVec phi = random_direction(rng, 3, 5);
            CHECK(rc.lookup(phi) == sigma_membership(*cj.G, cj.ab, phi).in);
        }
    }

    Ctx tw("rank: 2\na -> a\nb -> b a\n");
    SigmaReport rt = bns_components(*tw.G, tw.ab);
    CHECK(rt.b1 == 2);
    CHECK(rt.components == 2);
    for (const auto& c : rt.cells) CHECK(c.in == (c.rep[1] != 0));
    auto j = to_json(rt, tw.ab.coords.labels);
    CHECK(j["components"] == 2);
}

TEST_CASE("inequality harness") {
    Ctx g3(kG3);
    L2Engine eng(g3.G, g3.ab);
    Rng rng(3);
    std::vector<HVec> dirs;
    for (int k = 0; k < 50; ++k) dirs.push_back(random_direction(rng, 2, 6));
    InequalityReport r = check_inequalities(eng, dirs);
    CHECK(r.violations == 0);
    CHECK(r.equalities == 50);
    CHECK(r.fibred_ok == true);

    Ctx id3(identity_text(3));
    L2Engine e3(id3.G, id3.ab);
    InequalityReport r3 = check_inequalities(e3, {{0, 0, 0, 1}});
    CHECK(r3.rows.at(0).alexander == 2);
    CHECK(r3.rows.at(0).thurston == 2);
    CHECK(r3.fibred_width == 2);

    for (int k = 0; k < 4; ++k) {
        Endomorphism g = random_injective(rng, 2, 3);
        L2Engine e(make_group(g), abelianize(g));
        std::vector<HVec> d;
        for (int j = 0; j < 10; ++j) d.push_back(random_direction(rng, e.abelianization().r(), 5));
        InequalityReport ri = check_inequalities(e, d);
        CHECK(ri.violations == 0);
        CHECK(ri.undetermined.empty());
    }
}
