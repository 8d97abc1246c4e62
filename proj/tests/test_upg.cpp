#include <doctest.h>

#include "fbc/error.hpp"
#include "fbc/l2.hpp"
#include "fbc/upg.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fbc;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Upg {
    GroupPtr G;
    Abelianization ab;
    SplittingCertificate cert;
    Upg(const std::string& endo, const std::string& cert_text) {
        Endomorphism g = parse_endomorphism(endo);
        G = make_group(g);
        ab = abelianize(g);
        cert = parse_certificate(cert_text, g.rank);
    }
};

std::vector<std::string> corpus() {
    std::vector<std::string> names;
    for (const auto& e : std::filesystem::directory_iterator(std::string(FBC_DATA_DIR) + "/upg"))
        if (e.path().extension() == ".cert") names.push_back(e.path().stem().string());
    std::sort(names.begin(), names.end());
    return names;
}

Upg load(const std::string& name) {
    std::string dir = std::string(FBC_DATA_DIR) + "/upg/";
    return Upg(slurp(dir + name + ".endo"), slurp(dir + name + ".cert"));
}

}  // namespace

TEST_CASE("certificate parsing") {
    auto c = parse_certificate("# tree\n(case1 (leaf a)\n  (case2 (leaf b) x=c u=bBb))\nconj: a b\n", 3);
    CHECK(c.root->kind == CertNode::Kind::case1);
    CHECK(c.root->children[1]->u == parse_word("b", 3));
    CHECK(c.conj == parse_word("a b", 3));
    CHECK(to_text(c) == "(case1 (leaf a) (case2 (leaf b) x=c u=b))\nconj: a b\n");
    CHECK(to_text(parse_certificate(to_text(c), 3)) == to_text(c));
    CHECK_THROWS_AS(parse_certificate("(case1 (leaf a))", 2), InputError);
    CHECK_THROWS_AS(parse_certificate("(case3 (leaf a) (leaf b))", 2), InputError);
    CHECK_THROWS_AS(parse_certificate("(leaf a) (leaf b)", 2), InputError);
    CHECK_THROWS_AS(parse_certificate("(case2 (leaf a) u=b x=b)", 2), InputError);
    CHECK_THROWS_AS(parse_certificate("(leaf z)", 2), InputError);
}

TEST_CASE("certificate verification") {
    Upg id("rank: 2\na -> a\nb -> b\n", "(case1 (leaf a) (leaf b))");
    CHECK(verify_certificate(id.G->endomorphism(), id.cert).ok);
    Upg tw("rank: 2\na -> a\nb -> b a\n", "(case2 (leaf a) x=b u=a)");
    CHECK(verify_certificate(tw.G->endomorphism(), tw.cert).ok);

    Endomorphism g3 = parse_endomorphism("rank: 3\na -> b\nb -> c\nc -> a b c B C\n");
    CHECK_FALSE(is_unipotent(g3));
    auto bad = verify_certificate(g3, parse_certificate("(case1 (leaf a) (case1 (leaf b) (leaf c)))", 3));
    CHECK_FALSE(bad.ok);
    CHECK(bad.problems.front() == "abelianization is not unipotent");

    Endomorphism twist = tw.G->endomorphism();
    CHECK_FALSE(verify_certificate(twist, parse_certificate("(case2 (leaf a) x=b u=b)", 2)).ok);
    CHECK_FALSE(verify_certificate(twist, parse_certificate("(case1 (leaf a) (leaf b))", 2)).ok);
    CHECK_FALSE(verify_certificate(twist, parse_certificate("(case2 (leaf a) x=a u=a)", 2)).ok);
    CHECK_THROWS_AS(upg_torsion_polytope(*tw.G, tw.ab, parse_certificate("(case1 (leaf a) (leaf b))", 2)), MathError);

    for (const auto& name : corpus()) {
        CAPTURE(name);
        Upg u = load(name);
        auto chk = verify_certificate(u.G->endomorphism(), u.cert);
        CHECK(chk.ok);
    }
    CHECK(corpus().size() >= 5);
}

TEST_CASE("torsion polytopes of examples") {
    Upg id("rank: 2\na -> a\nb -> b\n", "(case1 (leaf a) (leaf b))");
    auto t = upg_torsion_polytope(*id.G, id.ab, id.cert);
    CHECK(t.t == std::vector<HnnElement>{id.G->stable_letter()});
    CHECK(t.polytope == IntPolytope::segment({0, 0, 0}, {0, 0, 1}));

    Upg tw("rank: 2\na -> a\nb -> b a\n", "(case2 (leaf a) x=b u=a)");
    auto tt = upg_torsion_polytope(*tw.G, tw.ab, tw.cert);
    CHECK(tt.t == std::vector<HnnElement>{tw.G->stable_letter()});
    CHECK(tt.polytope == IntPolytope::segment({0, 0}, {0, 1}));

    Upg cj("rank: 2\na -> a\nb -> a a b A A\n", "(case1 (leaf a) (leaf b))\nconj: A A");
    auto tc = upg_torsion_polytope(*cj.G, cj.ab, cj.cert);
    CHECK(tc.points == std::vector<HVec>{{2, 0, 1}});

    Upg n3 = load("nested3");
    auto tn = upg_torsion_polytope(*n3.G, n3.ab, n3.cert);
    CHECK(tn.t.size() == 2);
}

TEST_CASE("upg sigma") {
    Upg id = load("id2");
    auto t = upg_torsion_polytope(*id.G, id.ab, id.cert);
    CHECK_FALSE(upg_sigma(t, {1, 1, 0}).in);
    CHECK(upg_sigma(t, {1, 1, 2}).in);
    CHECK(upg_sigma(t, {1, 1, 2}).face_is_point);
    CHECK_FALSE(upg_sigma(t, {1, 1, 0}).face_is_point);
}

TEST_CASE("corpus agrees with the L2 and Alexander layers") {
    Rng rng(11);
    for (const auto& name : corpus()) {
        CAPTURE(name);
        Upg u = load(name);
        auto tor = upg_torsion_polytope(*u.G, u.ab, u.cert);
        CHECK(tor.t.size() == static_cast<size_t>(u.G->rank() - 1));
        L2Engine eng(u.G, u.ab);
        AlexanderResult alex = alexander_polynomial(*u.G, u.ab);
        if (u.G->rank() == 2) {
            L2Result res = l2_polytope(eng);
            CHECK(res.verified);
            CHECK(polt_equal(res.polytope, VirtualPolytope::of(tor.polytope)));
        }
        for (int j = 0; j < 50; ++j) {
            HVec phi = random_direction(rng, u.ab.r(), 5);
            std::int64_t w = width(tor.polytope, phi);
            CHECK(eng.width(phi) == w);
            CHECK(alexander_norm(alex, character_from_integral(phi)) == w);
            UpgSigma s = upg_sigma(tor, phi);
            CHECK(s.in == s.face_is_point);
            if (u.G->rank() == 2) {
                CHECK(sigma_membership(*u.G, u.ab, phi).in == s.in);
                CHECK(sigma_membership(*u.G, u.ab, scale(phi, -1)).in == s.in);
            }
        }
    }
}
