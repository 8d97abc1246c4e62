#include "fbc/acceptance.hpp"

#include "fbc/alexander.hpp"
#include "fbc/error.hpp"
#include "fbc/l2.hpp"
#include "fbc/laurent.hpp"
#include "fbc/novikov.hpp"
#include "fbc/sampling.hpp"
#include "fbc/upg.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

namespace fbc {

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw InputError("cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Ctx {
    GroupPtr G;
    Abelianization ab;
    explicit Ctx(const std::string& text) : G(make_group(parse_endomorphism(text))), ab(abelianize(G->endomorphism())) {}
};

std::string vec_text(const HVec& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
}

// Counts checks and keeps the first few failure messages.
struct Tally {
    int checks = 0;
    int failures = 0;
    std::vector<std::string> notes;
    void check(bool ok, const std::string& what) {
        ++checks;
        if (ok) return;
        ++failures;
        if (notes.size() < 4) notes.push_back(what);
    }
    std::string summary(const std::string& extra = "") const {
        std::string s = std::to_string(checks - failures) + "/" + std::to_string(checks) + " checks";
        if (!extra.empty()) s += ", " + extra;
        for (const auto& n : notes) s += "; " + n;
        return s;
    }
};

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool is_one_to(const SeriesPtr& s, std::int64_t h) {
    s->ensure(h);
    for (const auto& [k, x] : s->slices()) {
        if (k > h) break;
        if (k == 0 ? x != gr_one() : !x.empty()) return false;
    }
    return s->slice(0) == gr_one();
}

struct Upg {
    std::string name;
    Ctx ctx;
    SplittingCertificate cert;
};

std::vector<Upg> load_corpus(const fs::path& dir) {
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".cert") names.push_back(e.path().stem().string());
    std::sort(names.begin(), names.end());
    std::vector<Upg> out;
    for (const auto& n : names) {
        Ctx c(slurp(dir / (n + ".endo")));
        int rank = c.G->rank();
        out.push_back({n, std::move(c), parse_certificate(slurp(dir / (n + ".cert")), rank)});
    }
    return out;
}

// ---- criteria ----

void crit1(const fs::path& data, Tally& t, double& worst) {
    auto run = [&](const std::string& file, const VirtualPolytope& expect) {
        auto t0 = std::chrono::steady_clock::now();
        Ctx c(slurp(data / file));
        L2Engine eng(c.G, c.ab);
        L2Result res = l2_polytope(eng);
        double s = elapsed(t0);
        worst = std::max(worst, s);
        t.check(res.verified, file + " unverified: " + res.note);
        t.check(polt_equal(res.polytope, expect), file + " polytope mismatch");
        t.check(s < 10, file + " took " + std::to_string(s) + "s");
    };
    for (int n = 2; n <= 4; ++n) {
        HVec top(n + 1, 0);
        top[n] = n - 1;
        run("id" + std::to_string(n) + ".endo", VirtualPolytope::of(IntPolytope::segment(HVec(n + 1, 0), top)));
    }
    for (int k = 1; k <= 3; ++k)
        run("conj_a" + std::to_string(k) + ".endo", VirtualPolytope::of(IntPolytope::segment({0, 0, 0}, {k, 0, 1})));
    run("g3.endo", VirtualPolytope::of(IntPolytope::hull(2, {{0, 0}, {2, 1}, {0, 2}})));
}

void crit2(const fs::path& data, Tally& t) {
    Ctx id(slurp(data / "id2.endo"));
    AlexanderResult a = alexander_polynomial(*id.G, id.ab);
    t.check(lp_associate(a.delta, lp_parse("T - 1", a.labels)), "id2: " + lp_to_string(a.delta, a.labels));

    Ctx g3(slurp(data / "g3.endo"));
    AlexanderResult b = alexander_polynomial(*g3.G, g3.ab);
    t.check(lp_associate(b.delta, lp_parse("T^2 - A^2*T + A*T + T + 1", b.labels)),
            "g3: " + lp_to_string(b.delta, b.labels));
    t.check(polt_equal(b.polytope, VirtualPolytope::of(IntPolytope::hull(2, {{0, 0}, {2, 1}, {0, 2}}))),
            "g3 Newton polytope is not the triangle");

    Ctx tw(slurp(data / "twist.endo"));
    AlexanderResult c = alexander_polynomial(*tw.G, tw.ab);
    t.check(lp_associate(c.delta, lp_parse("T - 1", c.labels)), "twist: " + lp_to_string(c.delta, c.labels));
}

void crit3(const fs::path& data, Tally& t) {
    Ctx g3(slurp(data / "g3.endo"));
    L2Engine eng(g3.G, g3.ab);
    Rational wt = thurston_width(eng, parse_character("a=0, t=1", g3.ab));
    Rational wa = thurston_width(eng, parse_character("a=1, t=0", g3.ab));
    t.check(wt == 2, "g3 t-width " + rational_to_string(wt));
    t.check(wa == 2, "g3 a-width " + rational_to_string(wa));
    for (int n = 2; n <= 4; ++n) {
        Ctx id(slurp(data / ("id" + std::to_string(n) + ".endo")));
        L2Engine e(id.G, id.ab);
        HVec psi(n + 1, 0);
        psi[n] = 1;
        InequalityReport r = check_inequalities(e, {psi});
        t.check(r.fibred_ok == true && r.fibred_width == n - 1,
                "id" + std::to_string(n) + " width at psi " + std::to_string(r.fibred_width));
    }
}

void crit4(const fs::path& data, Tally& t, Rng& rng, std::string& counts) {
    auto upg = [&](const std::string& name) {
        Ctx c(slurp(data / "upg" / (name + ".endo")));
        auto cert = parse_certificate(slurp(data / "upg" / (name + ".cert")), c.G->rank());
        return upg_torsion_polytope(*c.G, c.ab, cert);
    };
    struct Case {
        std::string file, upg;
        std::function<bool(const HVec&)> in;
    };
    std::vector<Case> cases{{"id2.endo", "id2", [](const HVec& p) { return p[2] != 0; }}};
    for (int k = 1; k <= 2; ++k)
        cases.push_back({"conj_a" + std::to_string(k) + ".endo", "conj_a" + std::to_string(k),
                         [k](const HVec& p) { return p[2] + k * p[0] != 0; }});
    for (const auto& cs : cases) {
        Ctx c(slurp(data / cs.file));
        SigmaReport r = bns_components(*c.G, c.ab);
        UpgTorsion tor = upg(cs.upg);
        t.check(r.certified, cs.file + " decomposition not certified");
        t.check(r.components == 2, cs.file + " components " + std::to_string(r.components));
        for (const auto& cell : r.cells) {
            t.check(cell.in == cs.in(cell.rep), cs.file + " cell " + vec_text(cell.rep));
            t.check(cell.in == upg_sigma(tor, cell.rep).in, cs.file + " upg-sigma at " + vec_text(cell.rep));
        }
        counts += (counts.empty() ? "" : ", ") + cs.upg + ": " + std::to_string(r.components) + " components";
        for (int j = 0; j < 200; ++j) {
            HVec phi = random_direction(rng, 3, 6);
            bool single = sigma_membership(*c.G, c.ab, phi).in;
            t.check(r.lookup(phi) == single, cs.file + " ray " + vec_text(phi));
            t.check(single == cs.in(phi), cs.file + " single ray " + vec_text(phi));
        }
    }
}

void crit5(Tally& t, Rng& rng, int& rows) {
    for (int k = 0; k < 20; ++k) {
        Endomorphism g = random_injective(rng, 2, 3);
        L2Engine e(make_group(g), abelianize(g));
        std::vector<HVec> dirs;
        for (int j = 0; j < 50; ++j) dirs.push_back(random_direction(rng, e.abelianization().r(), 6));
        InequalityReport r = check_inequalities(e, dirs);
        rows += static_cast<int>(r.rows.size());
        std::string tag = to_text(g);
        for (auto& ch : tag)
            if (ch == '\n') ch = ' ';
        t.check(r.violations == 0, std::to_string(r.violations) + " violations for " + tag);
        t.check(r.undetermined.empty(), std::to_string(r.undetermined.size()) + " undetermined for " + tag);
    }
}

void crit6(const fs::path& data, Tally& t, Rng& rng, int& members) {
    auto corpus = load_corpus(data / "upg");
    members = static_cast<int>(corpus.size());
    t.check(members >= 5, "corpus has " + std::to_string(members) + " members");
    for (auto& u : corpus) {
        const HnnGroup& G = *u.ctx.G;
        const Abelianization& ab = u.ctx.ab;
        t.check(verify_certificate(G.endomorphism(), u.cert).ok, u.name + " certificate rejected");
        UpgTorsion tor = upg_torsion_polytope(G, ab, u.cert);
        L2Engine eng(u.ctx.G, ab);
        AlexanderResult alex = alexander_polynomial(G, ab);
        std::optional<VirtualPolytope> l2;
        if (G.rank() == 2) {
            L2Result res = l2_polytope(eng);
            t.check(res.verified, u.name + " L2 polytope unverified");
            t.check(polt_equal(res.polytope, VirtualPolytope::of(tor.polytope)), u.name + " upg != l2 polytope");
            l2 = res.polytope;
        }
        for (int j = 0; j < 50; ++j) {
            HVec phi = random_direction(rng, ab.r(), 5);
            std::int64_t w = eng.width(phi);
            t.check(alexander_norm(alex, character_from_integral(phi)) == w, u.name + " alexander width at " + vec_text(phi));
            t.check(width(tor.polytope, phi) == w, u.name + " upg width at " + vec_text(phi));
            UpgSigma s = upg_sigma(tor, phi);
            t.check(s.in == s.face_is_point, u.name + " upg sigma vs face at " + vec_text(phi));
            if (l2) {
                bool point = l2->minus.vertices().size() == 1 && face_min(l2->plus, phi).vertices().size() == 1;
                bool in = sigma_membership(G, ab, phi).in;
                t.check(in == point, u.name + " sigma vs L2 face at " + vec_text(phi));
            }
        }
    }
}

void crit7(const fs::path& data, Tally& t, Rng& rng) {
    // Fox calculus.
    for (int k = 0; k < 1000; ++k) {
        int n = 2 + k % 3;
        Word w = random_word(rng, n, 30);
        t.check(fundamental_formula_check(w, n), "fox formula on " + to_string(w));
    }
    // Polytope group.
    for (int k = 0; k < 500; ++k) {
        int r = 2 + k % 2;
        IntPolytope P = random_polytope(rng, r, 1 + k % 7, 3), Q = random_polytope(rng, r, 1 + k % 5, 3);
        IntPolytope PQ = minkowski_sum(P, Q);
        auto d = minkowski_difference(PQ, Q);
        t.check(d && *d == P, "cancellation");
        HVec phi = random_direction(rng, r, 6);
        t.check(width(PQ, phi) == width(P, phi) + width(Q, phi), "width additivity");
        t.check(face_min(PQ, phi) == minkowski_sum(face_min(P, phi), face_min(Q, phi)), "face additivity");
    }
    // Novikov series on polynomially growing groups, to height 20.
    for (const char* file : {"id2.endo", "twist.endo", "conj_a1.endo"}) {
        Ctx c(slurp(data / file));
        int n = c.G->rank(), r = c.ab.r();
        std::uniform_int_distribution<int> coef(-2, 2), pw(0, 2);
        int tested = 0;
        while (tested < 10) {
            HVec phi = random_direction(rng, r, 3);
            auto gr = make_grading(c.G, c.ab.coords, phi);
            auto rnd = [&]() {
                GRElem e;
                for (int i = 0; i < 4; ++i)
                    gr_add_term(e, c.G->normalize(pw(rng), random_word(rng, n, 3), pw(rng)), coef(rng));
                return e;
            };
            SeriesPtr sx = embed(rnd(), gr), sy = embed(rnd(), gr);
            auto lx = sx->leading(1), ly = sy->leading(1);
            if (!lx || !ly || !lx->is_unit()) continue;
            ++tested;
            std::string tag = std::string(file) + " at " + vec_text(phi);
            t.check(mu(series_mul(sx, sy), 64) == gr_mul(*c.G, lx->slice, ly->slice), "mu multiplicativity " + tag);
            SeriesPtr ix = series_invert(sx);
            t.check(is_one_to(series_mul(sx, ix), 20), "right inverse " + tag);
            t.check(is_one_to(series_mul(ix, sx), 20), "left inverse " + tag);
        }
    }
    // Bareiss against cofactor expansion.
    std::uniform_int_distribution<int> c(-3, 3), e(-2, 2);
    for (int k = 0; k < 200; ++k) {
        LaurentMatrix R(3, std::vector<LaurentPoly>(3));
        for (auto& row : R)
            for (auto& x : row)
                for (int i = 0; i < 3; ++i) lp_add_term(x, {e(rng), e(rng)}, c(rng));
        t.check(laurent_det(R) == laurent_det_cofactor(R), "bareiss vs cofactor");
    }
    // Width does not depend on the chart: count (g, phi, chart pair) triples that agree.
    int triples = 0;
    for (int k = 0; triples < 50 && k < 40; ++k) {
        Endomorphism g = k % 2 ? random_automorphism(rng, 2, 5) : random_injective(rng, 2, 3);
        L2Engine eng(make_group(g), abelianize(g));
        for (int j = 0; j < 4; ++j) {
            HVec phi = random_direction(rng, eng.abelianization().r(), 4);
            eng.add_positive_chart(phi);
            std::vector<std::int64_t> seen;
            for (int f = 0; f < eng.frame_count(); ++f)
                if (auto w = eng.width_in_frame(phi, f)) seen.push_back(*w);
            for (size_t a = 1; a < seen.size(); ++a) {
                t.check(seen[a] == seen[0], "chart dependence at " + vec_text(phi));
                ++triples;
            }
        }
    }
    t.check(triples >= 50, "only " + std::to_string(triples) + " chart pairs");
}

}  // namespace

std::string format_line(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << " [" << r.title << "] ";
    os.setf(std::ios::fixed);
    os.precision(2);
    os << r.seconds << "s: " << r.detail;
    return os.str();
}

std::vector<CriterionResult> run_acceptance(const std::string& data_dir, std::uint64_t seed, std::ostream* out) {
    const fs::path data(data_dir);
    Rng rng(seed);
    std::vector<CriterionResult> results;
    auto run = [&](int id, const std::string& title, double budget, const std::function<std::string(Tally&)>& body) {
        CriterionResult r{id, title, false, 0, ""};
        Tally t;
        auto t0 = std::chrono::steady_clock::now();
        std::string extra;
        try {
            extra = body(t);
        } catch (const std::exception& e) {
            t.check(false, std::string("exception: ") + e.what());
        }
        r.seconds = elapsed(t0);
        t.check(r.seconds < budget, "over the " + std::to_string(static_cast<int>(budget)) + "s budget");
        r.pass = t.failures == 0;
        r.detail = t.summary(extra);
        if (out) *out << format_line(r) << std::endl;
        results.push_back(r);
    };

    run(1, "L2 polytopes of the basic examples", 70, [&](Tally& t) {
        double worst = 0;
        crit1(data, t, worst);
        std::ostringstream os;
        os.precision(2);
        os << std::fixed << "slowest " << worst << "s";
        return os.str();
    });
    run(2, "alexander polynomials", 1, [&](Tally& t) {
        crit2(data, t);
        return std::string();
    });
    run(3, "thurston widths", 60, [&](Tally& t) {
        crit3(data, t);
        return std::string();
    });
    run(4, "bns components", 30, [&](Tally& t) {
        std::string counts;
        crit4(data, t, rng, counts);
        return counts;
    });
    run(5, "inequality harness", 300, [&](Tally& t) {
        int rows = 0;
        crit5(t, rng, rows);
        return std::to_string(rows) + " directions";
    });
    run(6, "upg equalities", 60, [&](Tally& t) {
        int members = 0;
        crit6(data, t, rng, members);
        return std::to_string(members) + " certified examples";
    });
    run(7, "property suites", 300, [&](Tally& t) {
        crit7(data, t, rng);
        return std::string();
    });
    return results;
}

}  // namespace fbc
