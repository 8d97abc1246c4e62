#include "fbc/cli.hpp"

#include "fbc/acceptance.hpp"
#include "fbc/alexander.hpp"
#include "fbc/error.hpp"
#include "fbc/l2.hpp"
#include "fbc/laurent.hpp"
#include "fbc/novikov.hpp"
#include "fbc/sampling.hpp"
#include "fbc/upg.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <sstream>

namespace fbc {

namespace {

using nlohmann::json;

struct RunConfig {
    std::string command;
    std::vector<std::string> inputs;
    std::string phi;
    std::int64_t max_height = 64;
    int samples = 50;
    bool json = false;
    std::uint64_t seed = 1;
    std::string data_dir = FBC_DATA_DIR;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Loaded {
    GroupPtr G;
    Abelianization ab;
};

Loaded load(const RunConfig& cfg) {
    if (cfg.inputs.empty()) throw InputError(cfg.command + ": missing endomorphism file");
    Endomorphism g = parse_endomorphism(slurp(cfg.inputs[0]));
    return {make_group(g), abelianize(g)};
}

Character need_phi(const RunConfig& cfg, const Abelianization& ab) {
    if (cfg.phi.empty()) throw InputError(cfg.command + ": --phi is required");
    return parse_character(cfg.phi, ab);
}

json character_json(const Character& phi, const Abelianization& ab) {
    std::vector<std::string> values;
    for (const auto& v : phi.values) values.push_back(rational_to_string(v));
    return {{"text", to_text(phi, ab)}, {"values", values}};
}

std::string vec_text(const HVec& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s + ")";
}

void emit(std::ostream& out, const RunConfig& cfg, const json& j, const std::string& text) {
    if (cfg.json)
        out << j.dump(2) << "\n";
    else
        out << text;
}

// ---- commands; each returns the exit status ----

int cmd_fox_matrix(const RunConfig& cfg, std::ostream& out) {
    Loaded L = load(cfg);
    GRMatrix F = fox_matrix(*L.G);
    json rows = json::array();
    std::ostringstream os;
    for (size_t i = 0; i < F.size(); ++i) {
        json row = json::array();
        for (size_t j = 0; j < F[i].size(); ++j) {
            row.push_back(to_string(F[i][j]));
            os << "d g(" << letter_name(i + 1) << ")/d " << letter_name(j + 1) << " = " << to_string(F[i][j]) << "\n";
        }
        rows.push_back(row);
    }
    emit(out, cfg, {{"fox_matrix", rows}}, os.str());
    return 0;
}

int cmd_abelianize(const RunConfig& cfg, std::ostream& out) {
    Loaded L = load(cfg);
    const HCoords& c = L.ab.coords;
    std::vector<std::string> smith;
    for (const auto& d : L.ab.smith) smith.push_back(d.str());
    json gens = json::object();
    std::ostringstream os;
    os << "H1 free rank " << c.r << " (basis";
    for (const auto& l : c.labels) os << " " << l;
    os << ")\nsmith diagonal of I - M:";
    for (const auto& d : smith) os << " " << d;
    os << "\n";
    for (int i = 0; i < L.ab.n; ++i) {
        std::string name(1, letter_name(i + 1));
        gens[name] = c.gen[i];
        os << "p0(" << name << ") = " << vec_text(c.gen[i]) << "\n";
    }
    os << "p0(t) = " << vec_text(c.t) << "\n";
    emit(out, cfg, {{"rank", c.r}, {"basis", c.labels}, {"smith", smith}, {"generators", gens}, {"t", c.t}}, os.str());
    return 0;
}

int cmd_alexander(const RunConfig& cfg, std::ostream& out) {
    Loaded L = load(cfg);
    AlexanderResult a = alexander_polynomial(*L.G, L.ab);
    std::string delta = lp_to_string(a.delta, a.labels);
    json pj = to_json(a.polytope, a.labels);
    std::ostringstream os;
    os << "Delta = " << delta << "\npolytope " << pj.dump() << "\n";
    emit(out, cfg, {{"delta", delta}, {"b1", a.b1}, {"polytope", pj}}, os.str());
    return 0;
}

int cmd_bns_test(const RunConfig& cfg, std::ostream& out) {
    Loaded L = load(cfg);
    Character phi = need_phi(cfg, L.ab);
    BnsResult r = bns_membership_f2(*L.G, L.ab, phi);
    std::string verdict = r.in ? "in" : "out";
    std::string chart = r.chart ? r.chart->describe() : "";
    std::ostringstream os;
    os << verdict << "\n";
    os << "class: [-phi], " << to_text(phi, L.ab) << "\n";
    if (r.chart) os << "chart: " << chart << "\n";
    if (!r.kernel_case) os << "E = " << to_string(r.E) << "\nmu(E) = " << to_string(r.muE) << "\n";
    os << "reason: " << r.reason << "\n";
    emit(out, cfg,
         {{"verdict", verdict}, {"class", "[-phi]"}, {"phi", character_json(phi, L.ab)}, {"kernel_case", r.kernel_case},
          {"chart", chart}, {"E", to_string(r.E)}, {"muE", to_string(r.muE)}, {"reason", r.reason}},
         os.str());
    return 0;
}

int cmd_bns_components(const RunConfig& cfg, std::ostream& out) {
    Loaded L = load(cfg);
    SigmaReport r = bns_components(*L.G, L.ab);
    std::ostringstream os;
    os << "b1 " << r.b1 << ", " << r.cells.size() << " cells, " << r.components << " components"
       << (r.certified ? "" : " (not certified)") << "\n";
    for (const auto& c : r.cells)
        os << (c.dim == 0 ? "ray  " : c.dim == 1 ? "arc  " : "face ") << vec_text(c.rep) << " " << (c.in ? "in" : "out")
           << (c.resolved ? "" : " (unresolved)") << "\n";
    emit(out, cfg, to_json(r, L.ab.coords.labels), os.str());
    return r.certified ? 0 : 1;
}

int cmd_thurston_norm(const RunConfig& cfg, std::ostream& out) {
    Loaded L = load(cfg);
    Character phi = need_phi(cfg, L.ab);
    L2Engine eng(L.G, L.ab, {cfg.max_height, cfg.seed});
    std::string w = rational_to_string(thurston_width(eng, phi));
    emit(out, cfg, {{"phi", character_json(phi, L.ab)}, {"thurston_norm", w}}, w + "\n");
    return 0;
}

int cmd_l2_polytope(const RunConfig& cfg, std::ostream& out) {
    Loaded L = load(cfg);
    L2Engine eng(L.G, L.ab, {cfg.max_height, cfg.seed});
    L2Result res = l2_polytope(eng, cfg.samples);
    json j = {{"polytope", to_json(res.polytope, L.ab.coords.labels)},
              {"det_polytope", to_json(res.det_polytope)},
              {"s_point", res.s_point},
              {"verified", res.verified},
              {"virtual", res.virtual_only},
              {"oracle_calls", res.oracle_calls},
              {"note", res.note}};
    std::ostringstream os;
    os << "P_L2 " << j["polytope"].dump() << "\n";
    os << (res.verified ? "verified" : "NOT verified") << " (" << res.widths.size() << " fresh directions)";
    if (res.virtual_only) os << ", virtual";
    if (!res.note.empty()) os << ": " << res.note;
    os << "\n";
    emit(out, cfg, j, os.str());
    return res.verified ? 0 : 1;
}

struct UpgInput {
    Loaded L;
    SplittingCertificate cert;
};

UpgInput load_upg(const RunConfig& cfg) {
    if (cfg.inputs.size() < 2) throw InputError(cfg.command + ": expected an endomorphism and a certificate file");
    Loaded L = load(cfg);
    SplittingCertificate cert = parse_certificate(slurp(cfg.inputs[1]), L.G->rank());
    return {std::move(L), std::move(cert)};
}

json upg_json(const UpgTorsion& tor, const Abelianization& ab) {
    std::vector<std::string> ts;
    for (const auto& x : tor.t) ts.push_back(to_string(x));
    return {{"t", ts}, {"points", tor.points}, {"polytope", to_json(VirtualPolytope::of(tor.polytope), ab.coords.labels)}};
}

int cmd_upg_polytope(const RunConfig& cfg, std::ostream& out) {
    UpgInput u = load_upg(cfg);
    UpgTorsion tor = upg_torsion_polytope(*u.L.G, u.L.ab, u.cert);
    json j = upg_json(tor, u.L.ab);
    std::ostringstream os;
    for (size_t i = 0; i < tor.t.size(); ++i)
        os << "t" << i + 1 << " = " << to_string(tor.t[i]) << ", p0 = " << vec_text(tor.points[i]) << "\n";
    os << "polytope " << j["polytope"].dump() << "\n";
    emit(out, cfg, j, os.str());
    return 0;
}

int cmd_upg_sigma(const RunConfig& cfg, std::ostream& out) {
    UpgInput u = load_upg(cfg);
    Character phi = need_phi(cfg, u.L.ab);
    UpgTorsion tor = upg_torsion_polytope(*u.L.G, u.L.ab, u.cert);
    UpgSigma s = upg_sigma(tor, phi.integral());
    std::ostringstream os;
    os << (s.in ? "in" : "out") << "\nphi(t_i):";
    for (auto v : s.values) os << " " << v;
    os << "\nminimal face is " << (s.face_is_point ? "a point" : "not a point") << "\n";
    emit(out, cfg,
         {{"verdict", s.in ? "in" : "out"}, {"phi", character_json(phi, u.L.ab)}, {"values", s.values},
          {"face_is_point", s.face_is_point}, {"hyperplanes", s.hyperplanes}},
         os.str());
    return s.in == s.face_is_point ? 0 : 1;
}

int cmd_verify_inequalities(const RunConfig& cfg, std::ostream& out) {
    Loaded L = load(cfg);
    L2Engine eng(L.G, L.ab, {cfg.max_height, cfg.seed});
    Rng rng(cfg.seed);
    std::vector<HVec> dirs;
    for (int k = 0; k < cfg.samples; ++k) dirs.push_back(random_direction(rng, L.ab.r(), 6));
    InequalityReport r = check_inequalities(eng, dirs);
    json rows = json::array();
    std::ostringstream os;
    for (const auto& row : r.rows) {
        rows.push_back({{"phi", row.phi},
                        {"alexander", rational_to_string(row.alexander)},
                        {"thurston", rational_to_string(row.thurston)},
                        {"ok", row.ok}});
        if (!row.ok)
            os << "violation at " << vec_text(row.phi) << ": alexander " << rational_to_string(row.alexander)
               << " > thurston " << rational_to_string(row.thurston) << "\n";
    }
    os << r.rows.size() << " directions, " << r.violations << " violations, " << r.equalities << " equalities, "
       << r.undetermined.size() << " undetermined\n";
    if (r.fibred_ok) os << "fibred class: width " << r.fibred_width << (*r.fibred_ok ? " (ok)" : " (MISMATCH)") << "\n";
    json j = {{"b1", r.b1}, {"rows", rows}, {"violations", r.violations}, {"equalities", r.equalities},
              {"undetermined", r.undetermined}};
    if (r.fibred_ok) j["fibred"] = {{"ok", *r.fibred_ok}, {"width", r.fibred_width}};
    emit(out, cfg, j, os.str());
    bool bad = r.violations > 0 || (r.fibred_ok && !*r.fibred_ok);
    return bad ? 1 : 0;
}

int cmd_selftest(const RunConfig& cfg, std::ostream& out) {
    auto results = run_acceptance(cfg.data_dir, cfg.seed, cfg.json ? nullptr : &out);
    int failed = 0;
    json j = json::array();
    for (const auto& r : results) {
        failed += !r.pass;
        j.push_back({{"criterion", r.id}, {"title", r.title}, {"pass", r.pass}, {"seconds", r.seconds}, {"detail", r.detail}});
    }
    if (cfg.json) out << json{{"criteria", j}, {"failed", failed}}.dump(2) << "\n";
    return failed ? 1 : 0;
}

int report_error(std::ostream& out, std::ostream& err, bool as_json, const std::string& kind, const std::string& msg,
                 int status) {
    if (as_json)
        out << json{{"error", {{"kind", kind}, {"message", msg}}}}.dump(2) << "\n";
    else
        err << "error (" << kind << "): " << msg << "\n";
    return status;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Invariants of descending HNN extensions of free groups", "fbc"};
    app.require_subcommand(1, 1);
    app.add_option("--phi", cfg.phi, "character, e.g. \"a=1, b=0, t=2\"");
    app.add_option("--max-height", cfg.max_height, "height budget for Novikov expansions")->check(CLI::PositiveNumber);
    app.add_option("--samples", cfg.samples, "random directions")->check(CLI::NonNegativeNumber);
    app.add_flag("--json", cfg.json, "machine-readable output");
    app.add_option("--seed", cfg.seed, "seed for randomized checks");
    app.add_option("--data", cfg.data_dir, "data directory for selftest");

    struct Spec {
        const char* name;
        const char* help;
        int files;
        int (*run)(const RunConfig&, std::ostream&);
    };
    const std::vector<Spec> specs{
        {"fox-matrix", "Fox matrix of g", 1, cmd_fox_matrix},
        {"abelianize", "free part of H1 and the projection p0", 1, cmd_abelianize},
        {"alexander", "Alexander polynomial and polytope", 1, cmd_alexander},
        {"bns-test", "membership of the class [-phi] in the BNS invariant (rank 2)", 1, cmd_bns_test},
        {"bns-components", "cell decomposition of the BNS invariant (rank 2)", 1, cmd_bns_components},
        {"thurston-norm", "Thurston seminorm at --phi", 1, cmd_thurston_norm},
        {"l2-polytope", "L2-torsion polytope", 1, cmd_l2_polytope},
        {"upg-polytope", "torsion polytope from a UPG splitting certificate", 2, cmd_upg_polytope},
        {"upg-sigma", "BNS membership from a UPG splitting certificate", 2, cmd_upg_sigma},
        {"verify-inequalities", "Alexander norm <= Thurston norm on random directions", 1, cmd_verify_inequalities},
        {"selftest", "run the acceptance suite", 0, cmd_selftest},
    };
    std::map<CLI::App*, const Spec*> by_app;
    for (const auto& s : specs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->fallthrough();
        if (s.files == 1) sub->add_option("file", cfg.inputs, "endomorphism file")->required()->expected(1);
        if (s.files == 2) sub->add_option("files", cfg.inputs, "endomorphism and certificate files")->required()->expected(2);
        by_app[sub] = &s;
    }

    // CLI11 consumes arguments from the back.
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return 0;
        }
        return report_error(out, err, cfg.json, "input", e.what(), 2);
    }
    const Spec* spec = by_app.at(app.get_subcommands().front());
    cfg.command = spec->name;
    try {
        return spec->run(cfg, out);
    } catch (const InputError& e) {
        return report_error(out, err, cfg.json, "input", e.what(), 2);
    } catch (const MathError& e) {
        return report_error(out, err, cfg.json, "math", e.what(), 1);
    } catch (const Undetermined& e) {
        return report_error(out, err, cfg.json, "undetermined", e.what(), 1);
    } catch (const NotInvertible& e) {
        return report_error(out, err, cfg.json, "math", e.what(), 1);
    }
}

}  // namespace fbc
