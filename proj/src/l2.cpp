#include "fbc/l2.hpp"
#include "fbc/error.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace fbc {

namespace {

std::int64_t iabs(std::int64_t x) { return x < 0 ? -x : x; }

std::int64_t sup_norm(const HVec& v) {
    std::int64_t m = 0;
    for (auto x : v) m = std::max(m, iabs(x));
    return m;
}

bool is_zero(const HVec& v) {
    return std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; });
}

HVec primitive(HVec v) {
    std::int64_t g = 0;
    for (auto x : v) g = std::gcd(g, iabs(x));
    if (g > 1)
        for (auto& x : v) x /= g;
    return v;
}

// Primitive, with the first nonzero entry positive: one representative per hyperplane.
HVec canonical_normal(const HVec& v) {
    HVec p = primitive(v);
    for (auto x : p) {
        if (x == 0) continue;
        if (x < 0) p = scale(p, -1);
        break;
    }
    return p;
}

// Vertex of the segment [0, s] minimizing phi, when it is unique.
std::optional<HVec> segment_min(const HVec& s, const HVec& phi) {
    std::int64_t v = dot(s, phi);
    if (v < 0) return s;
    if (v > 0 || is_zero(s)) return HVec(s.size(), 0);
    return std::nullopt;
}

Frame make_frame(Chart chart, int removed) {
    Frame f;
    const HnnGroup& G = *chart.group;
    int n = G.rank();
    f.removed = removed;
    f.A = build_A(G, removed);
    f.s_point = removed < n ? chart.coords.gen[removed] : chart.coords.t;
    std::int64_t box = 0;
    for (const auto& row : f.A) {
        std::int64_t m = 0;
        for (const auto& e : row)
            for (const auto& [h, c] : e) m = std::max(m, sup_norm(chart.coords.of(h)));
        box += m;
    }
    f.box = std::max<std::int64_t>(1, box);
    f.chart = std::move(chart);
    return f;
}

}  // namespace

LeadingSample dieudonne_leading(const GRMatrix& A, const GradingPtr& gr, std::int64_t max_height) {
    LeadingSample s;
    s.phi = gr->phi;
    Elimination e;
    try {
        e = eliminate(A, gr, max_height);
    } catch (const Undetermined& u) {
        s.note = u.what();
        return s;
    }
    if (e.status != Elimination::Status::complete) {
        s.note = e.note;
        return s;
    }
    s.determined = true;
    s.level = e.level;
    std::set<HVec> pts;
    for (const auto& [h, c] : e.last) pts.insert(add(e.pivot_sum, gr->coords.of(h)));
    s.witness.assign(pts.begin(), pts.end());
    return s;
}

std::string Frame::describe() const {
    int n = chart.g.rank;
    std::string s = removed < n ? std::string(1, letter_name(removed + 1)) + "'" : std::string("t'");
    return chart.describe() + "; s=" + s;
}

L2Engine::L2Engine(GroupPtr G, Abelianization ab, L2Options opts)
    : G_(std::move(G)), ab_(std::move(ab)), opts_(opts), rng_(opts.seed) {
    int n = G_->rank();
    Chart id = identity_chart(*G_, ab_.coords);
    frames_.push_back(make_frame(id, n));
    for (int i = 0; i < n; ++i) frames_.push_back(make_frame(id, i));
    offset_.assign(frames_.size(), std::nullopt);
    offset_[0] = HVec(ab_.r(), 0);
    calibration_tried_.assign(frames_.size(), false);
}

int L2Engine::add_positive_chart(const HVec& phi) {
    if (G_->rank() != 2) return -1;
    auto bases = positive_bases(ab_.coords, phi, 8, 1);
    if (bases.empty()) return -1;
    for (int f = 0; f < frame_count(); ++f)
        if (frames_[f].chart.basis == bases[0] && frames_[f].removed == 0) return f;
    frames_.push_back(make_frame(basis_chart(*G_, ab_.coords, bases[0]), 0));
    offset_.push_back(std::nullopt);
    calibration_tried_.push_back(false);
    return frame_count() - 1;
}

const LeadingSample& L2Engine::raw(int f, const HVec& phi) {
    auto key = std::make_pair(f, phi);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const Frame& fr = frames_[f];
    LeadingSample s;
    try {
        s = dieudonne_leading(fr.A, make_grading(fr.chart.group, fr.chart.coords, phi), opts_.max_height);
    } catch (const NotInvertible& e) {
        s.phi = phi;
        s.note = e.what();
    }
    return cache_.emplace(key, std::move(s)).first->second;
}

// P_L2 vertex at generic phi in the frame's own translation.
std::optional<HVec> L2Engine::generic_point(int f, const HVec& phi) {
    const LeadingSample& s = raw(f, phi);
    if (!s.determined || s.witness.size() != 1) return std::nullopt;
    auto v = segment_min(frames_[f].s_point, phi);
    if (!v) return std::nullopt;
    return sub(s.witness[0], *v);
}

bool L2Engine::calibrate(int f) {
    if (offset_[f]) return true;
    if (calibration_tried_[f]) return false;
    calibration_tried_[f] = true;
    const Chart& ch = frames_[f].chart;
    bool positive_chart = ch.basis != Endomorphism::identity(G_->rank()).images;
    std::optional<HVec> candidate;
    int agreements = 0;
    for (int attempt = 0; attempt < 400 && agreements < 2; ++attempt) {
        HVec phi = random_direction(rng_, ab_.r(), 9);
        if (positive_chart && (dot(ch.coords.gen[0], phi) <= 0 || dot(ch.coords.gen[1], phi) <= 0)) continue;
        auto pf = generic_point(f, phi);
        if (!pf) continue;
        for (int g = 0; g < frame_count(); ++g) {
            if (g == f || !offset_[g]) continue;
            auto pg = generic_point(g, phi);
            if (!pg) continue;
            HVec off = add(sub(*pf, *pg), *offset_[g]);
            if (candidate && *candidate != off) return false;
            candidate = off;
            ++agreements;
            break;
        }
    }
    if (agreements < 2) return false;
    offset_[f] = candidate;
    return true;
}

std::optional<SupportSample> L2Engine::det_support(const HVec& phi) {
    const HVec s0 = frames_[0].s_point;
    const LeadingSample& s = raw(0, phi);
    if (s.determined) {
        SupportSample out{s.level, {}};
        if (s.witness.size() == 1) out.witness = s.witness;
        return out;
    }
    auto from_frame = [&](int f) -> std::optional<SupportSample> {
        const LeadingSample& r = raw(f, phi);
        if (!r.determined || !calibrate(f)) return std::nullopt;
        const HVec sf = frames_[f].s_point;
        std::int64_t l2 = r.level - std::min<std::int64_t>(0, dot(phi, sf)) - dot(phi, *offset_[f]);
        SupportSample out{l2 + std::min<std::int64_t>(0, dot(phi, s0)), {}};
        auto p = generic_point(f, phi);
        auto v0 = segment_min(s0, phi);
        if (p && v0) out.witness.push_back(add(sub(*p, *offset_[f]), *v0));
        return out;
    };
    for (int f = 1; f < frame_count(); ++f)
        if (auto out = from_frame(f)) return out;
    int f = add_positive_chart(phi);
    if (f > 0) return from_frame(f);
    return std::nullopt;
}

std::optional<std::int64_t> L2Engine::width_in_frame(const HVec& phi, int f) {
    const Frame& fr = frames_[f];
    std::int64_t seg = iabs(dot(phi, fr.s_point));
    const LeadingSample& lo = raw(f, phi);
    const LeadingSample& hi = raw(f, scale(phi, -1));
    if (lo.determined && hi.determined) return -hi.level - lo.level - seg;
    // Vertices at nearby generic directions span the same width.
    std::uniform_int_distribution<int> small(-3, 3);
    for (int attempt = 0; attempt < 4; ++attempt) {
        HVec eta(phi.size());
        std::int64_t l1 = 0;
        for (auto& x : eta) {
            x = small(rng_);
            l1 += iabs(x);
        }
        if (l1 == 0) continue;
        std::int64_t K = 2 * fr.box * l1 + 1;
        const LeadingSample& a = raw(f, add(scale(phi, K), eta));
        const LeadingSample& b = raw(f, add(scale(phi, -K), eta));
        if (!a.determined || !b.determined || a.witness.size() != 1 || b.witness.size() != 1) continue;
        return dot(phi, sub(b.witness[0], a.witness[0])) - seg;
    }
    return std::nullopt;
}

std::int64_t L2Engine::width(const HVec& phi) {
    if (is_zero(phi)) return 0;
    for (int f = 0; f < frame_count(); ++f)
        if (auto w = width_in_frame(phi, f)) return *w;
    for (const HVec& d : {phi, scale(phi, -1)}) {
        int f = add_positive_chart(d);
        if (f < 0) continue;
        if (auto w = width_in_frame(phi, f)) return *w;
    }
    throw Undetermined(opts_.max_height);
}

Rational thurston_width(L2Engine& engine, const Character& phi) {
    Int d;
    HVec v = phi.integral(&d);
    return Rational(engine.width(v)) / Rational(d);
}

L2Result l2_polytope(L2Engine& engine, int fresh_directions) {
    L2Result res;
    int r = engine.abelianization().r();
    res.s_point = engine.frame(0).s_point;
    ReconstructOptions opts;
    opts.box = engine.box();
    opts.seed = engine.options().seed;
    Reconstruction rec = reconstruct_from_support(
        r, [&](const HVec& phi) { return engine.det_support(phi); }, opts);
    res.oracle_calls = rec.oracle_calls;
    res.det_polytope = rec.polytope;
    if (rec.polytope.empty()) {
        res.note = "reconstruction failed: " + rec.note;
        return res;
    }
    bool ok = rec.verified;
    std::string note = rec.note;

    IntPolytope seg = IntPolytope::segment(HVec(r, 0), res.s_point);
    if (auto diff = minkowski_difference(rec.polytope, seg)) {
        res.polytope = VirtualPolytope::of(*diff);
    } else {
        res.polytope = {rec.polytope, seg};
        res.virtual_only = true;
    }

    Rng rng(engine.options().seed + 17);
    int mismatches = 0, undetermined = 0;
    int checked = 0;
    for (int attempt = 0; checked < fresh_directions && attempt < 4 * fresh_directions; ++attempt) {
        HVec phi = random_direction(rng, r, 6);
        auto s = engine.det_support(phi);
        if (!s) {
            ++undetermined;
            continue;
        }
        ++checked;
        if (s->level != rec.polytope.min_value(phi)) ++mismatches;
        try {
            std::int64_t w = engine.width(phi);
            res.widths.emplace_back(phi, w);
            if (w != seminorm_eval(res.polytope, phi)) ++mismatches;
        } catch (const Undetermined&) {
            ++undetermined;
        }
    }
    if (mismatches > 0) {
        ok = false;
        note = std::to_string(mismatches) + " fresh directions disagree with the reconstruction";
    } else if (checked < fresh_directions) {
        ok = false;
        note = "only " + std::to_string(checked) + " fresh directions were determined";
    }
    if (res.virtual_only) {
        ok = false;
        if (!note.empty()) note += "; ";
        note += "P(det) is not divisible by P(s-1)";
    }
    res.verified = ok;
    res.note = note;
    return res;
}

// ---------------------------------------------------------------------------
// BNS cell decomposition

BnsResult sigma_membership(const HnnGroup& G, const Abelianization& ab, const HVec& phi) {
    return bns_membership_f2(G, ab, character_from_integral(scale(phi, -1)));
}

namespace {

int sign(std::int64_t x) { return (x > 0) - (x < 0); }

HVec cross(const HVec& a, const HVec& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Angular order of plane vectors (x, y) starting at the positive x axis.
bool angle_less(std::int64_t ax, std::int64_t ay, std::int64_t bx, std::int64_t by) {
    auto half = [](std::int64_t x, std::int64_t y) { return (y > 0 || (y == 0 && x > 0)) ? 0 : 1; };
    int ha = half(ax, ay), hb = half(bx, by);
    if (ha != hb) return ha < hb;
    return ax * by - ay * bx > 0;
}

// Sorts vectors by angle in the plane spanned by u, w.
void sort_in_plane(std::vector<HVec>& v, const HVec& u, const HVec& w) {
    std::sort(v.begin(), v.end(), [&](const HVec& a, const HVec& b) {
        return angle_less(dot(a, u), dot(a, w), dot(b, u), dot(b, w));
    });
}

HVec plane_basis(const HVec& n) {
    for (int k = 0; k < 3; ++k) {
        HVec e(3, 0);
        e[k] = 1;
        HVec u = cross(n, e);
        if (!is_zero(u)) return primitive(u);
    }
    throw MathError("zero normal");
}

std::vector<HVec> cell_reps(int r, const std::vector<HVec>& normals) {
    std::vector<HVec> reps;
    if (r == 1) return {{1}, {-1}};
    if (r == 2) {
        std::vector<HVec> rays;
        for (const auto& n : normals) {
            rays.push_back({-n[1], n[0]});
            rays.push_back({n[1], -n[0]});
        }
        std::sort(rays.begin(), rays.end(),
                  [](const HVec& a, const HVec& b) { return angle_less(a[0], a[1], b[0], b[1]); });
        rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
        for (size_t i = 0; i < rays.size(); ++i) {
            reps.push_back(rays[i]);
            reps.push_back(primitive(add(rays[i], rays[(i + 1) % rays.size()])));
        }
        return reps;
    }
    std::set<HVec> vertices;
    for (size_t i = 0; i < normals.size(); ++i)
        for (size_t j = i + 1; j < normals.size(); ++j) {
            HVec v = cross(normals[i], normals[j]);
            if (is_zero(v)) continue;
            v = primitive(v);
            vertices.insert(v);
            vertices.insert(scale(v, -1));
        }
    reps.assign(vertices.begin(), vertices.end());
    for (const auto& n : normals) {
        std::vector<HVec> on;
        for (const auto& v : vertices)
            if (dot(v, n) == 0) on.push_back(v);
        HVec u = plane_basis(n);
        sort_in_plane(on, u, cross(n, u));
        for (size_t i = 0; i < on.size(); ++i) reps.push_back(primitive(add(on[i], on[(i + 1) % on.size()])));
    }
    for (const auto& v : vertices) {
        std::vector<HVec> dirs;
        for (const auto& n : normals) {
            if (dot(n, v) != 0) continue;
            HVec d = primitive(cross(n, v));
            dirs.push_back(d);
            dirs.push_back(scale(d, -1));
        }
        HVec u = plane_basis(v);
        sort_in_plane(dirs, u, cross(v, u));
        for (size_t i = 0; i < dirs.size(); ++i) {
            HVec d = add(dirs[i], dirs[(i + 1) % dirs.size()]);
            std::int64_t K = 1;
            for (const auto& n : normals) K += iabs(dot(n, d));
            reps.push_back(primitive(add(scale(v, K), d)));
        }
    }
    return reps;
}

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void join(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

std::optional<bool> SigmaReport::lookup(const HVec& phi) const {
    if (is_zero(phi)) return std::nullopt;
    std::vector<int> s;
    for (const auto& n : hyperplanes) s.push_back(sign(dot(phi, n)));
    for (const auto& c : cells)
        if (c.signs == s) return c.in;
    return std::nullopt;
}

SigmaReport bns_components(const HnnGroup& G, const Abelianization& ab, int max_rounds) {
    if (G.rank() != 2) throw InputError("bns-components needs a free group of rank 2");
    int r = ab.r();
    if (r < 1 || r > 3) throw InputError("bns-components supports b1 <= 3, got b1 = " + std::to_string(r));
    SigmaReport rep;
    rep.b1 = r;
    std::set<HVec> normals;
    auto add_normal = [&](const HVec& v) {
        if (r == 1 || is_zero(v)) return false;
        return normals.insert(canonical_normal(v)).second;
    };
    for (int i = 0; i < r; ++i) {
        HVec e(r, 0);
        e[i] = 1;
        add_normal(e);
    }
    for (const auto& v : ab.coords.gen) add_normal(v);
    add_normal(ab.coords.t);

    struct Probe {
        bool ok = false;
        bool in = false;
        std::string chart;
        std::vector<HVec> normals;
    };
    std::map<HVec, Probe> probes;
    auto probe = [&](const HVec& phi) -> const Probe& {
        auto it = probes.find(phi);
        if (it != probes.end()) return it->second;
        Probe p;
        try {
            BnsResult b = sigma_membership(G, ab, phi);
            p.ok = true;
            p.in = b.in;
            if (b.chart) {
                p.chart = b.chart->describe();
                p.normals = {b.chart->coords.gen[0], b.chart->coords.gen[1]};
                std::set<HVec> pts;
                for (const auto& [h, c] : b.E) pts.insert(b.chart->coords.of(h));
                for (const auto& x : pts)
                    for (const auto& y : pts)
                        if (x < y) p.normals.push_back(sub(y, x));
            } else {
                p.chart = "kernel case";
            }
        } catch (const MathError& e) {
            p.chart = e.what();
        }
        return probes.emplace(phi, std::move(p)).first->second;
    };

    for (rep.rounds = 1; rep.rounds <= max_rounds; ++rep.rounds) {
        std::vector<HVec> nl(normals.begin(), normals.end());
        std::map<std::vector<int>, SigmaCell> cells;
        for (const auto& x : cell_reps(r, nl)) {
            SigmaCell c;
            c.rep = x;
            for (const auto& n : nl) c.signs.push_back(sign(dot(x, n)));
            int zeros = static_cast<int>(std::count(c.signs.begin(), c.signs.end(), 0));
            c.dim = r == 1 ? 0 : std::max(0, r - 1 - zeros);
            cells.emplace(c.signs, c);
        }
        bool grew = false;
        for (auto& [s, c] : cells) {
            const Probe& p = probe(c.rep);
            c.in = p.in;
            c.resolved = p.ok;
            c.chart = p.chart;
            for (const auto& n : p.normals) grew |= add_normal(n);
        }
        if (grew) continue;
        rep.hyperplanes = nl;
        for (auto& [s, c] : cells) rep.cells.push_back(c);
        rep.certified = std::all_of(rep.cells.begin(), rep.cells.end(), [](const SigmaCell& c) { return c.resolved; });
        break;
    }
    if (rep.cells.empty()) {
        // Round limit: report the last refinement without a certificate.
        rep.hyperplanes.assign(normals.begin(), normals.end());
        for (const auto& x : cell_reps(r, rep.hyperplanes)) {
            SigmaCell c;
            c.rep = x;
            for (const auto& n : rep.hyperplanes) c.signs.push_back(sign(dot(x, n)));
            if (std::any_of(rep.cells.begin(), rep.cells.end(), [&](const SigmaCell& o) { return o.signs == c.signs; }))
                continue;
            int zeros = static_cast<int>(std::count(c.signs.begin(), c.signs.end(), 0));
            c.dim = r == 1 ? 0 : std::max(0, r - 1 - zeros);
            const Probe& p = probe(c.rep);
            c.in = p.in;
            c.chart = p.chart;
            c.resolved = false;
            rep.cells.push_back(c);
        }
        rep.rounds = max_rounds;
    }

    std::set<std::string> charts;
    for (const auto& c : rep.cells) charts.insert(c.chart);
    rep.charts.assign(charts.begin(), charts.end());

    int m = static_cast<int>(rep.cells.size());
    UnionFind uf(m);
    auto below = [](const SigmaCell& a, const SigmaCell& b) {
        for (size_t i = 0; i < a.signs.size(); ++i)
            if (a.signs[i] != 0 && a.signs[i] != b.signs[i]) return false;
        return true;
    };
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j && rep.cells[i].in && rep.cells[j].in && rep.cells[i].dim < rep.cells[j].dim &&
                below(rep.cells[i], rep.cells[j]))
                uf.join(i, j);
    std::set<int> roots;
    for (int i = 0; i < m; ++i)
        if (rep.cells[i].in) roots.insert(uf.find(i));
    rep.components = static_cast<int>(roots.size());
    return rep;
}

nlohmann::json to_json(const SigmaReport& r, const std::vector<std::string>& labels) {
    nlohmann::json j;
    j["basis"] = labels;
    j["b1"] = r.b1;
    j["hyperplanes"] = r.hyperplanes;
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : r.cells)
        cells.push_back({{"dim", c.dim}, {"ray", c.rep}, {"in", c.in}, {"resolved", c.resolved}, {"chart", c.chart}});
    j["cells"] = cells;
    j["components"] = r.components;
    j["certified"] = r.certified;
    j["charts"] = r.charts;
    return j;
}

SigmaReport sigma_report_from_json(const nlohmann::json& j) {
    SigmaReport r;
    try {
        r.b1 = j.at("b1").get<int>();
        r.hyperplanes = j.at("hyperplanes").get<std::vector<HVec>>();
        for (const auto& c : j.at("cells")) {
            SigmaCell cell;
            cell.dim = c.at("dim").get<int>();
            cell.rep = c.at("ray").get<HVec>();
            cell.in = c.at("in").get<bool>();
            cell.resolved = c.at("resolved").get<bool>();
            cell.chart = c.at("chart").get<std::string>();
            for (const auto& h : r.hyperplanes) cell.signs.push_back(sign(dot(cell.rep, h)));
            r.cells.push_back(std::move(cell));
        }
        r.components = j.at("components").get<int>();
        r.certified = j.at("certified").get<bool>();
        r.charts = j.at("charts").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("sigma report json: ") + e.what());
    }
    return r;
}

// ---------------------------------------------------------------------------

InequalityReport check_inequalities(L2Engine& engine, const std::vector<HVec>& directions) {
    const HnnGroup& G = engine.group();
    const Abelianization& ab = engine.abelianization();
    InequalityReport rep;
    rep.b1 = ab.r();
    AlexanderResult alex = alexander_polynomial(G, ab);
    for (const auto& phi : directions) {
        InequalityRow row;
        row.phi = phi;
        Character ch = character_from_integral(phi);
        row.alexander = alexander_norm(alex, ch);
        try {
            row.thurston = thurston_width(engine, ch);
        } catch (const Undetermined& e) {
            std::ostringstream os;
            for (auto x : phi) os << x << ' ';
            rep.undetermined.push_back(os.str() + e.what());
            continue;
        }
        Rational lhs = row.alexander;
        if (rep.b1 == 1) lhs -= iabs(dot(phi, ab.coords.t));
        row.ok = lhs <= row.thurston;
        if (!row.ok) ++rep.violations;
        if (row.alexander == row.thurston) ++rep.equalities;
        rep.rows.push_back(row);
    }
    if (is_automorphism(G.endomorphism())) {
        HVec psi(ab.r(), 0);
        psi.back() = 1;
        rep.fibred_width = engine.width(psi);
        rep.fibred_ok = rep.fibred_width == G.rank() - 1;
    }
    return rep;
}

}  // namespace fbc
