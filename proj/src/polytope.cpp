#include "fbc/polytope.hpp"
#include "fbc/error.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace fbc {

using i128 = __int128;

struct IntPolytope::Hull {
    int dim = 0;
    HVec base;
    std::vector<HVec> span_normals;  // primitive, ambient
    std::vector<HVec> facets;        // primitive inner normals, ambient
};

namespace {

HVec primitive(HVec v) {
    std::int64_t g = 0;
    for (auto x : v) g = std::gcd(g, x < 0 ? -x : x);
    if (g > 1)
        for (auto& x : v) x /= g;
    return v;
}

struct Frame {
    std::vector<int> pivots;
    std::vector<HVec> normals;
};

// Pivot columns of the difference matrix (projection onto them is injective on the affine span)
// and an integral basis of the functionals vanishing on the span.
Frame affine_frame(const std::vector<HVec>& pts, int r) {
    std::vector<std::vector<Rational>> D;
    for (size_t i = 1; i < pts.size(); ++i) {
        std::vector<Rational> row(r);
        for (int k = 0; k < r; ++k) row[k] = pts[i][k] - pts[0][k];
        D.push_back(std::move(row));
    }
    Frame f;
    size_t row = 0;
    for (int c = 0; c < r && row < D.size(); ++c) {
        size_t piv = row;
        while (piv < D.size() && D[piv][c] == 0) ++piv;
        if (piv == D.size()) continue;
        std::swap(D[piv], D[row]);
        Rational inv = 1 / D[row][c];
        for (auto& x : D[row]) x *= inv;
        for (size_t i = 0; i < D.size(); ++i) {
            if (i == row || D[i][c] == 0) continue;
            Rational m = D[i][c];
            for (int k = 0; k < r; ++k) D[i][k] -= m * D[row][k];
        }
        f.pivots.push_back(c);
        ++row;
    }
    std::vector<bool> is_pivot(r, false);
    for (int c : f.pivots) is_pivot[c] = true;
    for (int fc = 0; fc < r; ++fc) {
        if (is_pivot[fc]) continue;
        std::vector<Rational> x(r);
        x[fc] = 1;
        for (size_t i = 0; i < f.pivots.size(); ++i) x[f.pivots[i]] = -D[i][fc];
        Int den = common_denominator(x);
        HVec v(r);
        for (int k = 0; k < r; ++k) v[k] = to_i64(numerator(Rational(x[k] * den)));
        f.normals.push_back(primitive(v));
    }
    return f;
}

using P2 = std::array<std::int64_t, 2>;
using P3 = std::array<std::int64_t, 3>;

i128 cross2(const P2& o, const P2& a, const P2& b) {
    return i128(a[0] - o[0]) * (b[1] - o[1]) - i128(a[1] - o[1]) * (b[0] - o[0]);
}

i128 dist2(const P2& a, const P2& b) {
    i128 dx = a[0] - b[0], dy = a[1] - b[1];
    return dx * dx + dy * dy;
}

// Counter-clockwise vertex cycle starting at the lexicographic minimum; collinear points dropped.
std::vector<int> wrap2(const std::vector<P2>& p) {
    int n = static_cast<int>(p.size());
    int start = static_cast<int>(std::min_element(p.begin(), p.end()) - p.begin());
    std::vector<int> cyc;
    int cur = start;
    do {
        cyc.push_back(cur);
        int cand = cur == 0 ? 1 : 0;
        for (int j = 0; j < n; ++j) {
            if (j == cur) continue;
            i128 o = cross2(p[cur], p[cand], p[j]);
            if (o < 0 || (o == 0 && dist2(p[cur], p[j]) > dist2(p[cur], p[cand]))) cand = j;
        }
        cur = cand;
        if (static_cast<int>(cyc.size()) > n) throw MathError("gift wrapping did not close");
    } while (cur != start);
    return cyc;
}

struct Face {
    int a, b, c;
    P3 n;  // outward, not primitive
    bool alive = true;
};

P3 d3(const P3& a, const P3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

P3 cross3(const P3& u, const P3& v) {
    return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

i128 dot3(const P3& u, const P3& v) { return i128(u[0]) * v[0] + i128(u[1]) * v[1] + i128(u[2]) * v[2]; }

bool zero3(const P3& v) { return v[0] == 0 && v[1] == 0 && v[2] == 0; }

struct Hull3 {
    std::vector<int> vertices;
    std::vector<P3> inner;  // primitive inner facet normals
};

Hull3 incremental3(const std::vector<P3>& p) {
    int n = static_cast<int>(p.size());
    int i1 = 1;
    int i2 = -1, i3 = -1;
    for (int i = 2; i < n && i2 < 0; ++i)
        if (!zero3(cross3(d3(p[i1], p[0]), d3(p[i], p[0])))) i2 = i;
    if (i2 < 0) throw MathError("hull3: degenerate input");
    P3 nrm = cross3(d3(p[i1], p[0]), d3(p[i2], p[0]));
    for (int i = 2; i < n && i3 < 0; ++i)
        if (i != i2 && dot3(nrm, d3(p[i], p[0])) != 0) i3 = i;
    if (i3 < 0) throw MathError("hull3: degenerate input");

    std::vector<Face> faces;
    auto make_face = [&](int a, int b, int c, int opposite) {
        P3 m = cross3(d3(p[b], p[a]), d3(p[c], p[a]));
        if (dot3(m, d3(p[opposite], p[a])) > 0) {
            std::swap(b, c);
            m = P3{-m[0], -m[1], -m[2]};
        }
        faces.push_back({a, b, c, m, true});
    };
    make_face(0, i1, i2, i3);
    make_face(0, i1, i3, i2);
    make_face(0, i2, i3, i1);
    make_face(i1, i2, i3, 0);

    for (int k = 1; k < n; ++k) {
        if (k == i1 || k == i2 || k == i3) continue;
        std::vector<int> visible;
        for (int f = 0; f < static_cast<int>(faces.size()); ++f)
            if (faces[f].alive && dot3(faces[f].n, d3(p[k], p[faces[f].a])) > 0) visible.push_back(f);
        if (visible.empty()) continue;
        std::set<int> vis(visible.begin(), visible.end());
        std::map<std::pair<int, int>, int> owner;
        for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
            if (!faces[f].alive) continue;
            const Face& F = faces[f];
            owner[{F.a, F.b}] = f;
            owner[{F.b, F.c}] = f;
            owner[{F.c, F.a}] = f;
        }
        std::vector<std::pair<int, int>> horizon;
        for (int f : visible) {
            const Face& F = faces[f];
            for (auto [u, v] : {std::pair{F.a, F.b}, std::pair{F.b, F.c}, std::pair{F.c, F.a}}) {
                auto it = owner.find({v, u});
                if (it == owner.end() || !vis.count(it->second)) horizon.push_back({u, v});
            }
        }
        for (int f : visible) faces[f].alive = false;
        for (auto [u, v] : horizon) {
            P3 m = cross3(d3(p[v], p[u]), d3(p[k], p[u]));
            faces.push_back({u, v, k, m, true});
        }
    }

    auto prim3 = [](P3 v) {
        std::int64_t g = std::gcd(std::gcd(std::abs(v[0]), std::abs(v[1])), std::abs(v[2]));
        if (g > 1)
            for (auto& x : v) x /= g;
        return v;
    };
    std::map<int, std::set<P3>> incident;
    std::set<P3> normals;
    for (const Face& F : faces) {
        if (!F.alive) continue;
        P3 in = prim3(P3{-F.n[0], -F.n[1], -F.n[2]});
        normals.insert(in);
        for (int v : {F.a, F.b, F.c}) incident[v].insert(in);
    }
    Hull3 h;
    h.inner.assign(normals.begin(), normals.end());
    for (const auto& [v, ns] : incident) {
        std::vector<P3> list(ns.begin(), ns.end());
        bool full = false;
        for (size_t a = 0; a < list.size() && !full; ++a)
            for (size_t b = a + 1; b < list.size() && !full; ++b) {
                P3 c = cross3(list[a], list[b]);
                if (zero3(c)) continue;
                for (size_t d = 0; d < list.size() && !full; ++d)
                    if (dot3(c, list[d]) != 0) full = true;
            }
        if (full) h.vertices.push_back(v);
    }
    return h;
}

}  // namespace

IntPolytope IntPolytope::hull(int rank, std::vector<HVec> points) {
    if (points.empty()) throw InputError("polytope needs at least one point");
    for (const auto& p : points)
        if (static_cast<int>(p.size()) != rank) throw InputError("point has wrong rank");
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    auto h = std::make_shared<Hull>();
    Frame fr = affine_frame(points, rank);
    h->dim = static_cast<int>(fr.pivots.size());
    h->span_normals = fr.normals;
    auto lift = [&](const std::vector<std::int64_t>& nu) {
        HVec v(rank, 0);
        for (size_t k = 0; k < nu.size(); ++k) v[fr.pivots[k]] = nu[k];
        return primitive(v);
    };

    std::vector<HVec> verts;
    switch (h->dim) {
    case 0:
        verts = points;
        break;
    case 1: {
        int c = fr.pivots[0];
        auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                            [c](const HVec& a, const HVec& b) { return a[c] < b[c]; });
        verts = {*lo, *hi};
        h->facets = {lift({1}), lift({-1})};
        break;
    }
    case 2: {
        std::vector<P2> q;
        for (const auto& p : points) q.push_back({p[fr.pivots[0]], p[fr.pivots[1]]});
        auto cyc = wrap2(q);
        for (size_t i = 0; i < cyc.size(); ++i) {
            const P2& a = q[cyc[i]];
            const P2& b = q[cyc[(i + 1) % cyc.size()]];
            verts.push_back(points[cyc[i]]);
            h->facets.push_back(lift({-(b[1] - a[1]), b[0] - a[0]}));
        }
        break;
    }
    case 3: {
        std::vector<P3> q;
        for (const auto& p : points) q.push_back({p[fr.pivots[0]], p[fr.pivots[1]], p[fr.pivots[2]]});
        Hull3 h3 = incremental3(q);
        for (int v : h3.vertices) verts.push_back(points[v]);
        for (const auto& nu : h3.inner) h->facets.push_back(lift({nu[0], nu[1], nu[2]}));
        break;
    }
    default:
        throw MathError("convex hull in affine dimension " + std::to_string(h->dim) + " is not supported");
    }
    std::sort(verts.begin(), verts.end());
    std::sort(h->facets.begin(), h->facets.end());
    h->facets.erase(std::unique(h->facets.begin(), h->facets.end()), h->facets.end());
    h->base = verts.front();

    IntPolytope P;
    P.rank_ = rank;
    P.vertices_ = std::move(verts);
    P.hull_ = std::move(h);
    return P;
}

IntPolytope IntPolytope::point(const HVec& p) { return hull(static_cast<int>(p.size()), {p}); }

const IntPolytope::Hull& IntPolytope::hull_data() const {
    if (!hull_) throw MathError("empty polytope");
    return *hull_;
}

int IntPolytope::dimension() const { return hull_data().dim; }

bool IntPolytope::contains(const HVec& x) const {
    const Hull& h = hull_data();
    for (const auto& lam : h.span_normals)
        if (dot(lam, x) != dot(lam, h.base)) return false;
    for (const auto& nu : h.facets)
        if (dot(nu, x) < min_value(nu)) return false;
    return true;
}

std::vector<HVec> IntPolytope::facet_normals() const {
    const Hull& h = hull_data();
    std::vector<HVec> out = h.facets;
    for (const auto& lam : h.span_normals) {
        out.push_back(lam);
        out.push_back(scale(lam, -1));
    }
    return out;
}

std::int64_t IntPolytope::min_value(const HVec& phi) const {
    if (empty()) throw MathError("empty polytope");
    std::int64_t m = dot(phi, vertices_[0]);
    for (const auto& v : vertices_) m = std::min(m, dot(phi, v));
    return m;
}

std::int64_t IntPolytope::max_value(const HVec& phi) const { return -min_value(scale(phi, -1)); }

IntPolytope IntPolytope::translate(const HVec& v) const {
    IntPolytope P = *this;
    for (auto& x : P.vertices_) x = add(x, v);
    if (hull_) {
        auto h = std::make_shared<Hull>(*hull_);
        h->base = add(h->base, v);
        P.hull_ = std::move(h);
    }
    return P;
}

IntPolytope IntPolytope::normalized() const {
    if (empty()) return *this;
    return translate(scale(vertices_.front(), -1));
}

IntPolytope minkowski_sum(const IntPolytope& P, const IntPolytope& Q) {
    if (P.rank() != Q.rank()) throw InputError("Minkowski sum of polytopes of different rank");
    std::vector<HVec> pts;
    for (const auto& a : P.vertices())
        for (const auto& b : Q.vertices()) pts.push_back(add(a, b));
    return IntPolytope::hull(P.rank(), std::move(pts));
}

IntPolytope minkowski_scale(const IntPolytope& P, int k) {
    if (k < 0) throw InputError("negative Minkowski multiple");
    if (k == 0) return IntPolytope::origin(P.rank());
    std::vector<HVec> pts;
    for (const auto& v : P.vertices()) pts.push_back(scale(v, k));
    return IntPolytope::hull(P.rank(), std::move(pts));
}

IntPolytope face_min(const IntPolytope& P, const HVec& phi) {
    std::int64_t m = P.min_value(phi);
    std::vector<HVec> pts;
    for (const auto& v : P.vertices())
        if (dot(phi, v) == m) pts.push_back(v);
    return IntPolytope::hull(P.rank(), std::move(pts));
}

IntPolytope face_min(const IntPolytope& P, const Character& phi) { return face_min(P, phi.integral()); }

std::int64_t width(const IntPolytope& P, const HVec& phi) { return P.max_value(phi) - P.min_value(phi); }

std::optional<IntPolytope> minkowski_difference(const IntPolytope& P, const IntPolytope& S) {
    if (P.rank() != S.rank()) throw InputError("Minkowski difference of polytopes of different rank");
    std::vector<HVec> keep;
    for (const auto& p : P.vertices())
        for (const auto& s : S.vertices()) {
            HVec x = sub(p, s);
            bool ok = true;
            for (const auto& s2 : S.vertices())
                if (!P.contains(add(x, s2))) {
                    ok = false;
                    break;
                }
            if (ok) keep.push_back(x);
        }
    if (keep.empty()) return std::nullopt;
    IntPolytope Q = IntPolytope::hull(P.rank(), std::move(keep));
    if (minkowski_sum(Q, S) != P) return std::nullopt;
    return Q;
}

IntPolytope newton_polytope(const std::vector<HVec>& support, int rank) {
    if (support.empty()) return IntPolytope::origin(rank);
    return IntPolytope::hull(rank, support);
}

VirtualPolytope vp_add(const VirtualPolytope& X, const VirtualPolytope& Y) {
    return {minkowski_sum(X.plus, Y.plus), minkowski_sum(X.minus, Y.minus)};
}

VirtualPolytope vp_neg(const VirtualPolytope& X) { return {X.minus, X.plus}; }

bool polt_equal(const VirtualPolytope& X, const VirtualPolytope& Y) {
    return minkowski_sum(X.plus, Y.minus).normalized() == minkowski_sum(Y.plus, X.minus).normalized();
}

VirtualPolytope vp_simplify(const VirtualPolytope& X) {
    if (auto d = minkowski_difference(X.plus, X.minus)) return VirtualPolytope::of(d->normalized());
    return {X.plus.normalized(), X.minus.normalized()};
}

namespace {

Rational rational_width(const IntPolytope& P, const Character& phi) {
    Rational lo = phi.on(P.vertices()[0]), hi = lo;
    for (const auto& v : P.vertices()) {
        Rational x = phi.on(v);
        if (x < lo) lo = x;
        if (x > hi) hi = x;
    }
    return hi - lo;
}

}  // namespace

Rational seminorm_eval(const VirtualPolytope& X, const Character& phi) {
    return rational_width(X.plus, phi) - rational_width(X.minus, phi);
}

std::int64_t seminorm_eval(const VirtualPolytope& X, const HVec& phi) {
    return width(X.plus, phi) - width(X.minus, phi);
}

nlohmann::json to_json(const IntPolytope& P) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& v : P.vertices()) a.push_back(v);
    return a;
}

nlohmann::json to_json(const VirtualPolytope& X, const std::vector<std::string>& basis) {
    return {{"basis", basis}, {"plus", to_json(X.plus)}, {"minus", to_json(X.minus)}};
}

VirtualPolytope virtual_polytope_from_json(const nlohmann::json& j, std::vector<std::string>* basis) {
    try {
        auto read = [](const nlohmann::json& a) {
            std::vector<HVec> pts = a.get<std::vector<HVec>>();
            if (pts.empty()) throw InputError("polytope JSON: empty vertex list");
            return IntPolytope::hull(static_cast<int>(pts[0].size()), pts);
        };
        if (basis) *basis = j.at("basis").get<std::vector<std::string>>();
        VirtualPolytope X{read(j.at("plus")), read(j.at("minus"))};
        if (X.plus.rank() != X.minus.rank()) throw InputError("polytope JSON: rank mismatch");
        return X;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("polytope JSON: ") + e.what());
    }
}

Reconstruction reconstruct_from_support(int rank, const SupportOracle& oracle, const ReconstructOptions& opts) {
    Reconstruction res;
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<int> small(-3, 3);
    std::set<HVec> found;
    bool certified = true;

    auto call = [&](const HVec& phi) {
        ++res.oracle_calls;
        return oracle(phi);
    };
    auto absorb = [&](const SupportSample& s) {
        bool grew = false;
        for (const auto& w : s.witness) grew |= found.insert(w).second;
        return grew;
    };
    // A vertex of the face at nu, via the nearby direction K nu + eta.
    auto perturbed = [&](const HVec& nu) -> std::optional<SupportSample> {
        for (int attempt = 0; attempt < 6; ++attempt) {
            HVec eta(rank);
            std::int64_t l1 = 0;
            for (auto& x : eta) {
                x = small(rng);
                l1 += std::abs(x);
            }
            if (l1 == 0) continue;
            std::int64_t K = opts.box > 0 ? 2 * opts.box * l1 + 1 : 1000 * (l1 + 1);
            auto s = call(add(scale(nu, K), eta));
            if (s && s->witness.size() == 1) {
                if (opts.box <= 0) certified = false;
                return s;
            }
        }
        return std::nullopt;
    };

    std::vector<HVec> dirs;
    for (int i = 0; i < rank; ++i) {
        HVec e(rank, 0);
        e[i] = 1;
        dirs.push_back(e);
        dirs.push_back(scale(e, -1));
    }
    std::uniform_int_distribution<int> wide(-7, 7);
    for (int k = 0; k < opts.random_directions; ++k) {
        HVec d(rank);
        for (auto& x : d) x = wide(rng);
        if (std::all_of(d.begin(), d.end(), [](auto x) { return x == 0; })) continue;
        dirs.push_back(d);
    }
    for (const auto& d : dirs) {
        if (auto s = call(d)) absorb(*s);
        else if (auto s2 = perturbed(d)) absorb(*s2);
    }
    if (found.empty()) {
        res.note = "no support data";
        return res;
    }

    bool consistent = true, complete = false;
    for (int round = 0; round < opts.max_rounds; ++round) {
        IntPolytope Q = IntPolytope::hull(rank, {found.begin(), found.end()});
        bool changed = false;
        for (const auto& nu : Q.facet_normals()) {
            std::int64_t target = Q.min_value(nu);
            auto s = call(nu);
            if (s) {
                if (s->level > target) consistent = false;
                changed |= absorb(*s);
                if (s->level < target && s->witness.empty()) {
                    if (auto s2 = perturbed(nu)) changed |= absorb(*s2);
                }
            } else if (auto s2 = perturbed(nu)) {
                changed |= absorb(*s2);
            } else {
                certified = false;
            }
        }
        if (!changed) {
            complete = true;
            break;
        }
    }
    res.polytope = IntPolytope::hull(rank, {found.begin(), found.end()});
    res.verified = consistent && complete && certified;
    if (!consistent)
        res.note = "support data is not the support function of a polytope";
    else if (!complete)
        res.note = "round limit reached";
    else if (!certified)
        res.note = "some facets checked only at perturbed directions";
    return res;
}

}  // namespace fbc
