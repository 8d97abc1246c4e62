#include "fbc/alexander.hpp"
#include "fbc/error.hpp"
#include "fbc/laurent.hpp"

namespace fbc {

LaurentPoly laurent_det(const LaurentMatrix& M0) {
    size_t n = M0.size();
    if (n == 0) return {};
    for (const auto& row : M0)
        if (row.size() != n) throw InputError("determinant of a non-square matrix");
    int r = -1;
    for (const auto& row : M0)
        for (const auto& e : row)
            if (!e.empty()) r = static_cast<int>(e.begin()->first.size());
    if (r < 0) return {};
    LaurentMatrix M = M0;
    LaurentPoly prev = lp_const(1, r);
    bool negate = false;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (M[k][k].empty()) {
            size_t i = k + 1;
            while (i < n && M[i][k].empty()) ++i;
            if (i == n) return {};
            std::swap(M[i], M[k]);
            negate = !negate;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) {
                LaurentPoly num = lp_sub(lp_mul(M[k][k], M[i][j]), lp_mul(M[i][k], M[k][j]));
                auto q = lp_divide_exact(num, prev);
                if (!q) throw MathError("Bareiss step is not exact");
                M[i][j] = std::move(*q);
            }
        prev = M[k][k];
    }
    LaurentPoly d = M[n - 1][n - 1];
    return negate ? lp_neg(d) : d;
}

LaurentPoly laurent_det_cofactor(const LaurentMatrix& M) {
    size_t n = M.size();
    if (n == 0) return {};
    if (n == 1) return M[0][0];
    LaurentPoly d;
    for (size_t j = 0; j < n; ++j) {
        if (M[0][j].empty()) continue;
        LaurentMatrix minor;
        for (size_t i = 1; i < n; ++i) {
            std::vector<LaurentPoly> row;
            for (size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(M[i][k]);
            minor.push_back(std::move(row));
        }
        LaurentPoly term = lp_mul(M[0][j], laurent_det_cofactor(minor));
        d = j % 2 ? lp_sub(d, term) : lp_add(d, term);
    }
    return d;
}

AlexanderResult alexander_polynomial(const HnnGroup& G, const Abelianization& ab, int removed) {
    const HCoords& c = ab.coords;
    int n = G.rank();
    AlexanderResult res;
    res.b1 = c.r;
    res.labels = c.labels;
    if (removed < 0) {
        removed = n;
        if (c.r >= 2)
            for (int i = 0; i < n; ++i)
                if (c.gen[i] != HVec(c.r, 0)) {
                    removed = i;
                    break;
                }
    }
    if (removed > n) throw InputError("removed column out of range");
    res.removed = removed;
    LaurentMatrix M = project_p0(build_A(G, removed), c);
    res.det = laurent_det(M);
    if (res.det.empty()) throw MathError("det p0(A) vanishes");
    if (c.r >= 2) {
        const HVec& s = removed == n ? c.t : c.gen[removed];
        if (s == HVec(c.r, 0)) throw InputError("removed generator has trivial image in H");
        LaurentPoly sm1 = lp_monomial(s);
        lp_add_term(sm1, HVec(c.r, 0), -1);
        auto q = lp_divide_exact(res.det, sm1);
        if (!q) throw MathError("det p0(A) is not divisible by p0(s) - 1");
        res.delta = lp_normalize(*q);
    } else {
        res.delta = lp_normalize(res.det);
    }
    std::vector<HVec> support;
    for (const auto& [e, coef] : res.delta) support.push_back(e);
    res.polytope = VirtualPolytope::of(newton_polytope(support, c.r));
    return res;
}

Rational alexander_norm(const AlexanderResult& res, const Character& phi) {
    return seminorm_eval(res.polytope, phi);
}

}  // namespace fbc
