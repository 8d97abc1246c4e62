#include "fbc/group_ring.hpp"
#include "fbc/error.hpp"
#include "fbc/laurent.hpp"

#include <sstream>

namespace fbc {

void gr_add_term(GRElem& x, const HnnElement& h, const Int& c) {
    if (c == 0) return;
    auto it = x.find(h);
    if (it == x.end()) {
        x.emplace(h, c);
        return;
    }
    it->second += c;
    if (it->second == 0) x.erase(it);
}

GRElem gr_add(const GRElem& x, const GRElem& y) {
    GRElem r = x;
    for (const auto& [h, c] : y) gr_add_term(r, h, c);
    return r;
}

GRElem gr_sub(const GRElem& x, const GRElem& y) {
    GRElem r = x;
    for (const auto& [h, c] : y) gr_add_term(r, h, -c);
    return r;
}

GRElem gr_neg(const GRElem& x) {
    GRElem r;
    for (const auto& [h, c] : x) r.emplace(h, -c);
    return r;
}

GRElem gr_mul(const HnnGroup& G, const GRElem& x, const GRElem& y) {
    GRElem r;
    for (const auto& [a, ca] : x)
        for (const auto& [b, cb] : y) gr_add_term(r, G.multiply(a, b), ca * cb);
    return r;
}

GRElem gr_one() { return gr_elem(HnnElement{}); }

GRElem gr_elem(const HnnElement& h, const Int& c) {
    GRElem r;
    gr_add_term(r, h, c);
    return r;
}

GRElem gr_from_free(const FreeRingElem& x) {
    GRElem r;
    for (const auto& [w, c] : x) gr_add_term(r, HnnElement{0, w, 0}, c);
    return r;
}

std::string to_string(const GRElem& x) {
    if (x.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [h, c] : x) {
        Int a = c;
        if (first) {
            if (a < 0) os << "-";
        } else {
            os << (a < 0 ? " - " : " + ");
        }
        if (a < 0) a = -a;
        if (a != 1) os << a << "*";
        os << to_string(h);
        first = false;
    }
    return os.str();
}

GRMatrix fox_matrix(const HnnGroup& G) {
    int n = G.rank();
    GRMatrix F(n, std::vector<GRElem>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) F[i][j] = gr_from_free(fox_derivative(G.endomorphism().images[i], j + 1));
    return F;
}

GRMatrix build_A_full(const HnnGroup& G) {
    int n = G.rank();
    GRMatrix F = fox_matrix(G);
    GRElem t = gr_elem(G.stable_letter());
    GRMatrix A(n, std::vector<GRElem>(n + 1));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            GRElem e = gr_neg(gr_mul(G, t, F[i][j]));
            if (i == j) gr_add_term(e, HnnElement{}, 1);
            A[i][j] = e;
        }
        GRElem s = gr_elem(G.element(generator(i + 1)));
        gr_add_term(s, HnnElement{}, -1);
        A[i][n] = s;
    }
    return A;
}

GRMatrix build_A(const HnnGroup& G, int s) {
    int n = G.rank();
    if (s < 0 || s > n) throw InputError("removed column must be a generator or t");
    GRMatrix full = build_A_full(G);
    GRMatrix A(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= n; ++j)
            if (j != s) A[i].push_back(full[i][j]);
    return A;
}

GRMatrix gr_matmul(const HnnGroup& G, const GRMatrix& A, const GRMatrix& B) {
    size_t m = A.size(), k = B.size(), n = k ? B[0].size() : 0;
    GRMatrix C(m, std::vector<GRElem>(n));
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t l = 0; l < k; ++l) C[i][j] = gr_add(C[i][j], gr_mul(G, A[i][l], B[l][j]));
    return C;
}

LaurentPoly project_p0(const GRElem& x, const HCoords& c) {
    LaurentPoly r;
    for (const auto& [h, coef] : x) lp_add_term(r, c.of(h), coef);
    return r;
}

LaurentMatrix project_p0(const GRMatrix& A, const HCoords& c) {
    LaurentMatrix M(A.size());
    for (size_t i = 0; i < A.size(); ++i)
        for (const auto& e : A[i]) M[i].push_back(project_p0(e, c));
    return M;
}

}  // namespace fbc
