#pragma once

#include "fbc/hnn.hpp"
#include "fbc/numeric.hpp"

#include <map>
#include <string>
#include <vector>

namespace fbc {

// Finitely supported element of ZG; no zero coefficients, keys in normal form.
using GRElem = std::map<HnnElement, Int>;
using GRMatrix = std::vector<std::vector<GRElem>>;

void gr_add_term(GRElem& x, const HnnElement& h, const Int& c);
GRElem gr_add(const GRElem& x, const GRElem& y);
GRElem gr_sub(const GRElem& x, const GRElem& y);
GRElem gr_neg(const GRElem& x);
GRElem gr_mul(const HnnGroup& G, const GRElem& x, const GRElem& y);
GRElem gr_one();
GRElem gr_elem(const HnnElement& h, const Int& c = 1);
GRElem gr_from_free(const FreeRingElem& x);
std::string to_string(const GRElem& x);

// F(g)_{ij} = d g(s_i) / d s_j
GRMatrix fox_matrix(const HnnGroup& G);
// n x (n+1): [Id - t F(g) | s_i - 1]
GRMatrix build_A_full(const HnnGroup& G);
// Removes column s: 0..n-1 for the generators, n for t.
GRMatrix build_A(const HnnGroup& G, int s);
GRMatrix gr_matmul(const HnnGroup& G, const GRMatrix& A, const GRMatrix& B);

// Laurent polynomials over Z[H], H = Z^r.
using LaurentPoly = std::map<HVec, Int>;
using LaurentMatrix = std::vector<std::vector<LaurentPoly>>;

LaurentPoly project_p0(const GRElem& x, const HCoords& c);
LaurentMatrix project_p0(const GRMatrix& A, const HCoords& c);

}  // namespace fbc
