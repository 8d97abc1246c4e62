#pragma once

#include "fbc/group_ring.hpp"
#include "fbc/hnn.hpp"
#include "fbc/polytope.hpp"

namespace fbc {

// Fraction-free (Bareiss) determinant over Z[H].
LaurentPoly laurent_det(const LaurentMatrix& M);
// Cofactor expansion; exponential, used as an oracle on small matrices.
LaurentPoly laurent_det_cofactor(const LaurentMatrix& M);

struct AlexanderResult {
    LaurentPoly delta;  // normalized
    LaurentPoly det;    // det p0(A(g;S,s)) before division
    VirtualPolytope polytope;
    int b1 = 0;
    int removed = 0;  // 0..n-1 generator, n = t
    std::vector<std::string> labels;
};

// removed < 0 picks the first generator with p0(s) != 0 when b1 >= 2 (t otherwise).
AlexanderResult alexander_polynomial(const HnnGroup& G, const Abelianization& ab, int removed = -1);
Rational alexander_norm(const AlexanderResult& res, const Character& phi);

}  // namespace fbc
