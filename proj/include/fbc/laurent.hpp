#pragma once

#include "fbc/group_ring.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fbc {

void lp_add_term(LaurentPoly& x, const HVec& e, const Int& c);
LaurentPoly lp_add(const LaurentPoly& x, const LaurentPoly& y);
LaurentPoly lp_sub(const LaurentPoly& x, const LaurentPoly& y);
LaurentPoly lp_neg(const LaurentPoly& x);
LaurentPoly lp_mul(const LaurentPoly& x, const LaurentPoly& y);
LaurentPoly lp_const(const Int& c, int r);
LaurentPoly lp_monomial(const HVec& e, const Int& c = 1);

// Exact quotient a / b, or nullopt if b does not divide a.
std::optional<LaurentPoly> lp_divide_exact(const LaurentPoly& a, const LaurentPoly& b);
// Multiply by the unit +-monomial that puts the lexicographically minimal exponent at the
// origin with a positive coefficient.
LaurentPoly lp_normalize(const LaurentPoly& x);
bool lp_associate(const LaurentPoly& a, const LaurentPoly& b);

// Sorted monomial text, variables named by uppercased labels: "T^2 - A^2*T + A*T + T + 1".
std::string lp_to_string(const LaurentPoly& x, const std::vector<std::string>& labels);
LaurentPoly lp_parse(const std::string& text, const std::vector<std::string>& labels);

}  // namespace fbc
