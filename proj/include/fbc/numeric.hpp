#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace fbc {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Lattice point / integer functional on H_1(G)_f.
using HVec = std::vector<std::int64_t>;

inline std::int64_t dot(const HVec& a, const HVec& b) {
    std::int64_t s = 0;
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) s += a[i] * b[i];
    return s;
}

inline HVec add(const HVec& a, const HVec& b) {
    HVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline HVec sub(const HVec& a, const HVec& b) {
    HVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline HVec scale(const HVec& a, std::int64_t k) {
    HVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * k;
    return r;
}

std::string rational_to_string(const Rational& q);
Rational parse_rational(const std::string& s);

// Least common multiple of denominators; used to turn rational characters into integer ones.
Int common_denominator(const std::vector<Rational>& v);

std::int64_t to_i64(const Int& x);

}  // namespace fbc
