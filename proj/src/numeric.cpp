#include "fbc/numeric.hpp"
#include "fbc/error.hpp"

#include <boost/integer/common_factor.hpp>

namespace fbc {

std::string rational_to_string(const Rational& q) {
    Int num = boost::multiprecision::numerator(q);
    Int den = boost::multiprecision::denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

Rational parse_rational(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw InputError("empty number");
    auto valid_int = [](const std::string& t) {
        size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i)
            if (!isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    auto slash = s.find('/');
    if (slash == std::string::npos) {
        if (!valid_int(s)) throw InputError("bad number '" + raw + "'");
        return Rational(Int(s[0] == '+' ? s.substr(1) : s));
    }
    std::string a = s.substr(0, slash), b = s.substr(slash + 1);
    if (!valid_int(a) || !valid_int(b)) throw InputError("bad number '" + raw + "'");
    Int den(b[0] == '+' ? b.substr(1) : b);
    if (den == 0) throw InputError("zero denominator in '" + raw + "'");
    return Rational(Int(a[0] == '+' ? a.substr(1) : a), den);
}

Int common_denominator(const std::vector<Rational>& v) {
    Int l = 1;
    for (const auto& q : v) {
        Int d = boost::multiprecision::denominator(q);
        l = l / boost::multiprecision::gcd(l, d) * d;
    }
    return l;
}

std::int64_t to_i64(const Int& x) {
    if (x > Int(INT64_MAX) || x < Int(INT64_MIN)) throw MathError("integer overflow: " + x.str());
    return static_cast<std::int64_t>(x);
}

}  // namespace fbc
