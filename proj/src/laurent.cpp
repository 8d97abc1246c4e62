#include "fbc/laurent.hpp"
#include "fbc/error.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace fbc {

void lp_add_term(LaurentPoly& x, const HVec& e, const Int& c) {
    if (c == 0) return;
    auto it = x.find(e);
    if (it == x.end()) {
        x.emplace(e, c);
        return;
    }
    it->second += c;
    if (it->second == 0) x.erase(it);
}

LaurentPoly lp_add(const LaurentPoly& x, const LaurentPoly& y) {
    LaurentPoly r = x;
    for (const auto& [e, c] : y) lp_add_term(r, e, c);
    return r;
}

LaurentPoly lp_sub(const LaurentPoly& x, const LaurentPoly& y) {
    LaurentPoly r = x;
    for (const auto& [e, c] : y) lp_add_term(r, e, -c);
    return r;
}

LaurentPoly lp_neg(const LaurentPoly& x) {
    LaurentPoly r;
    for (const auto& [e, c] : x) r.emplace(e, -c);
    return r;
}

LaurentPoly lp_mul(const LaurentPoly& x, const LaurentPoly& y) {
    LaurentPoly r;
    for (const auto& [a, ca] : x)
        for (const auto& [b, cb] : y) lp_add_term(r, add(a, b), ca * cb);
    return r;
}

LaurentPoly lp_const(const Int& c, int r) { return lp_monomial(HVec(r, 0), c); }

LaurentPoly lp_monomial(const HVec& e, const Int& c) {
    LaurentPoly p;
    lp_add_term(p, e, c);
    return p;
}

std::optional<LaurentPoly> lp_divide_exact(const LaurentPoly& a, const LaurentPoly& b) {
    if (b.empty()) return std::nullopt;
    if (a.empty()) return LaurentPoly{};
    size_t r = a.begin()->first.size();
    HVec lo(r), hi(r);
    auto bounds = [r](const LaurentPoly& p, HVec& mn, HVec& mx) {
        mn = mx = p.begin()->first;
        for (const auto& [e, c] : p)
            for (size_t i = 0; i < r; ++i) {
                mn[i] = std::min(mn[i], e[i]);
                mx[i] = std::max(mx[i], e[i]);
            }
    };
    HVec amin, amax, bmin, bmax;
    bounds(a, amin, amax);
    bounds(b, bmin, bmax);
    lo = sub(amin, bmin);
    hi = sub(amax, bmax);
    LaurentPoly rem = a, q;
    const auto& lb = *b.rbegin();
    while (!rem.empty()) {
        const auto la = *rem.rbegin();
        if (la.second % lb.second != 0) return std::nullopt;
        HVec m = sub(la.first, lb.first);
        for (size_t i = 0; i < r; ++i)
            if (m[i] < lo[i] || m[i] > hi[i]) return std::nullopt;
        Int c = la.second / lb.second;
        lp_add_term(q, m, c);
        for (const auto& [e, cb] : b) lp_add_term(rem, add(e, m), -c * cb);
    }
    return q;
}

LaurentPoly lp_normalize(const LaurentPoly& x) {
    if (x.empty()) return x;
    HVec shift = x.begin()->first;
    bool neg = x.begin()->second < 0;
    LaurentPoly r;
    for (const auto& [e, c] : x) r.emplace(sub(e, shift), neg ? Int(-c) : c);
    return r;
}

bool lp_associate(const LaurentPoly& a, const LaurentPoly& b) { return lp_normalize(a) == lp_normalize(b); }

namespace {

std::string var_name(const std::string& label) {
    std::string s = label;
    for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return s;
}

}  // namespace

std::string lp_to_string(const LaurentPoly& x, const std::vector<std::string>& labels) {
    if (x.empty()) return "0";
    std::vector<std::pair<HVec, Int>> terms(x.begin(), x.end());
    // most significant variable is the last one (t), then the others in order
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        const HVec& u = a.first;
        const HVec& v = b.first;
        size_t r = u.size();
        if (r && u[r - 1] != v[r - 1]) return u[r - 1] > v[r - 1];
        for (size_t i = 0; i + 1 < r; ++i)
            if (u[i] != v[i]) return u[i] > v[i];
        return false;
    });
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms) {
        Int a = c;
        if (first)
            os << (a < 0 ? "-" : "");
        else
            os << (a < 0 ? " - " : " + ");
        if (a < 0) a = -a;
        std::vector<std::string> factors;
        size_t r = e.size();
        // non-t variables first, then t, as in A^2*T
        std::vector<size_t> print_order;
        for (size_t i = 0; i + 1 < r; ++i) print_order.push_back(i);
        if (r) print_order.push_back(r - 1);
        for (size_t i : print_order) {
            if (e[i] == 0) continue;
            std::string f = var_name(labels[i]);
            if (e[i] != 1) f += "^" + std::to_string(e[i]);
            factors.push_back(f);
        }
        if (factors.empty()) {
            os << a;
        } else {
            if (a != 1) os << a << "*";
            for (size_t k = 0; k < factors.size(); ++k) os << (k ? "*" : "") << factors[k];
        }
        first = false;
    }
    return os.str();
}

LaurentPoly lp_parse(const std::string& text, const std::vector<std::string>& labels) {
    size_t r = labels.size();
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s == "0") return {};
    LaurentPoly out;
    size_t i = 0;
    auto read_int = [&](long long& v) {
        size_t st = i;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (st == i || (i == st + 1 && !std::isdigit(static_cast<unsigned char>(s[st]))))
            throw InputError("bad exponent in '" + text + "'");
        v = std::stoll(s.substr(st, i - st));
    };
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        }
        Int coef = 1;
        HVec e(r, 0);
        bool any = false;
        while (i < s.size() && s[i] != '+' && s[i] != '-') {
            if (std::isdigit(static_cast<unsigned char>(s[i]))) {
                size_t st = i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                coef *= Int(s.substr(st, i - st));
            } else {
                size_t st = i;
                while (i < s.size() && std::isalnum(static_cast<unsigned char>(s[i]))) ++i;
                std::string name = s.substr(st, i - st);
                size_t k = 0;
                for (; k < r; ++k)
                    if (var_name(labels[k]) == name) break;
                if (k == r) throw InputError("unknown variable '" + name + "'");
                long long ex = 1;
                if (i < s.size() && s[i] == '^') {
                    ++i;
                    read_int(ex);
                }
                e[k] += ex;
            }
            any = true;
            if (i < s.size() && s[i] == '*') ++i;
        }
        if (!any) throw InputError("empty term in '" + text + "'");
        lp_add_term(out, e, sign * coef);
    }
    return out;
}

}  // namespace fbc
