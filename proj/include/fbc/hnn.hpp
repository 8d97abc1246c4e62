#pragma once

#include "fbc/numeric.hpp"
#include "fbc/words.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace fbc {

// t^p w t^-q in G = F_n *_g, with relation t^-1 x t = g(x).
struct HnnElement {
    long long p = 0;
    Word w;
    long long q = 0;

    friend bool operator==(const HnnElement& a, const HnnElement& b) {
        return a.p == b.p && a.q == b.q && a.w == b.w;
    }
    friend bool operator!=(const HnnElement& a, const HnnElement& b) { return !(a == b); }
    friend bool operator<(const HnnElement& a, const HnnElement& b) {
        if (a.p != b.p) return a.p < b.p;
        if (a.q != b.q) return a.q < b.q;
        return a.w < b.w;
    }
};

std::string to_string(const HnnElement& x);

class HnnGroup {
public:
    // Throws MathError unless g is injective.
    explicit HnnGroup(Endomorphism g);

    const Endomorphism& endomorphism() const { return g_; }
    int rank() const { return g_.rank; }

    HnnElement normalize(long long p, Word w, long long q) const;
    HnnElement multiply(const HnnElement& x, const HnnElement& y) const;
    HnnElement inverse(const HnnElement& x) const;
    HnnElement stable_letter() const { return {1, Word(), 0}; }
    HnnElement element(const Word& w) const { return {0, w, 0}; }
    // g^k(w) for k >= 0.
    Word apply_power(const Word& w, long long k) const;
    std::optional<Word> preimage(const Word& w) const;

private:
    Endomorphism g_;
    FoldedGraph images_;
    mutable std::mutex mu_;
    mutable std::vector<std::vector<Word>> powers_;
    mutable std::map<Word, std::optional<Word>> pre_cache_;
};

using GroupPtr = std::shared_ptr<const HnnGroup>;
GroupPtr make_group(const Endomorphism& g);

// Coordinates of the generators and the stable letter in H = H_1(G)_f = Z^r.
struct HCoords {
    int r = 0;
    std::vector<HVec> gen;  // p0(s_i)
    HVec t;                 // p0(t)
    std::vector<std::string> labels;

    HVec of(const Word& w) const;
    HVec of(const HnnElement& x) const;
    std::int64_t level(const HnnElement& x, const HVec& phi) const { return dot(of(x), phi); }
};

struct Abelianization {
    int n = 0;
    std::vector<std::vector<long long>> M;  // row i = abelianized g(s_i)
    std::vector<Int> smith;                 // diagonal of the Smith form of I - M
    HCoords coords;
    int r() const { return coords.r; }
};

Abelianization abelianize(const Endomorphism& g);

// Smith normal form D = U A V. Returns the diagonal; fills V if requested.
std::vector<Int> smith_normal_form(std::vector<std::vector<Int>> A, std::vector<std::vector<Int>>* V = nullptr);

// Rational character phi: H -> Q stored on the H basis.
struct Character {
    std::vector<Rational> values;

    Rational on(const HVec& h) const;
    bool is_zero() const;
    // values scaled by the common denominator, and that denominator
    HVec integral(Int* denom = nullptr) const;
    Character negated() const;
    friend bool operator==(const Character& a, const Character& b) { return a.values == b.values; }
};

// "phi: a=0, b=1, t=2"; the "phi:" prefix is optional. Values on generators are checked against
// the relations s_i = g(s_i) in H_1.
Character parse_character(const std::string& text, const Abelianization& ab);
Character character_from_integral(const HVec& v);
std::string to_text(const Character& phi, const Abelianization& ab);
Rational evaluate(const Character& phi, const Abelianization& ab, const HnnElement& x);
Rational evaluate(const Character& phi, const Abelianization& ab, const Word& w);

}  // namespace fbc
