#include "fbc/hnn.hpp"
#include "fbc/error.hpp"

#include <algorithm>
#include <sstream>

namespace fbc {

std::string to_string(const HnnElement& x) {
    std::vector<std::string> parts;
    if (x.p == 1) parts.push_back("t");
    if (x.p > 1) parts.push_back("t^" + std::to_string(x.p));
    if (!x.w.empty()) parts.push_back(to_compact(x.w));
    if (x.q == 1) parts.push_back("t^-1");
    if (x.q > 1) parts.push_back("t^-" + std::to_string(x.q));
    if (parts.empty()) return "1";
    std::string s;
    for (size_t i = 0; i < parts.size(); ++i) s += (i ? "*" : "") + parts[i];
    return s;
}

HnnGroup::HnnGroup(Endomorphism g) : g_(std::move(g)), images_(g_.images, g_.rank) {
    for (const auto& w : g_.images)
        if (w.empty() || w.max_generator() > g_.rank) throw MathError("endomorphism is not injective");
    if (images_.rank() != g_.rank) throw MathError("endomorphism is not injective (folded rank " +
                                                   std::to_string(images_.rank()) + ")");
    powers_.push_back(Endomorphism::identity(g_.rank).images);
}

GroupPtr make_group(const Endomorphism& g) { return std::make_shared<const HnnGroup>(g); }

Word HnnGroup::apply_power(const Word& w, long long k) const {
    if (k == 0 || w.empty()) return w;
    std::lock_guard<std::mutex> lock(mu_);
    while (static_cast<long long>(powers_.size()) <= k) {
        const auto& prev = powers_.back();
        Endomorphism gp;
        gp.rank = g_.rank;
        gp.images = prev;
        std::vector<Word> next;
        for (const auto& img : g_.images) next.push_back(gp.apply(img));
        powers_.push_back(std::move(next));
    }
    Endomorphism gk;
    gk.rank = g_.rank;
    gk.images = powers_[k];
    return gk.apply(w);
}

std::optional<Word> HnnGroup::preimage(const Word& w) const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = pre_cache_.find(w);
        if (it != pre_cache_.end()) return it->second;
    }
    auto r = images_.try_preimage(w);
    std::lock_guard<std::mutex> lock(mu_);
    if (pre_cache_.size() > 200000) pre_cache_.clear();
    pre_cache_.emplace(w, r);
    return r;
}

HnnElement HnnGroup::normalize(long long p, Word w, long long q) const {
    if (p < 0 || q < 0) {
        // t^p w t^-q with negative exponents: rewrite via the relations
        Word cur = std::move(w);
        if (p < 0) {  // t^p = (t^-1)^{|p|}: t^-1 x = g(x) t^-1
            cur = apply_power(cur, -p);
            q += -p;
            p = 0;
        }
        if (q < 0) {  // x t = t g(x)
            cur = apply_power(cur, -q);
            p += -q;
            q = 0;
        }
        w = std::move(cur);
    }
    while (p > 0 && q > 0) {
        auto pre = preimage(w);
        if (!pre) break;
        w = std::move(*pre);
        --p;
        --q;
    }
    return {p, std::move(w), q};
}

HnnElement HnnGroup::multiply(const HnnElement& x, const HnnElement& y) const {
    if (x.q >= y.p) {
        long long k = x.q - y.p;
        return normalize(x.p, fbc::multiply(x.w, apply_power(y.w, k)), k + y.q);
    }
    long long k = y.p - x.q;
    return normalize(x.p + k, fbc::multiply(apply_power(x.w, k), y.w), y.q);
}

HnnElement HnnGroup::inverse(const HnnElement& x) const { return normalize(x.q, fbc::inverse(x.w), x.p); }

HVec HCoords::of(const Word& w) const {
    HVec v(r, 0);
    for (int l : w.letters) {
        const HVec& gvec = gen[std::abs(l) - 1];
        if (l > 0)
            for (int k = 0; k < r; ++k) v[k] += gvec[k];
        else
            for (int k = 0; k < r; ++k) v[k] -= gvec[k];
    }
    return v;
}

HVec HCoords::of(const HnnElement& x) const {
    HVec v = of(x.w);
    for (int k = 0; k < r; ++k) v[k] += (x.p - x.q) * t[k];
    return v;
}

// ---------------------------------------------------------------------------
// Smith normal form

std::vector<Int> smith_normal_form(std::vector<std::vector<Int>> A, std::vector<std::vector<Int>>* Vout) {
    size_t m = A.size(), n = m ? A[0].size() : 0;
    std::vector<std::vector<Int>> V(n, std::vector<Int>(n, 0));
    for (size_t i = 0; i < n; ++i) V[i][i] = 1;
    auto col_swap = [&](size_t a, size_t b) {
        if (a == b) return;
        for (auto& row : A) std::swap(row[a], row[b]);
        for (auto& row : V) std::swap(row[a], row[b]);
    };
    auto col_addmul = [&](size_t dst, size_t src, const Int& f) {  // col dst -= f * col src
        for (auto& row : A) row[dst] -= f * row[src];
        for (auto& row : V) row[dst] -= f * row[src];
    };
    std::vector<Int> diag;
    size_t k = 0;
    for (; k < std::min(m, n); ++k) {
        while (true) {
            // smallest nonzero entry in the remaining block
            size_t bi = m, bj = n;
            for (size_t i = k; i < m; ++i)
                for (size_t j = k; j < n; ++j)
                    if (A[i][j] != 0 && (bi == m || abs(A[i][j]) < abs(A[bi][bj]))) {
                        bi = i;
                        bj = j;
                    }
            if (bi == m) goto done;
            std::swap(A[k], A[bi]);
            col_swap(k, bj);
            bool clean = true;
            for (size_t i = k + 1; i < m; ++i) {
                if (A[i][k] == 0) continue;
                Int f = A[i][k] / A[k][k];
                for (size_t j = k; j < n; ++j) A[i][j] -= f * A[k][j];
                if (A[i][k] != 0) clean = false;
            }
            for (size_t j = k + 1; j < n; ++j) {
                if (A[k][j] == 0) continue;
                Int f = A[k][j] / A[k][k];
                col_addmul(j, k, f);
                if (A[k][j] != 0) clean = false;
            }
            if (!clean) continue;
            // divisibility of the rest by the pivot
            bool divisible = true;
            for (size_t i = k + 1; i < m && divisible; ++i)
                for (size_t j = k + 1; j < n; ++j)
                    if (A[i][j] % A[k][k] != 0) {
                        for (size_t jj = k; jj < n; ++jj) A[k][jj] += A[i][jj];
                        divisible = false;
                        break;
                    }
            if (divisible) break;
        }
        if (A[k][k] < 0) {
            for (size_t j = k; j < n; ++j) A[k][j] = -A[k][j];
        }
        diag.push_back(A[k][k]);
    }
done:
    if (Vout) *Vout = V;
    return diag;
}

namespace {

// Column Hermite form of an integer matrix with full column rank (lower echelon, positive pivots).
void column_hermite(std::vector<std::vector<Int>>& L) {
    size_t n = L.size(), f = n ? L[0].size() : 0;
    size_t c = 0;
    for (size_t i = 0; i < n && c < f; ++i) {
        while (true) {
            size_t best = f;
            for (size_t j = c; j < f; ++j)
                if (L[i][j] != 0 && (best == f || abs(L[i][j]) < abs(L[i][best]))) best = j;
            if (best == f) break;
            if (best != c)
                for (auto& row : L) std::swap(row[c], row[best]);
            bool done = true;
            for (size_t j = c + 1; j < f; ++j) {
                if (L[i][j] == 0) continue;
                Int q = L[i][j] / L[i][c];
                for (auto& row : L) row[j] -= q * row[c];
                if (L[i][j] != 0) done = false;
            }
            if (done) break;
        }
        if (L[i][c] == 0) continue;
        if (L[i][c] < 0)
            for (auto& row : L) row[c] = -row[c];
        for (size_t j = 0; j < c; ++j) {
            Int q = L[i][j] / L[i][c];
            if (L[i][j] - q * L[i][c] < 0) q -= 1;
            for (auto& row : L) row[j] -= q * row[c];
        }
        ++c;
    }
}

}  // namespace

Abelianization abelianize(const Endomorphism& g) {
    Abelianization ab;
    int n = g.rank;
    ab.n = n;
    ab.M.assign(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i) {
        auto e = abelian(g.images[i], n);
        for (int j = 0; j < n; ++j) ab.M[i][j] = e[j];
    }
    std::vector<std::vector<Int>> R(n, std::vector<Int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) R[i][j] = Int((i == j ? 1 : 0) - ab.M[i][j]);
    std::vector<std::vector<Int>> V;
    ab.smith = smith_normal_form(R, &V);
    size_t rank = 0;
    for (const auto& d : ab.smith)
        if (d != 0) ++rank;
    size_t f = n - rank;
    std::vector<std::vector<Int>> L(n, std::vector<Int>(f));
    for (int i = 0; i < n; ++i)
        for (size_t k = 0; k < f; ++k) L[i][k] = V[i][rank + k];
    column_hermite(L);

    HCoords& c = ab.coords;
    c.r = static_cast<int>(f) + 1;
    c.gen.assign(n, HVec(c.r, 0));
    for (int i = 0; i < n; ++i)
        for (size_t k = 0; k < f; ++k) c.gen[i][k] = to_i64(L[i][k]);
    c.t.assign(c.r, 0);
    c.t[c.r - 1] = 1;
    for (size_t k = 0; k < f; ++k) {
        std::string label = "h" + std::to_string(k + 1);
        for (int i = 0; i < n; ++i) {
            HVec unit(c.r, 0);
            unit[k] = 1;
            if (c.gen[i] == unit) {
                label = std::string(1, letter_name(i + 1));
                break;
            }
        }
        c.labels.push_back(label);
    }
    c.labels.push_back("t");
    return ab;
}

// ---------------------------------------------------------------------------
// Characters

Rational Character::on(const HVec& h) const {
    Rational s = 0;
    for (size_t i = 0; i < values.size() && i < h.size(); ++i) s += values[i] * h[i];
    return s;
}

bool Character::is_zero() const {
    for (const auto& v : values)
        if (v != 0) return false;
    return true;
}

HVec Character::integral(Int* denom) const {
    Int d = common_denominator(values);
    if (denom) *denom = d;
    HVec r;
    for (const auto& v : values) r.push_back(to_i64(boost::multiprecision::numerator(Rational(v * d))));
    return r;
}

Character Character::negated() const {
    Character c;
    for (const auto& v : values) c.values.push_back(-v);
    return c;
}

Character character_from_integral(const HVec& v) {
    Character c;
    for (auto x : v) c.values.push_back(Rational(x));
    return c;
}

Character parse_character(const std::string& text, const Abelianization& ab) {
    std::string s = text;
    auto colon = s.find(':');
    if (colon != std::string::npos) {
        std::string head = s.substr(0, colon);
        head.erase(std::remove_if(head.begin(), head.end(), [](unsigned char c) { return std::isspace(c); }),
                   head.end());
        if (head != "phi") throw InputError("character must start with 'phi:'");
        s = s.substr(colon + 1);
    }
    for (char& ch : s)
        if (ch == ',' || ch == ';') ch = ' ';
    std::istringstream in(s);
    std::string tok;
    const HCoords& c = ab.coords;
    int r = c.r, n = ab.n;
    // equations: row . x = value
    std::vector<std::pair<HVec, Rational>> eqs;
    std::map<int, Rational> gen_vals;
    bool have_t = false;
    while (in >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos || eq == 0) throw InputError("expected name=value, got '" + tok + "'");
        std::string name = tok.substr(0, eq);
        Rational val = parse_rational(tok.substr(eq + 1));
        if (name == "t") {
            if (have_t) throw InputError("t given twice");
            have_t = true;
            eqs.emplace_back(c.t, val);
        } else if (name.size() == 1 && name[0] >= 'a' && name[0] <= 'z') {
            int g = name[0] - 'a' + 1;
            if (g > n) throw InputError("generator '" + name + "' out of range");
            if (gen_vals.count(g)) throw InputError("generator '" + name + "' given twice");
            gen_vals[g] = val;
            eqs.emplace_back(c.gen[g - 1], val);
        } else {
            auto it = std::find(c.labels.begin(), c.labels.end(), name);
            if (it == c.labels.end()) throw InputError("unknown name '" + name + "' in character");
            HVec unit(r, 0);
            unit[it - c.labels.begin()] = 1;
            eqs.emplace_back(unit, val);
        }
    }
    if (static_cast<int>(gen_vals.size()) == n) {
        for (int i = 0; i < n; ++i) {
            Rational img = 0;
            for (int j = 0; j < n; ++j) img += Rational(ab.M[i][j]) * gen_vals[j + 1];
            if (img != gen_vals[i + 1]) {
                std::string a(1, letter_name(i + 1));
                throw InputError("character violates the relation " + a + " = g(" + a + ") in H_1: phi(" + a +
                                 ") = " + rational_to_string(gen_vals[i + 1]) + " but phi(g(" + a +
                                 ")) = " + rational_to_string(img));
            }
        }
    }
    // Gaussian elimination over Q
    std::vector<std::vector<Rational>> rows;
    for (auto& [v, val] : eqs) {
        std::vector<Rational> row;
        for (auto x : v) row.emplace_back(x);
        row.push_back(val);
        rows.push_back(row);
    }
    std::vector<int> pivcol;
    size_t pr = 0;
    for (int col = 0; col < r && pr < rows.size(); ++col) {
        size_t sel = rows.size();
        for (size_t i = pr; i < rows.size(); ++i)
            if (rows[i][col] != 0) {
                sel = i;
                break;
            }
        if (sel == rows.size()) continue;
        std::swap(rows[pr], rows[sel]);
        Rational p = rows[pr][col];
        for (auto& x : rows[pr]) x /= p;
        for (size_t i = 0; i < rows.size(); ++i) {
            if (i == pr || rows[i][col] == 0) continue;
            Rational f = rows[i][col];
            for (int j = 0; j <= r; ++j) rows[i][j] -= f * rows[pr][j];
        }
        pivcol.push_back(col);
        ++pr;
    }
    for (size_t i = pr; i < rows.size(); ++i)
        if (rows[i][r] != 0) throw InputError("character values are inconsistent with the relations of H_1(G)");
    if (static_cast<int>(pivcol.size()) < r) {
        std::string missing;
        for (int col = 0; col < r; ++col)
            if (std::find(pivcol.begin(), pivcol.end(), col) == pivcol.end()) missing += " " + c.labels[col];
        throw InputError("character is not determined; give values for:" + missing);
    }
    Character phi;
    phi.values.assign(r, 0);
    for (size_t i = 0; i < pivcol.size(); ++i) phi.values[pivcol[i]] = rows[i][r];
    return phi;
}

std::string to_text(const Character& phi, const Abelianization& ab) {
    std::ostringstream os;
    os << "phi:";
    for (int i = 0; i < ab.n; ++i)
        os << (i ? ", " : " ") << letter_name(i + 1) << "=" << rational_to_string(phi.on(ab.coords.gen[i]));
    os << ", t=" << rational_to_string(phi.on(ab.coords.t));
    return os.str();
}

Rational evaluate(const Character& phi, const Abelianization& ab, const HnnElement& x) {
    return phi.on(ab.coords.of(x));
}

Rational evaluate(const Character& phi, const Abelianization& ab, const Word& w) {
    return phi.on(ab.coords.of(w));
}

}  // namespace fbc
