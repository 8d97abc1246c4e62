#include "fbc/novikov.hpp"
#include "fbc/error.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace fbc {

std::int64_t Grading::window(std::int64_t max_height) const {
    std::int64_t m = 1;
    for (auto x : phi) m = std::max<std::int64_t>(m, x < 0 ? -x : x);
    return max_height * m;
}

GradingPtr make_grading(GroupPtr G, const HCoords& coords, const HVec& phi) {
    auto g = std::make_shared<Grading>();
    g->group = std::move(G);
    g->coords = coords;
    g->phi = phi;
    return g;
}

bool Leading::is_unit() const {
    return slice.size() == 1 && (slice.begin()->second == 1 || slice.begin()->second == -1);
}

void Series::ensure(std::int64_t h) {
    if (h <= done_) return;
    compute(done_ + 1, h);
    done_ = h;
}

const GRElem& Series::slice(std::int64_t k) {
    static const GRElem empty;
    ensure(k);
    auto it = nz_.find(k);
    return it == nz_.end() ? empty : it->second;
}

std::optional<Leading> Series::leading(std::int64_t window) {
    if (exact_zero()) return std::nullopt;
    // Advance one generator step at a time: deep slices can cost far more than the leading one.
    const std::int64_t step = gr_->window(1);
    for (std::int64_t h = low_;; h = std::min(h + step, low_ + window)) {
        ensure(h);
        auto it = nz_.lower_bound(low_);
        if (it != nz_.end() && it->first <= low_ + window) return Leading{it->first, it->second};
        if (h >= low_ + window) return std::nullopt;
    }
}

void Series::put(std::int64_t k, GRElem x) {
    if (!x.empty()) nz_[k] = std::move(x);
}

namespace {

class Finite : public Series {
public:
    Finite(GradingPtr gr, std::map<std::int64_t, GRElem> s)
        : Series(gr, s.empty() ? kZero : s.begin()->first) {
        nz_ = std::move(s);
        done_ = kZero;
    }

protected:
    void compute(std::int64_t, std::int64_t) override {}
};

class Sum : public Series {
public:
    Sum(SeriesPtr a, SeriesPtr b, int sb)
        : Series(a->grading_ptr(), std::min(a->low(), b->low())), a_(std::move(a)), b_(std::move(b)), sb_(sb) {}

protected:
    void compute(std::int64_t from, std::int64_t to) override {
        a_->ensure(to);
        b_->ensure(to);
        std::map<std::int64_t, GRElem> acc;
        for (auto it = a_->slices().lower_bound(from); it != a_->slices().end() && it->first <= to; ++it)
            acc[it->first] = it->second;
        for (auto it = b_->slices().lower_bound(from); it != b_->slices().end() && it->first <= to; ++it) {
            GRElem& dst = acc[it->first];
            for (const auto& [h, c] : it->second) gr_add_term(dst, h, sb_ * c);
        }
        for (auto& [k, x] : acc) put(k, std::move(x));
    }

private:
    SeriesPtr a_, b_;
    int sb_;
};

class Neg : public Series {
public:
    explicit Neg(SeriesPtr a) : Series(a->grading_ptr(), a->low()), a_(std::move(a)) {}

protected:
    void compute(std::int64_t from, std::int64_t to) override {
        a_->ensure(to);
        for (auto it = a_->slices().lower_bound(from); it != a_->slices().end() && it->first <= to; ++it)
            put(it->first, gr_neg(it->second));
    }

private:
    SeriesPtr a_;
};

class Product : public Series {
public:
    Product(SeriesPtr a, SeriesPtr b)
        : Series(a->grading_ptr(), a->low() + b->low()), a_(std::move(a)), b_(std::move(b)) {}

protected:
    void compute(std::int64_t from, std::int64_t to) override {
        const HnnGroup& G = *grading().group;
        a_->ensure(to - b_->low());
        b_->ensure(to - a_->low());
        std::map<std::int64_t, GRElem> acc;
        const auto& as = a_->slices();
        const auto& bs = b_->slices();
        for (auto ia = as.begin(); ia != as.end() && ia->first <= to - b_->low(); ++ia) {
            for (auto ib = bs.lower_bound(from - ia->first); ib != bs.end() && ia->first + ib->first <= to; ++ib) {
                GRElem& dst = acc[ia->first + ib->first];
                for (const auto& [x, cx] : ia->second)
                    for (const auto& [y, cy] : ib->second) gr_add_term(dst, G.multiply(x, y), cx * cy);
            }
        }
        for (auto& [k, x] : acc) put(k, std::move(x));
    }

private:
    SeriesPtr a_, b_;
};

// y with x y = 1: y_j = m^-1 (delta_{j+v,0} - sum_{v < i <= j+2v} x_i y_{j+v-i}).
class Inverse : public Series {
public:
    Inverse(SeriesPtr x, const Leading& lead)
        : Series(x->grading_ptr(), -lead.level), x_(std::move(x)), v_(lead.level) {
        const HnnGroup& G = *grading().group;
        const auto& [h, c] = *lead.slice.begin();
        minv_ = gr_elem(G.inverse(h), c);
    }

protected:
    void compute(std::int64_t from, std::int64_t to) override {
        const HnnGroup& G = *grading().group;
        x_->ensure(to + 2 * v_);
        const auto& xs = x_->slices();
        for (std::int64_t j = from; j <= to; ++j) {
            GRElem acc;
            if (j + v_ == 0) acc = gr_one();
            for (auto it = xs.upper_bound(v_); it != xs.end() && it->first <= j + 2 * v_; ++it) {
                auto iy = nz_.find(j + v_ - it->first);
                if (iy == nz_.end()) continue;
                for (const auto& [a, ca] : it->second)
                    for (const auto& [b, cb] : iy->second) gr_add_term(acc, G.multiply(a, b), -ca * cb);
            }
            if (!acc.empty()) put(j, gr_mul(G, minv_, acc));
        }
    }

private:
    SeriesPtr x_;
    std::int64_t v_;
    GRElem minv_;
};

SeriesPtr zero_like(const SeriesPtr& a) { return std::make_shared<Finite>(a->grading_ptr(), std::map<std::int64_t, GRElem>{}); }

}  // namespace

SeriesPtr embed(const GRElem& x, const GradingPtr& gr) {
    std::map<std::int64_t, GRElem> s;
    for (const auto& [h, c] : x) gr_add_term(s[gr->level(h)], h, c);
    return std::make_shared<Finite>(gr, std::move(s));
}

SeriesPtr series_add(SeriesPtr a, SeriesPtr b) {
    if (a->exact_zero()) return b;
    if (b->exact_zero()) return a;
    return std::make_shared<Sum>(std::move(a), std::move(b), 1);
}

SeriesPtr series_neg(SeriesPtr a) {
    if (a->exact_zero()) return a;
    return std::make_shared<Neg>(std::move(a));
}

SeriesPtr series_sub(SeriesPtr a, SeriesPtr b) {
    if (b->exact_zero()) return a;
    if (a->exact_zero()) return series_neg(std::move(b));
    return std::make_shared<Sum>(std::move(a), std::move(b), -1);
}

SeriesPtr series_mul(SeriesPtr a, SeriesPtr b) {
    if (a->exact_zero() || b->exact_zero()) return zero_like(a);
    return std::make_shared<Product>(std::move(a), std::move(b));
}

SeriesPtr series_invert(SeriesPtr x, std::int64_t max_height) {
    auto lead = x->leading(x->grading().window(max_height));
    if (!lead) throw Undetermined(max_height);
    if (!lead->is_unit()) throw NotInvertible("leading term " + to_string(lead->slice) + " is not a unit");
    return std::make_shared<Inverse>(std::move(x), *lead);
}

GRElem mu(const SeriesPtr& x, std::int64_t max_height) {
    auto lead = x->leading(x->grading().window(max_height));
    if (!lead) throw Undetermined(max_height);
    return lead->slice;
}

Elimination eliminate(const GRMatrix& A, const GradingPtr& gr, std::int64_t max_height) {
    Elimination res;
    size_t n = A.size();
    res.pivot_sum.assign(gr->coords.r, 0);
    if (n == 0) {
        res.last = gr_one();
        res.last_unit = true;
        return res;
    }
    std::int64_t window = gr->window(max_height);
    std::vector<std::vector<SeriesPtr>> M(n, std::vector<SeriesPtr>(n));
    for (size_t i = 0; i < n; ++i) {
        if (A[i].size() != n) throw InputError("matrix is not square");
        for (size_t j = 0; j < n; ++j) M[i][j] = embed(A[i][j], gr);
    }
    for (size_t k = 0; k + 1 < n; ++k) {
        size_t pi = n, pj = n;
        std::optional<Leading> plead;
        bool unknown = false;
        for (size_t i = k; i < n && pi == n; ++i)
            for (size_t j = k; j < n && pi == n; ++j) {
                if (M[i][j]->exact_zero()) continue;
                auto lead = M[i][j]->leading(window);
                if (!lead) {
                    unknown = true;
                    continue;
                }
                if (lead->is_unit()) {
                    pi = i;
                    pj = j;
                    plead = lead;
                }
            }
        if (pi == n) {
            res.status = unknown ? Elimination::Status::undetermined : Elimination::Status::no_pivot;
            res.note = unknown ? "undetermined(" + std::to_string(max_height) + ")"
                               : "no entry with a unit leading term at step " + std::to_string(k + 1);
            return res;
        }
        std::swap(M[pi], M[k]);
        for (auto& row : M) std::swap(row[pj], row[k]);
        res.level += plead->level;
        res.pivot_sum = add(res.pivot_sum, gr->coords.of(plead->slice.begin()->first));
        ++res.pivots;
        SeriesPtr pinv = series_invert(M[k][k], max_height);
        for (size_t i = k + 1; i < n; ++i) {
            if (M[i][k]->exact_zero()) continue;
            SeriesPtr left = series_mul(M[i][k], pinv);
            for (size_t j = k + 1; j < n; ++j) {
                if (M[k][j]->exact_zero()) continue;
                M[i][j] = series_sub(M[i][j], series_mul(left, M[k][j]));
            }
        }
    }
    auto lead = M[n - 1][n - 1]->leading(window);
    if (!lead) {
        res.status = Elimination::Status::undetermined;
        res.note = M[n - 1][n - 1]->exact_zero() ? "determinant vanishes"
                                                 : "undetermined(" + std::to_string(max_height) + ")";
        return res;
    }
    res.level += lead->level;
    res.last = lead->slice;
    res.last_unit = lead->is_unit();
    return res;
}

std::string to_string(Tri t) {
    switch (t) {
    case Tri::yes:
        return "yes";
    case Tri::no:
        return "no";
    default:
        return "unknown";
    }
}

InvertibilityResult novikov_matrix_invertible(const GRMatrix& A, const GradingPtr& gr, std::int64_t max_height) {
    InvertibilityResult r;
    r.height = max_height;
    Elimination e = eliminate(A, gr, max_height);
    if (e.status == Elimination::Status::complete) {
        r.value = e.last_unit ? Tri::yes : Tri::no;
        if (!e.last_unit) r.note = "last pivot has leading term " + to_string(e.last);
    } else {
        r.note = e.note;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Charts

std::string Chart::describe() const {
    std::ostringstream os;
    os << "basis";
    for (size_t i = 0; i < basis.size(); ++i) os << (i ? ", " : " ") << letter_name(i + 1) << "'=" << to_compact(basis[i]);
    os << "; conjugator " << to_compact(conj) << "; t'=t";
    if (!conj.empty()) os << "*" << to_compact(conj);
    return os.str();
}

Chart identity_chart(const HnnGroup& G, const HCoords& c) {
    return basis_chart(G, c, Endomorphism::identity(G.rank()).images);
}

Chart basis_chart(const HnnGroup& G, const HCoords& c, const std::vector<Word>& basis) {
    int n = G.rank();
    if (static_cast<int>(basis.size()) != n) throw InputError("basis has the wrong size");
    Endomorphism alpha{n, basis};
    Endomorphism ainv = inverse(alpha);
    Chart ch;
    ch.basis = basis;
    ch.g.rank = n;
    for (int i = 0; i < n; ++i) ch.g.images.push_back(ainv.apply(G.endomorphism().apply(basis[i])));
    ch.group = make_group(ch.g);
    ch.coords = c;
    for (int i = 0; i < n; ++i) ch.coords.gen[i] = c.of(basis[i]);
    return ch;
}

Chart strip_prefixes(const Chart& ch, const HCoords& c) {
    Chart out = ch;
    int n = out.g.rank;
    Word total;
    for (int iter = 0;; ++iter) {
        if (iter > 1000) throw MathError("prefix removal does not terminate");
        Word p = out.g.images[0];
        for (int i = 1; i < n; ++i) p = common_prefix(p, out.g.images[i]);
        if (p.empty()) break;
        for (auto& w : out.g.images) w = multiply(multiply(inverse(p), w), p);
        total = multiply(total, p);
    }
    if (total.empty()) return out;
    Endomorphism alpha{n, ch.basis};
    out.conj = multiply(ch.conj, alpha.apply(total));
    out.group = make_group(out.g);
    out.coords.t = add(c.t, c.of(out.conj));
    return out;
}

std::vector<std::vector<Word>> positive_bases(const HCoords& c, const HVec& phi, int max_depth, int max_count) {
    std::vector<std::vector<Word>> found;
    auto value = [&](const Word& w) { return dot(c.of(w), phi); };
    auto positive = [&](const std::vector<Word>& b) { return value(b[0]) > 0 && value(b[1]) > 0; };
    if (value(generator(1)) == 0 && value(generator(2)) == 0) return found;
    // Direct construction: invert negative generators, then fix a zero value.
    std::vector<Word> direct{generator(1), generator(2)};
    for (auto& w : direct)
        if (value(w) < 0) w = inverse(w);
    if (value(direct[0]) == 0) direct[0] = multiply(direct[0], direct[1]);
    if (value(direct[1]) == 0) direct[1] = multiply(direct[1], direct[0]);
    found.push_back(direct);

    std::vector<Word> start{generator(1), generator(2)};
    std::set<std::vector<Word>> seen{start, direct};
    std::deque<std::pair<std::vector<Word>, int>> queue{{start, 0}};
    const size_t max_seen = 20000;
    while (!queue.empty() && static_cast<int>(found.size()) < max_count && seen.size() < max_seen) {
        auto [b, d] = queue.front();
        queue.pop_front();
        if (positive(b) && b != direct) found.push_back(b);
        if (d == max_depth) continue;
        std::vector<std::vector<Word>> next;
        for (int i = 0; i < 2; ++i) {
            int j = 1 - i;
            for (int e : {1, -1}) {
                Word o = e > 0 ? b[j] : inverse(b[j]);
                auto r = b;
                r[i] = multiply(b[i], o);
                next.push_back(r);
                auto l = b;
                l[i] = multiply(o, b[i]);
                next.push_back(l);
            }
            auto inv = b;
            inv[i] = inverse(b[i]);
            next.push_back(inv);
        }
        for (auto& nb : next)
            if (seen.insert(nb).second) queue.push_back({nb, d + 1});
    }
    return found;
}

BnsResult bns_membership_f2(const HnnGroup& G, const Abelianization& ab, const Character& phi_q, int chart_index) {
    if (G.rank() != 2) throw InputError("the BNS test needs a free group of rank 2");
    if (phi_q.is_zero()) throw InputError("phi must be nonzero");
    const HCoords& c = ab.coords;
    HVec phi = phi_q.integral();
    BnsResult res;
    bool kernel = true;
    for (const auto& v : c.gen) kernel &= dot(v, phi) == 0;
    if (kernel) {
        res.kernel_case = true;
        if (dot(c.t, phi) > 0) {
            res.in = true;
            res.reason = "-phi is a positive multiple of -psi";
        } else {
            res.in = is_automorphism(G.endomorphism());
            res.reason = std::string("-phi is a positive multiple of psi; g is ") +
                         (res.in ? "an automorphism" : "not surjective");
        }
        return res;
    }
    auto bases = positive_bases(c, phi, 8, chart_index + 1);
    if (static_cast<int>(bases.size()) <= chart_index) throw MathError("no chart with phi(x), phi(y) > 0 found");
    Chart ch = strip_prefixes(basis_chart(G, c, bases[chart_index]), c);
    GradingPtr gr = make_grading(ch.group, ch.coords, phi);
    const HnnGroup& H = *ch.group;
    GRElem tp = gr_elem(H.stable_letter());
    GRElem E = gr_one();
    E = gr_add(E, gr_mul(H, tp, gr_from_free(fox_derivative(ch.g.images[0], 2))));
    E = gr_sub(E, gr_mul(H, tp, gr_from_free(fox_derivative(ch.g.images[1], 2))));
    res.E = E;
    res.muE = mu(embed(E, gr), 1);
    res.in = Leading{0, res.muE}.is_unit();
    res.reason = res.in ? "mu_phi(E) is a unit" : "mu_phi(E) is not of the form +-h";
    res.chart = std::move(ch);
    return res;
}

}  // namespace fbc
