#pragma once

#include "fbc/group_ring.hpp"
#include "fbc/hnn.hpp"

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fbc {

// Integral character phi on a group presented with coordinates `coords`.
struct Grading {
    GroupPtr group;
    HCoords coords;
    HVec phi;

    std::int64_t level(const HnnElement& h) const { return dot(coords.of(h), phi); }
    // Search window for a leading slice: max_height level units scaled by max |phi_i|.
    std::int64_t window(std::int64_t max_height) const;
};
using GradingPtr = std::shared_ptr<const Grading>;
GradingPtr make_grading(GroupPtr G, const HCoords& coords, const HVec& phi);

// Leading term is not of the form +-h.
class NotInvertible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Leading {
    std::int64_t level = 0;
    GRElem slice;
    bool is_unit() const;  // +-h for a single group element h
};

// Element of the completion with phi bounded below, produced slice by slice on demand.
// A series caches its slices; it must not be advanced from two threads at once.
class Series {
public:
    static constexpr std::int64_t kZero = std::numeric_limits<std::int64_t>::max();

    explicit Series(GradingPtr gr, std::int64_t low) : gr_(std::move(gr)), low_(low), done_(low == kZero ? kZero : low - 1) {}
    virtual ~Series() = default;

    const Grading& grading() const { return *gr_; }
    const GradingPtr& grading_ptr() const { return gr_; }
    // No nonzero slice below this level; kZero for the zero series.
    std::int64_t low() const { return low_; }
    bool exact_zero() const { return low_ == kZero; }
    // Computes every slice of level <= h.
    void ensure(std::int64_t h);
    const std::map<std::int64_t, GRElem>& slices() const { return nz_; }
    const GRElem& slice(std::int64_t k);
    // First nonzero slice within [low, low + window], if any.
    std::optional<Leading> leading(std::int64_t window);

protected:
    virtual void compute(std::int64_t from, std::int64_t to) = 0;
    void put(std::int64_t k, GRElem x);

    GradingPtr gr_;
    std::int64_t low_;
    std::int64_t done_;
    std::map<std::int64_t, GRElem> nz_;
};
using SeriesPtr = std::shared_ptr<Series>;

SeriesPtr embed(const GRElem& x, const GradingPtr& gr);
SeriesPtr series_add(SeriesPtr a, SeriesPtr b);
SeriesPtr series_neg(SeriesPtr a);
SeriesPtr series_sub(SeriesPtr a, SeriesPtr b);
SeriesPtr series_mul(SeriesPtr a, SeriesPtr b);
// Throws NotInvertible if the leading slice is not +-h, Undetermined if none is found within max_height.
SeriesPtr series_invert(SeriesPtr x, std::int64_t max_height = 64);

// mu_phi: the leading slice; throws Undetermined(max_height) if none is found.
GRElem mu(const SeriesPtr& x, std::int64_t max_height);

// Gaussian elimination over the completion, pivoting only on entries with a +-h leading slice.
struct Elimination {
    enum class Status { complete, undetermined, no_pivot };
    Status status = Status::complete;
    std::int64_t level = 0;      // sum of the leading levels of the pivots and the last entry
    HVec pivot_sum;              // sum of the H-coordinates of the pivot leading terms
    GRElem last;                 // leading slice of the final 1x1 entry
    bool last_unit = false;
    int pivots = 0;
    std::string note;
};
Elimination eliminate(const GRMatrix& A, const GradingPtr& gr, std::int64_t max_height);

enum class Tri { yes, no, unknown };
std::string to_string(Tri t);

struct InvertibilityResult {
    Tri value = Tri::unknown;
    std::int64_t height = 0;
    std::string note;
};
InvertibilityResult novikov_matrix_invertible(const GRMatrix& A, const GradingPtr& gr, std::int64_t max_height = 64);

// A presentation of the same group in another free basis and with the stable letter replaced.
struct Chart {
    Endomorphism g;            // images in chart letters
    GroupPtr group;
    HCoords coords;            // H-coordinates of the chart generators and the chart stable letter
    std::vector<Word> basis;   // chart generators as words in the original generators
    Word conj;                 // chart stable letter is t * conj (original letters)

    std::string describe() const;
};

Chart identity_chart(const HnnGroup& G, const HCoords& c);
// Chart for the free basis `basis` (must be a basis of F_n).
Chart basis_chart(const HnnGroup& G, const HCoords& c, const std::vector<Word>& basis);
// Repeatedly postcompose with conjugation to remove the common prefix of the images.
Chart strip_prefixes(const Chart& ch, const HCoords& c);
// Bases (x, y) of F_2 with phi(x), phi(y) > 0: a direct construction, then breadth-first Nielsen
// moves (capped). Empty if phi vanishes on F_2.
std::vector<std::vector<Word>> positive_bases(const HCoords& c, const HVec& phi, int max_depth, int max_count);

struct BnsResult {
    bool in = false;          // [-phi] in Sigma(G)
    bool kernel_case = false; // phi vanishes on F_2
    std::string reason;
    std::optional<Chart> chart;
    GRElem E;
    GRElem muE;
};
// Decides [-phi] in Sigma(G) for G = F_2 *_g; `chart_index` selects among the valid charts.
BnsResult bns_membership_f2(const HnnGroup& G, const Abelianization& ab, const Character& phi, int chart_index = 0);

}  // namespace fbc
