#pragma once

#include "fbc/hnn.hpp"
#include "fbc/numeric.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fbc {

// Lattice polytope given by its vertex set (sorted lexicographically).
class IntPolytope {
public:
    IntPolytope() = default;
    static IntPolytope hull(int rank, std::vector<HVec> points);
    static IntPolytope point(const HVec& p);
    static IntPolytope origin(int rank) { return point(HVec(rank, 0)); }
    static IntPolytope segment(const HVec& a, const HVec& b) { return hull(static_cast<int>(a.size()), {a, b}); }

    int rank() const { return rank_; }
    bool empty() const { return vertices_.empty(); }
    const std::vector<HVec>& vertices() const { return vertices_; }
    int dimension() const;
    bool contains(const HVec& x) const;
    // Inner normals of the facets (within the affine span) and +-normals of the affine span.
    std::vector<HVec> facet_normals() const;
    std::int64_t min_value(const HVec& phi) const;
    std::int64_t max_value(const HVec& phi) const;
    IntPolytope translate(const HVec& v) const;
    // Lexicographically minimal vertex moved to the origin.
    IntPolytope normalized() const;

    friend bool operator==(const IntPolytope& a, const IntPolytope& b) {
        return a.rank_ == b.rank_ && a.vertices_ == b.vertices_;
    }
    friend bool operator!=(const IntPolytope& a, const IntPolytope& b) { return !(a == b); }

    struct Hull;

private:
    int rank_ = 0;
    std::vector<HVec> vertices_;
    std::shared_ptr<const Hull> hull_;
    const Hull& hull_data() const;
};

IntPolytope minkowski_sum(const IntPolytope& P, const IntPolytope& Q);
IntPolytope minkowski_scale(const IntPolytope& P, int k);
IntPolytope face_min(const IntPolytope& P, const HVec& phi);
IntPolytope face_min(const IntPolytope& P, const Character& phi);
std::int64_t width(const IntPolytope& P, const HVec& phi);
// P - S if S is a Minkowski summand of P (up to the translation making it exact).
std::optional<IntPolytope> minkowski_difference(const IntPolytope& P, const IntPolytope& S);
IntPolytope newton_polytope(const std::vector<HVec>& support, int rank);

// Formal difference plus - minus in Pol(H); equality is taken up to translation.
struct VirtualPolytope {
    IntPolytope plus, minus;
    static VirtualPolytope of(const IntPolytope& P) { return {P, IntPolytope::origin(P.rank())}; }
    int rank() const { return plus.rank(); }
};

VirtualPolytope vp_add(const VirtualPolytope& X, const VirtualPolytope& Y);
VirtualPolytope vp_neg(const VirtualPolytope& X);
bool polt_equal(const VirtualPolytope& X, const VirtualPolytope& Y);
// Reduces (P, S) to (P - S, {0}) when S is a summand of P; otherwise normalizes both parts.
VirtualPolytope vp_simplify(const VirtualPolytope& X);
Rational seminorm_eval(const VirtualPolytope& X, const Character& phi);
std::int64_t seminorm_eval(const VirtualPolytope& X, const HVec& phi);

nlohmann::json to_json(const IntPolytope& P);
nlohmann::json to_json(const VirtualPolytope& X, const std::vector<std::string>& basis);
VirtualPolytope virtual_polytope_from_json(const nlohmann::json& j, std::vector<std::string>* basis = nullptr);

// Support data at an integral direction phi: min of phi over the polytope, and the lattice
// points of the minimal slice (a single vertex for generic phi).
struct SupportSample {
    std::int64_t level = 0;
    std::vector<HVec> witness;
};
using SupportOracle = std::function<std::optional<SupportSample>(const HVec& phi)>;

struct ReconstructOptions {
    int random_directions = 12;
    int max_rounds = 400;
    // Half side of a box centred at the origin known to contain the polytope (0 = unknown).
    std::int64_t box = 0;
    std::uint64_t seed = 1;
};

struct Reconstruction {
    IntPolytope polytope;
    bool verified = false;
    int oracle_calls = 0;
    std::string note;
};

Reconstruction reconstruct_from_support(int rank, const SupportOracle& oracle, const ReconstructOptions& opts = {});

}  // namespace fbc
