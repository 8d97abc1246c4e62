#pragma once

#include "fbc/alexander.hpp"
#include "fbc/group_ring.hpp"
#include "fbc/hnn.hpp"
#include "fbc/novikov.hpp"
#include "fbc/polytope.hpp"
#include "fbc/sampling.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fbc {

// Leading data of det^c(A) in the phi-completion.
struct LeadingSample {
    HVec phi;
    std::int64_t level = 0;
    std::vector<HVec> witness;  // H-points of the leading slice; one point for generic phi
    bool determined = false;
    std::string note;
};

LeadingSample dieudonne_leading(const GRMatrix& A, const GradingPtr& gr, std::int64_t max_height = 64);

// A presentation (chart) together with the generator s whose column is removed from A(g;S,s).
struct Frame {
    Chart chart;
    int removed = 0;   // 0..n-1 chart generator, n = stable letter
    GRMatrix A;
    HVec s_point;      // p0(s) in H
    std::int64_t box = 0;  // bound on |coordinate| over P(det A)

    std::string describe() const;
};

struct L2Options {
    std::int64_t max_height = 64;
    std::uint64_t seed = 1;
};

// Support data of P_L2(G) = P(det A(g;S,s)) - P(s-1), combined over several frames. Frame 0
// is the identity chart with s = t; other frames are translated onto frame 0 by calibration.
class L2Engine {
public:
    L2Engine(GroupPtr G, Abelianization ab, L2Options opts = {});

    const HnnGroup& group() const { return *G_; }
    const Abelianization& abelianization() const { return ab_; }
    const L2Options& options() const { return opts_; }
    int frame_count() const { return static_cast<int>(frames_.size()); }
    const Frame& frame(int i) const { return frames_[i]; }
    // Adds the chart with basis positive for phi (n = 2); returns its index.
    int add_positive_chart(const HVec& phi);

    // Elimination in one frame, with the frame's own translation.
    const LeadingSample& raw(int frame, const HVec& phi);
    // Support of P(det A) of frame 0 at phi; the witness is present only when it is a single point.
    std::optional<SupportSample> det_support(const HVec& phi);
    // Width of P_L2 at integral phi computed in one frame; nullopt if that frame cannot decide.
    std::optional<std::int64_t> width_in_frame(const HVec& phi, int frame);
    // First frame that decides; throws Undetermined if none does.
    std::int64_t width(const HVec& phi);
    std::int64_t box() const { return frames_[0].box; }

private:
    bool calibrate(int frame);
    std::optional<HVec> generic_point(int frame, const HVec& phi);

    GroupPtr G_;
    Abelianization ab_;
    L2Options opts_;
    std::vector<Frame> frames_;
    std::vector<std::optional<HVec>> offset_;  // P_L2 in frame f = P_L2 in frame 0 + offset
    std::vector<bool> calibration_tried_;
    std::map<std::pair<int, HVec>, LeadingSample> cache_;
    Rng rng_;
};

Rational thurston_width(L2Engine& engine, const Character& phi);

struct L2Result {
    VirtualPolytope polytope;      // P_L2 in H coordinates
    IntPolytope det_polytope;      // P(det A(g;S,t))
    HVec s_point;
    bool verified = false;
    bool virtual_only = false;     // P(det) could not be reduced by P(s-1)
    std::vector<std::pair<HVec, std::int64_t>> widths;  // checked against direct widths
    int oracle_calls = 0;
    std::string note;
};

L2Result l2_polytope(L2Engine& engine, int fresh_directions = 20);

// BNS invariant on the character sphere for n = 2 and b1 <= 3, as a certified cell decomposition.
struct SigmaCell {
    int dim = 0;                 // 0: ray; 1: arc; 2: open region of the sphere
    HVec rep;                    // interior ray
    std::vector<int> signs;      // sign of the cell against each hyperplane
    bool in = false;
    bool resolved = true;
    std::string chart;
};

struct SigmaReport {
    int b1 = 0;
    std::vector<HVec> hyperplanes;  // normals n: hyperplane {phi : phi . n = 0}
    std::vector<SigmaCell> cells;
    int components = 0;
    bool certified = false;
    int rounds = 0;
    std::vector<std::string> charts;
    // Membership of an arbitrary nonzero direction, read off the decomposition.
    std::optional<bool> lookup(const HVec& phi) const;
};

// [phi] in Sigma(G) for n = 2 (the module novikov test run at -phi).
BnsResult sigma_membership(const HnnGroup& G, const Abelianization& ab, const HVec& phi);
SigmaReport bns_components(const HnnGroup& G, const Abelianization& ab, int max_rounds = 12);
nlohmann::json to_json(const SigmaReport& r, const std::vector<std::string>& labels);
SigmaReport sigma_report_from_json(const nlohmann::json& j);

struct InequalityRow {
    HVec phi;
    Rational alexander;
    Rational thurston;
    bool ok = true;
};

struct InequalityReport {
    int b1 = 0;
    std::vector<InequalityRow> rows;
    int violations = 0;
    int equalities = 0;
    std::optional<bool> fibred_ok;   // automorphisms: ||psi||_T == n - 1
    std::int64_t fibred_width = 0;
    std::vector<std::string> undetermined;
};

InequalityReport check_inequalities(L2Engine& engine, const std::vector<HVec>& directions);

}  // namespace fbc
