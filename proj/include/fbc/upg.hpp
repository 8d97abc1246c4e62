#pragma once

#include "fbc/hnn.hpp"
#include "fbc/polytope.hpp"
#include "fbc/words.hpp"

#include <memory>
#include <string>
#include <vector>

namespace fbc {

// Splitting tree of a UPG automorphism.
//   (leaf w)                 rank-1 factor <w>, fixed
//   (case1 L R)              invariant splitting B_L * B_R
//   (case2 B x=w u=v)        B invariant, x -> x v with v in B
//   (conj w X)               the map on B_X is y -> w^-1 h_X(y) w, with w in B_X
struct CertNode {
    enum class Kind { leaf, case1, case2, conj };
    Kind kind = Kind::leaf;
    Word word;  // leaf generator, case2 x, conj w
    Word u;     // case2 only
    std::vector<std::shared_ptr<CertNode>> children;
};

struct SplittingCertificate {
    std::shared_ptr<CertNode> root;
    Word conj;  // the tree describes conj_c o g, c = conj
};

// Tree in s-expression form plus an optional line "conj: <word>"; '#' starts a comment.
SplittingCertificate parse_certificate(const std::string& text, int rank);
std::string to_text(const SplittingCertificate& c);

struct CertificateCheck {
    bool ok = false;
    std::vector<std::string> problems;
    std::vector<Word> basis;  // free basis read off the leaves and case2 nodes
};

CertificateCheck verify_certificate(const Endomorphism& g, const SplittingCertificate& c);
bool is_unipotent(const Endomorphism& g);

struct UpgTorsion {
    std::vector<HnnElement> t;    // t_1 .. t_{n-1}
    std::vector<HVec> points;     // p0(t_i)
    IntPolytope polytope;         // sum of the segments P(1 - t_i)
};

// Throws MathError if the certificate does not verify.
UpgTorsion upg_torsion_polytope(const HnnGroup& G, const Abelianization& ab, const SplittingCertificate& c);

struct UpgSigma {
    bool in = false;                  // phi(t_i) != 0 for all i
    std::vector<std::int64_t> values; // phi(t_i)
    bool face_is_point = false;       // F_phi of the polytope is a vertex
    std::vector<HVec> hyperplanes;    // {phi(t_i) = 0}
};

UpgSigma upg_sigma(const UpgTorsion& tor, const HVec& phi);

}  // namespace fbc
