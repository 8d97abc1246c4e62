#pragma once

#include "fbc/numeric.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fbc {

// Freely reduced word. Letter +k is the generator s_k (k >= 1), -k its inverse.
struct Word {
    std::vector<int> letters;

    Word() = default;
    explicit Word(std::vector<int> l);  // reduces

    bool empty() const { return letters.empty(); }
    size_t size() const { return letters.size(); }
    int max_generator() const;

    friend bool operator==(const Word& a, const Word& b) { return a.letters == b.letters; }
    friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }
    friend bool operator<(const Word& a, const Word& b);
};

Word generator(int k);  // s_k, 1-based
Word multiply(const Word& u, const Word& v);
Word multiply_checked(const Word& u, const Word& v, int rank);
Word inverse(const Word& w);
Word power(const Word& w, long long k);
Word conjugate(const Word& c, const Word& w);  // c w c^-1
Word common_prefix(const Word& u, const Word& v);
// Exponent sum of each generator, length `rank`.
std::vector<long long> abelian(const Word& w, int rank);

// Grammar: whitespace separated tokens, lowercase letter k = generator k, uppercase = inverse,
// "1" or empty = identity. Multi-letter tokens are read letter by letter.
Word parse_word(const std::string& text, int rank);
std::string to_string(const Word& w);        // "a b A"; "1" for the identity
std::string to_compact(const Word& w);       // "abA"; "1" for the identity
char letter_name(int letter);

// Elements of the integral group ring of F_n.
using FreeRingElem = std::map<Word, Int>;

void fr_add_term(FreeRingElem& x, const Word& w, const Int& c);
FreeRingElem fr_add(const FreeRingElem& x, const FreeRingElem& y);
FreeRingElem fr_sub(const FreeRingElem& x, const FreeRingElem& y);
FreeRingElem fr_mul(const FreeRingElem& x, const FreeRingElem& y);
FreeRingElem fr_word(const Word& w, const Int& c = 1);
std::string to_string(const FreeRingElem& x);

// Fox derivative with respect to s_i (1-based).
FreeRingElem fox_derivative(const Word& w, int i);
// sum_i dw/ds_i (1 - s_i) == 1 - w
bool fundamental_formula_check(const Word& w, int rank);

struct Endomorphism {
    int rank = 0;
    std::vector<Word> images;

    static Endomorphism identity(int n);
    Word apply(const Word& w) const;
    // (this o other)(x) = this(other(x))
    Endomorphism compose(const Endomorphism& other) const;
    bool operator==(const Endomorphism& o) const { return rank == o.rank && images == o.images; }
};

// "rank: n" followed by lines "a -> <word>"; '#' starts a comment.
Endomorphism parse_endomorphism(const std::string& text);
std::string to_text(const Endomorphism& g);

// Stallings folding of a finite set of words, with edge memory recording a path in the
// generating words. Used for membership and preimages.
class FoldedGraph {
public:
    FoldedGraph() = default;
    FoldedGraph(const std::vector<Word>& gens, int rank);

    int rank() const { return rank_; }
    int vertex_count() const { return vertices_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    // True iff the nonempty generators form a free basis of their span.
    bool is_basis() const { return basis_; }
    bool contains(const Word& w) const;
    // Expression of w in the generators (letter +i = gens[i-1]); nullopt for non-members.
    std::optional<Word> try_preimage(const Word& w) const;
    // Throws InputError for non-members.
    Word preimage(const Word& w) const;
    // True iff the graph is a single vertex carrying every generator of F_n as a loop.
    bool is_whole_group() const;

private:
    struct Edge {
        int from, to, label;  // label > 0
        Word mem;
    };
    bool read(const Word& w, Word* mem) const;

    int n_ = 0;
    int rank_ = 0;
    int vertices_ = 0;
    bool basis_ = true;
    std::vector<Edge> edges_;
    // step_[v][key] = edge index; key = label for outgoing, -label for incoming.
    std::vector<std::map<int, int>> step_;
};

FoldedGraph fold_subgroup(const std::vector<Word>& gens, int rank);
bool is_injective(const Endomorphism& g);
bool is_automorphism(const Endomorphism& g);
// Inverse of an automorphism (throws MathError otherwise).
Endomorphism inverse(const Endomorphism& g);

}  // namespace fbc
