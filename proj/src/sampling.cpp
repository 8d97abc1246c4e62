#include "fbc/sampling.hpp"

namespace fbc {

Word random_word(Rng& rng, int rank, int max_len) {
    std::uniform_int_distribution<int> len(0, max_len);
    std::uniform_int_distribution<int> gen(1, rank);
    std::bernoulli_distribution sign(0.5);
    std::vector<int> letters;
    int target = len(rng);
    while (static_cast<int>(letters.size()) < target) {
        int l = gen(rng) * (sign(rng) ? 1 : -1);
        if (!letters.empty() && letters.back() == -l) continue;
        letters.push_back(l);
    }
    return Word(letters);
}

Endomorphism random_automorphism(Rng& rng, int rank, int moves) {
    Endomorphism g = Endomorphism::identity(rank);
    std::uniform_int_distribution<int> idx(0, rank - 1);
    std::uniform_int_distribution<int> kind(0, 3);
    for (int m = 0; m < moves; ++m) {
        int i = idx(rng), j = idx(rng);
        switch (kind(rng)) {
        case 0:
            if (i != j) g.images[i] = multiply(g.images[i], g.images[j]);
            break;
        case 1:
            if (i != j) g.images[i] = multiply(g.images[j], g.images[i]);
            break;
        case 2:
            g.images[i] = inverse(g.images[i]);
            break;
        default:
            std::swap(g.images[i], g.images[j]);
        }
    }
    return g;
}

Endomorphism random_injective(Rng& rng, int rank, int max_len) {
    for (;;) {
        Endomorphism g;
        g.rank = rank;
        for (int i = 0; i < rank; ++i) {
            Word w;
            while (w.empty()) w = random_word(rng, rank, max_len);
            g.images.push_back(w);
        }
        if (is_injective(g)) return g;
    }
}

HVec random_direction(Rng& rng, int r, int bound) {
    std::uniform_int_distribution<int> d(-bound, bound);
    for (;;) {
        HVec v(r);
        bool nz = false;
        for (auto& x : v) {
            x = d(rng);
            nz |= x != 0;
        }
        if (nz) return v;
    }
}

IntPolytope random_polytope(Rng& rng, int rank, int points, int bound) {
    std::uniform_int_distribution<int> d(-bound, bound);
    std::vector<HVec> pts;
    for (int i = 0; i < points; ++i) {
        HVec v(rank);
        for (auto& x : v) x = d(rng);
        pts.push_back(v);
    }
    return IntPolytope::hull(rank, pts);
}

}  // namespace fbc
