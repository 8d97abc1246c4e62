#pragma once

#include "fbc/hnn.hpp"
#include "fbc/polytope.hpp"
#include "fbc/words.hpp"

#include <random>

namespace fbc {

using Rng = std::mt19937_64;

Word random_word(Rng& rng, int rank, int max_len);
// Product of random Nielsen moves (always an automorphism).
Endomorphism random_automorphism(Rng& rng, int rank, int moves);
// Random endomorphism with images of length <= max_len, rejected until folding says injective.
Endomorphism random_injective(Rng& rng, int rank, int max_len);
// Nonzero integral direction with entries in [-bound, bound].
HVec random_direction(Rng& rng, int r, int bound);
IntPolytope random_polytope(Rng& rng, int rank, int points, int bound);

}  // namespace fbc
