#pragma once

#include "mixid/model.hpp"
#include "mixid/rng.hpp"

namespace mixid {

// Interior rational model: every frequency row and the weight vector are
// independent draws of integers in [1, max_count], normalized.
ExactParams random_rational_params(int K, int L, int M, Rng& rng, int max_count = 20);

}  // namespace mixid
