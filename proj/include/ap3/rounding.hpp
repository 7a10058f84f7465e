#pragma once

#include <cstdint>

#include "ap3/residue_set.hpp"
#include "ap3/weight.hpp"

namespace ap3 {

// Acceptance evidence for one rounding run. max_spectral_deviation is
// max_a |u^(a) - w^(a)| over all p frequencies, recomputed from the
// transforms of the accepted set and the input weights. delta is the gap
// ceil(sum w) - sum w in [0, 1), the remainder absorbed when the rounded
// set is later adjusted to an integer cardinality.
struct RoundingCertificate {
    double max_spectral_deviation;
    double bound;
    uint32_t attempts;
    uint64_t seed;
    double delta;
};

struct RoundingResult {
    ResidueSet set;
    RoundingCertificate certificate;
};

// 4 exp(-r t^2 / 2): the two-sided tail bound behind the acceptance
// probability estimates.
double hoeffding_bound(uint64_t r, double t);

// Samples u(m) ~ Bernoulli(w(m)) independently and accepts when every
// frequency satisfies |u^(a) - w^(a)| < bound_factor * ln(p) * sqrt(p).
// Rejections resample with the seed derived for the next attempt index, so
// the whole procedure is a pure function of (w, seed, bound_factor).
// Throws StageError("rounding", ...) when max_attempts runs out.
RoundingResult round_weights(const WeightFunction& w, uint64_t seed, double bound_factor,
                             uint32_t max_attempts = 64);

// Flips exactly ||S| - target| membership bits chosen uniformly from the
// eligible side (members when shrinking, non-members when growing). The
// flip budget is capped at 4 * ceil(ln(p) * sqrt(p)); a request beyond it
// throws StageError("adjust-cardinality", ...). Each flip moves any
// spectral coefficient by at most 1 in modulus.
ResidueSet adjust_cardinality(const ResidueSet& S, uint32_t target, uint64_t seed);

}  // namespace ap3
