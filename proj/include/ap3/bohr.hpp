#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ap3/ap_run.hpp"
#include "ap3/prime.hpp"
#include "ap3/residue_set.hpp"
#include "ap3/weight.hpp"

namespace ap3 {

// Frequencies and radius of a Bohr neighborhood: residues n with
// ||a_i n / p|| < eps for every listed a_i, ||x|| = distance to the
// nearest integer.
struct BohrSpec {
    PrimeModulus modulus;
    std::vector<uint32_t> freqs;
    double eps;  // in (0, 1/2)
};

// Smallest n in [1, p-1] inside the neighborhood, or nullopt if none
// exists. The comparison ||a n / p|| < eps is exact: eps is decomposed
// into its binary mantissa and the test done in integers. With no
// frequencies every n qualifies, so the result is 1.
std::optional<uint32_t> bohr_element(const BohrSpec& spec);

// True exactly when min(r, p-r) < eps * p for r = a*n mod p, evaluated
// without rounding. Exposed for the search and for verification.
bool within_bohr_radius(uint32_t a, uint32_t n, uint32_t p, double eps);

// The progression {j * n0 mod p : 0 <= j < length}. length <= p keeps the
// elements distinct.
struct SmoothingProgression {
    PrimeModulus modulus;
    uint32_t n0;
    uint32_t length;
    std::vector<uint32_t> elements;
};

SmoothingProgression make_progression(PrimeModulus modulus, uint32_t n0, uint32_t length);

// eps and length derived from the exponent parameter L at modulus p:
// length = ceil(log^L p), eps = 1 / log^{2L} p, logs in the given base.
struct SmoothingParams {
    double eps;
    uint32_t length;
};
SmoothingParams derive_smoothing_params(uint32_t p, double L,
                                        double log_base = 2.718281828459045235);

enum class ConvolvePath { direct, spectral };

// w(m) = |{n in N : m - n in S}| / |N|, the density of S on the reversed
// translate m - N. Values lie in [0, 1] and average |S|/p exactly.
WeightFunction convolve(const ResidueSet& S, const SmoothingProgression& N,
                        ConvolvePath path = ConvolvePath::direct);

// Longest contiguous block of the translate m, m-n0, ..., m-(|N|-1)n0 that
// stays inside S, returned in ascending-step orientation. Requires the
// caller-checked density (S*N)(m) > 1 - eps; at most eps|N| elements of the
// translate miss S, so the longest block has length >= ceil(1/eps) - 1
// whenever eps > 1/|N| and eps|N| is an integer.
ApRun extract_ap_from_convolution(const ResidueSet& S, const SmoothingProgression& N,
                                  uint32_t m, double eps);

// max over a in freqs of max(|N^(a) - 1|, |N^(-2a) - 1|) for the scaled
// indicator N(n) = 1/|N| on N. Zero frequency gives exactly 1.
double spectrum_flatness(const SmoothingProgression& N, const std::vector<uint32_t>& freqs);

}  // namespace ap3
