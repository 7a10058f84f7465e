#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "ap3/fourier.hpp"
#include "ap3/residue_set.hpp"

namespace ap3 {

// Ordered-pair count of triples n, n+m, n+2m in S over (n, m) in [0,p)^2.
// The m = 0 column contributes exactly |S| trivial progressions.
struct Ap3Count {
    uint64_t total;
    uint64_t trivial;
    uint64_t nontrivial;
};

// Exact count via the word-parallel AND/popcount kernel: per difference m,
// AND the indicator with its shifts by m and 2m. Differences m and p-m
// count identically (reversal), so only m <= (p-1)/2 is scanned.
Ap3Count count_3aps(const ResidueSet& S);

// Value of (1/p) sum_a S^(a)^2 S^(-2a); equals the exact count for real
// indicator input up to transform round-off.
struct SpectralCount {
    double value;
    double imag_residue;  // |imaginary part| before it is dropped
};
SpectralCount count_3aps_spectral(const ResidueSet& S, DftPath path = DftPath::automatic);

// Frequencies split by |S^(-2a)| > threshold; sigma1 collects the large
// ones, sigma2 the rest, sigma1 + sigma2 = sum_a S^(a)^2 S^(-2a).
struct SpectrumSplit {
    double threshold;
    std::vector<uint32_t> large_freqs;
    size_t large_count;
    std::complex<double> sigma1;
    std::complex<double> sigma2;
};
SpectrumSplit split_spectrum(const ResidueSet& S, double threshold,
                             DftPath path = DftPath::automatic);

// p * log_b(log_b p) / sqrt(log_b p): the canonical threshold shape for the
// large-spectrum split, natural log by default.
double reference_threshold(uint32_t p, double log_base = 2.718281828459045235);

// Counts S and its complement and checks the exact inclusion-exclusion
// identity count(S) = p^2 - 3|S̄|p + 3|S̄|^2 - count(S̄). Returns
// (count(S).total, count(S̄).total); a violation throws std::logic_error.
std::pair<uint64_t, uint64_t> complement_identity_check(const ResidueSet& S);

// Indicator bits of S laid out twice (bit i = membership of i mod p for
// i in [0, 2p)) plus zeroed guard words, the layout count_and3 expects.
std::vector<uint64_t> doubled_indicator_bits(const ResidueSet& S);

}  // namespace ap3
