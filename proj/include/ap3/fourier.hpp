#pragma once

#include <complex>
#include <vector>

#include "ap3/prime.hpp"
#include "ap3/residue_set.hpp"
#include "ap3/weight.hpp"

namespace ap3 {

// Transform of f over Z/pZ with positive exponent convention:
// coeffs[a] = sum_n f(n) e^{+2 pi i a n / p}. coeffs[0] is the plain sum.
struct Spectrum {
    PrimeModulus modulus;
    std::vector<std::complex<double>> coeffs;

    uint32_t p() const { return modulus.value(); }

    // coeffs index of the frequency -2a mod p.
    uint32_t minus_two(uint32_t a) const {
        uint32_t p_ = modulus.value();
        uint64_t two_a = (2ull * a) % p_;
        return static_cast<uint32_t>((p_ - two_a) % p_);
    }
};

// Evaluation strategy. `automatic` uses the quadratic direct evaluation up
// to direct_path_limit() and the chirp-Z fast path above it.
enum class DftPath { automatic, direct, fast };

uint32_t direct_path_limit();  // = 4096

Spectrum dft(const ResidueSet& S, DftPath path = DftPath::automatic);
Spectrum dft(const WeightFunction& w, DftPath path = DftPath::automatic);

// Real part of the inverse transform, (1/p) sum_a F(a) e^{-2 pi i a n / p}.
// Exact round-trip partner of dft for real inputs.
std::vector<double> inverse_dft(const Spectrum& F, DftPath path = DftPath::automatic);

// sum_a |coeffs[a]|^2; equals p * sum_n f(n)^2 for the transform of f.
double spectrum_energy(const Spectrum& F);

}  // namespace ap3
