#include "ap3/bohr.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "ap3/fourier.hpp"
#include "ap3/kernels.hpp"

namespace ap3 {

bool within_bohr_radius(uint32_t a, uint32_t n, uint32_t p, double eps) {
    uint32_t r = static_cast<uint32_t>((static_cast<uint64_t>(a) * n) % p);
    uint64_t min2 = std::min(r, p - r);
    if (min2 == 0)
        return true;  // eps > 0 by contract
    // Exact test of min2 < eps * p. Write eps = F * 2^{k-53} with F a
    // 53-bit integer; then min2 < eps*p  iff  min2 * 2^{53-k} < F * p.
    int k = 0;
    double mant = std::frexp(eps, &k);
    auto F = static_cast<uint64_t>(std::ldexp(mant, 53));
    int s = 53 - k;
    // F * p < 2^{53+32} = 2^85, so lhs with min2 >= 1 and s >= 86 always wins.
    if (s >= 86)
        return false;
    __uint128_t lhs = static_cast<__uint128_t>(min2) << s;
    __uint128_t rhs = static_cast<__uint128_t>(F) * p;
    return lhs < rhs;
}

std::optional<uint32_t> bohr_element(const BohrSpec& spec) {
    if (!(spec.eps > 0.0) || !(spec.eps < 0.5))
        throw std::invalid_argument("bohr_element: eps must lie in (0, 1/2)");
    uint32_t p = spec.modulus.value();
    for (uint32_t a : spec.freqs)
        if (a >= p)
            throw std::invalid_argument("bohr_element: frequency out of range");
    for (uint32_t n = 1; n < p; ++n) {
        bool ok = true;
        for (uint32_t a : spec.freqs) {
            if (!within_bohr_radius(a, n, p, spec.eps)) {
                ok = false;
                break;
            }
        }
        if (ok)
            return n;
    }
    if (spec.freqs.empty())
        return 1;  // unreachable for p >= 5, kept for clarity
    return std::nullopt;
}

SmoothingProgression make_progression(PrimeModulus modulus, uint32_t n0, uint32_t length) {
    uint32_t p = modulus.value();
    if (n0 == 0 || n0 >= p)
        throw std::invalid_argument("make_progression: n0 must lie in [1, p-1]");
    if (length == 0 || length > p)
        throw std::invalid_argument("make_progression: length must lie in [1, p]");
    std::vector<uint32_t> elements(length);
    uint32_t pos = 0;
    for (uint32_t j = 0; j < length; ++j) {
        elements[j] = pos;
        pos += n0;
        if (pos >= p)
            pos -= p;
    }
    return {modulus, n0, length, std::move(elements)};
}

SmoothingParams derive_smoothing_params(uint32_t p, double L, double log_base) {
    double logp = std::log(static_cast<double>(p)) / std::log(log_base);
    double len = std::pow(logp, L);
    double eps = 1.0 / std::pow(logp, 2.0 * L);
    return {eps, static_cast<uint32_t>(std::ceil(len))};
}

namespace {

WeightFunction convolve_direct(const ResidueSet& S, const SmoothingProgression& N) {
    uint32_t p = S.p();
    // Doubled indicator so each shift is one contiguous window add.
    std::vector<uint32_t> doubled(2 * p, 0);
    for (uint32_t n = 0; n < p; ++n) {
        if (S.contains(n)) {
            doubled[n] = 1;
            doubled[n + p] = 1;
        }
    }
    std::vector<uint32_t> acc(p, 0);
    for (uint32_t n : N.elements)
        kernels::add_u32(acc.data(), doubled.data() + (p - n), p);
    std::vector<double> values(p);
    double inv = 1.0 / static_cast<double>(N.length);
    for (uint32_t m = 0; m < p; ++m)
        values[m] = static_cast<double>(acc[m]) * inv;
    return WeightFunction(S.modulus(), std::move(values));
}

WeightFunction convolve_spectral(const ResidueSet& S, const SmoothingProgression& N) {
    // The transform turns the convolution into a pointwise product:
    // (S*N)^(a) = S^(a) N^(a) with N the scaled indicator.
    uint32_t p = S.p();
    Spectrum FS = dft(S);
    std::vector<double> nvals(p, 0.0);
    double inv = 1.0 / static_cast<double>(N.length);
    for (uint32_t n : N.elements)
        nvals[n] = inv;
    Spectrum FN = dft(WeightFunction(S.modulus(), std::move(nvals)));
    Spectrum prod{S.modulus(), std::vector<std::complex<double>>(p)};
    for (uint32_t a = 0; a < p; ++a)
        prod.coeffs[a] = FS.coeffs[a] * FN.coeffs[a];
    return WeightFunction(S.modulus(), inverse_dft(prod));
}

}  // namespace

WeightFunction convolve(const ResidueSet& S, const SmoothingProgression& N, ConvolvePath path) {
    if (!(S.modulus() == N.modulus))
        throw std::invalid_argument("convolve: mismatched moduli");
    return path == ConvolvePath::direct ? convolve_direct(S, N) : convolve_spectral(S, N);
}

ApRun extract_ap_from_convolution(const ResidueSet& S, const SmoothingProgression& N,
                                  uint32_t m, double eps) {
    if (!(eps > 0.0) || !(eps < 1.0))
        throw std::invalid_argument("extract_ap_from_convolution: eps must lie in (0, 1)");
    uint32_t p = S.p();
    if (m >= p)
        throw std::invalid_argument("extract_ap_from_convolution: m out of range");
    // Membership of the translate m - j*n0, j ascending.
    uint32_t hits = 0;
    std::vector<bool> in_s(N.length);
    uint32_t pos = m;
    for (uint32_t j = 0; j < N.length; ++j) {
        in_s[j] = S.contains(pos);
        hits += in_s[j];
        pos = pos >= N.n0 ? pos - N.n0 : pos + p - N.n0;
    }
    double density = static_cast<double>(hits) / static_cast<double>(N.length);
    if (!(density > 1.0 - eps))
        throw std::invalid_argument(
            "extract_ap_from_convolution: (S*N)(m) > 1 - eps does not hold at this m");
    // Longest block of consecutive hits; first such block wins ties.
    uint32_t best_len = 0, best_j = 0, cur = 0;
    for (uint32_t j = 0; j < N.length; ++j) {
        cur = in_s[j] ? cur + 1 : 0;
        if (cur > best_len) {
            best_len = cur;
            best_j = j + 1 - cur;
        }
    }
    // Indices best_j .. best_j+best_len-1 descend by n0 from m; reorder so
    // the run ascends by step n0.
    uint64_t back = static_cast<uint64_t>(best_j + best_len - 1) * N.n0 % p;
    uint32_t start = static_cast<uint32_t>((m + p - back % p) % p);
    if (best_len <= 1)
        return {start, 0, best_len};
    return {start, N.n0, best_len};
}

double spectrum_flatness(const SmoothingProgression& N, const std::vector<uint32_t>& freqs) {
    uint32_t p = N.modulus.value();
    double inv = 1.0 / static_cast<double>(N.length);
    auto coeff = [&](uint32_t a) {
        std::complex<double> sum(0.0, 0.0);
        for (uint32_t n : N.elements) {
            double ang = 2.0 * std::numbers::pi * static_cast<double>(a) *
                         static_cast<double>(n) / static_cast<double>(p);
            sum += std::complex<double>(std::cos(ang), std::sin(ang));
        }
        return sum * inv;
    };
    double worst = 0.0;
    for (uint32_t a : freqs) {
        uint32_t minus2a = static_cast<uint32_t>((2ull * (p - a)) % p);
        double d1 = std::abs(coeff(a) - 1.0);
        double d2 = std::abs(coeff(minus2a) - 1.0);
        worst = std::max(worst, std::max(d1, d2));
    }
    return worst;
}

}  // namespace ap3
