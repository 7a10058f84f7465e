#include "ap3/ap_count.hpp"

#include <cmath>
#include <stdexcept>

#include "ap3/kernels.hpp"
#include "ap3/parallel.hpp"

namespace ap3 {

std::vector<uint64_t> doubled_indicator_bits(const ResidueSet& S) {
    uint32_t p = S.p();
    std::vector<uint64_t> out((2ull * p + 63) / 64 + 6, 0);
    for (uint32_t n = 0; n < p; ++n) {
        if (S.contains(n)) {
            out[n >> 6] |= uint64_t{1} << (n & 63);
            uint32_t n2 = n + p;
            out[n2 >> 6] |= uint64_t{1} << (n2 & 63);
        }
    }
    return out;
}

Ap3Count count_3aps(const ResidueSet& S) {
    uint32_t p = S.p();
    std::vector<uint64_t> bits = doubled_indicator_bits(S);
    uint32_t half = (p - 1) / 2;
    std::vector<uint64_t> partial(half, 0);
    parallel_for(half, [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            uint32_t m = static_cast<uint32_t>(i) + 1;
            partial[i] = kernels::count_and3(bits.data(), p, m, 2 * m);
        }
    });
    uint64_t nontrivial = 0;
    for (uint64_t c : partial)
        nontrivial += 2 * c;
    uint64_t trivial = S.size();
    return {trivial + nontrivial, trivial, nontrivial};
}

SpectralCount count_3aps_spectral(const ResidueSet& S, DftPath path) {
    Spectrum F = dft(S, path);
    uint32_t p = S.p();
    std::complex<double> sum(0.0, 0.0);
    for (uint32_t a = 0; a < p; ++a) {
        const auto& c = F.coeffs[a];
        sum += c * c * F.coeffs[F.minus_two(a)];
    }
    sum /= static_cast<double>(p);
    return {sum.real(), std::abs(sum.imag())};
}

SpectrumSplit split_spectrum(const ResidueSet& S, double threshold, DftPath path) {
    if (!(threshold > 0.0))
        throw std::invalid_argument("split_spectrum: threshold must be positive");
    Spectrum F = dft(S, path);
    SpectrumSplit out;
    out.threshold = threshold;
    out.sigma1 = {0.0, 0.0};
    out.sigma2 = {0.0, 0.0};
    for (uint32_t a = 0; a < S.p(); ++a) {
        const auto& c = F.coeffs[a];
        std::complex<double> back = F.coeffs[F.minus_two(a)];
        std::complex<double> term = c * c * back;
        if (std::abs(back) > threshold) {
            out.large_freqs.push_back(a);
            out.sigma1 += term;
        } else {
            out.sigma2 += term;
        }
    }
    out.large_count = out.large_freqs.size();
    return out;
}

double reference_threshold(uint32_t p, double log_base) {
    double lb = std::log(log_base);
    double logp = std::log(static_cast<double>(p)) / lb;
    double loglogp = std::log(logp) / lb;
    return static_cast<double>(p) * loglogp / std::sqrt(logp);
}

std::pair<uint64_t, uint64_t> complement_identity_check(const ResidueSet& S) {
    ResidueSet comp = S.complement();
    uint64_t count_s = count_3aps(S).total;
    uint64_t count_c = count_3aps(comp).total;
    uint64_t p = S.p();
    uint64_t cbar = comp.size();
    // count(S) + count(S̄) + cross terms = p^2; the cross terms collapse to
    // 3|S̄|p - 3|S̄|^2 because each of the three slots of a triple is free.
    __int128 rhs = static_cast<__int128>(p) * p - static_cast<__int128>(3) * cbar * p +
                   static_cast<__int128>(3) * cbar * cbar - static_cast<__int128>(count_c);
    if (rhs != static_cast<__int128>(count_s))
        throw std::logic_error("complement_identity_check: inclusion-exclusion identity violated");
    return {count_s, count_c};
}

}  // namespace ap3
