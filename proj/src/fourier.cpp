#include "ap3/fourier.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "ap3/kernels.hpp"
#include "ap3/parallel.hpp"

namespace ap3 {

namespace {

using cd = std::complex<double>;

// In-place iterative radix-2 transform, size a power of two.
// sign = +1 gives sum_k x[k] e^{+2 pi i j k / M}.
void fft_pow2(std::vector<cd>& x, int sign) {
    size_t m = x.size();
    for (size_t i = 1, j = 0; i < m; ++i) {
        size_t bit = m >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(x[i], x[j]);
    }
    for (size_t len = 2; len <= m; len <<= 1) {
        double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        cd wlen(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < m; i += len) {
            cd w(1.0, 0.0);
            for (size_t j = 0; j < len / 2; ++j) {
                cd u = x[i + j];
                cd v = x[i + j + len / 2] * w;
                x[i + j] = u + v;
                x[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

// chirp[k] = e^{i pi k^2 / p}, with k^2 reduced mod 2p so the angle stays
// small (e^{i pi (k^2 + 2pj)/p} = e^{i pi k^2/p}).
cd chirp_at(uint64_t k, uint32_t p) {
    uint64_t sq = static_cast<uint64_t>((static_cast<__uint128_t>(k) * k) % (2ull * p));
    double ang = std::numbers::pi * static_cast<double>(sq) / static_cast<double>(p);
    return {std::cos(ang), std::sin(ang)};
}

// Direct quadratic evaluation of sum_n f(n) e^{+2 pi i a n / p} from a
// precomputed table of the p-th roots of unity.
std::vector<cd> dft_direct(const std::vector<cd>& f, uint32_t p) {
    std::vector<cd> roots(p);
    for (uint32_t k = 0; k < p; ++k) {
        double ang = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(p);
        roots[k] = {std::cos(ang), std::sin(ang)};
    }
    std::vector<cd> out(p);
    parallel_for(p, [&](size_t begin, size_t end) {
        for (size_t a = begin; a < end; ++a) {
            cd sum(0.0, 0.0);
            uint64_t idx = 0;
            for (uint32_t n = 0; n < p; ++n) {
                sum += f[n] * roots[idx];
                idx += a;
                if (idx >= p)
                    idx -= p;
            }
            out[a] = sum;
        }
    });
    return out;
}

// Chirp-Z (Bluestein): a n = (a^2 + n^2 - (a-n)^2) / 2 turns the transform
// into a linear convolution with the conjugate chirp, done at power-of-two
// size. The pointwise spectrum product goes through the cmul kernel.
std::vector<cd> dft_bluestein(const std::vector<cd>& f, uint32_t p) {
    size_t m = std::bit_ceil(2ull * p - 1);
    std::vector<cd> chirp(p);
    for (uint32_t k = 0; k < p; ++k)
        chirp[k] = chirp_at(k, p);

    std::vector<cd> x(m, cd{0.0, 0.0});
    for (uint32_t n = 0; n < p; ++n)
        x[n] = f[n] * chirp[n];

    std::vector<cd> h(m, cd{0.0, 0.0});
    h[0] = std::conj(chirp[0]);
    for (uint32_t k = 1; k < p; ++k) {
        cd v = std::conj(chirp[k]);
        h[k] = v;
        h[m - k] = v;
    }

    fft_pow2(x, +1);
    fft_pow2(h, +1);
    kernels::cmul(reinterpret_cast<const double*>(x.data()),
                  reinterpret_cast<const double*>(h.data()),
                  reinterpret_cast<double*>(x.data()), m);
    fft_pow2(x, -1);
    double inv_m = 1.0 / static_cast<double>(m);

    std::vector<cd> out(p);
    for (uint32_t a = 0; a < p; ++a)
        out[a] = chirp[a] * (x[a] * inv_m);
    return out;
}

std::vector<cd> dft_complex(const std::vector<cd>& f, uint32_t p, DftPath path) {
    bool direct = path == DftPath::direct ||
                  (path == DftPath::automatic && p <= direct_path_limit());
    return direct ? dft_direct(f, p) : dft_bluestein(f, p);
}

Spectrum dft_real(const std::vector<double>& values, PrimeModulus modulus, DftPath path) {
    uint32_t p = modulus.value();
    std::vector<cd> f(p);
    for (uint32_t n = 0; n < p; ++n)
        f[n] = cd{values[n], 0.0};
    return Spectrum{modulus, dft_complex(f, p, path)};
}

}  // namespace

uint32_t direct_path_limit() {
    return 4096;
}

Spectrum dft(const ResidueSet& S, DftPath path) {
    std::vector<double> values(S.p(), 0.0);
    for (uint32_t n = 0; n < S.p(); ++n)
        if (S.contains(n))
            values[n] = 1.0;
    return dft_real(values, S.modulus(), path);
}

Spectrum dft(const WeightFunction& w, DftPath path) {
    return dft_real(w.values(), w.modulus(), path);
}

std::vector<double> inverse_dft(const Spectrum& F, DftPath path) {
    // (1/p) sum_a F(a) e^{-2 pi i a n / p} = conj(forward(conj(F)))[n] / p.
    uint32_t p = F.p();
    std::vector<cd> g(p);
    for (uint32_t a = 0; a < p; ++a)
        g[a] = std::conj(F.coeffs[a]);
    std::vector<cd> t = dft_complex(g, p, path);
    std::vector<double> out(p);
    double inv_p = 1.0 / static_cast<double>(p);
    for (uint32_t n = 0; n < p; ++n)
        out[n] = t[n].real() * inv_p;
    return out;
}

double spectrum_energy(const Spectrum& F) {
    double total = 0.0;
    for (const cd& c : F.coeffs)
        total += std::norm(c);
    return total;
}

}  // namespace ap3
