// This translation unit is compiled with -mavx2. Runtime CPU detection in
// kernels.cpp ensures these functions are only called on supporting CPUs.

#include <immintrin.h>

#include <bit>
#include <cstdint>
#include <cstddef>

namespace ap3::kernels {

namespace {

inline uint64_t bit_window(const uint64_t* words, uint64_t off) {
    uint64_t lo = words[off >> 6];
    unsigned r = static_cast<unsigned>(off & 63);
    if (r == 0)
        return lo;
    uint64_t hi = words[(off >> 6) + 1];
    return (lo >> r) | (hi << (64 - r));
}

// Four consecutive 64-bit windows starting at bit offset 64*i + r of `base`,
// i = 0..3. base must have 5 addressable words.
inline __m256i bit_window4(const uint64_t* base, unsigned r) {
    __m256i lo = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(base));
    if (r == 0)
        return lo;
    __m256i hi = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(base + 1));
    __m128i rs = _mm_cvtsi32_si128(static_cast<int>(r));
    __m128i ls = _mm_cvtsi32_si128(static_cast<int>(64 - r));
    return _mm256_or_si256(_mm256_srl_epi64(lo, rs), _mm256_sll_epi64(hi, ls));
}

// Per-64-bit-lane popcounts via the nibble-LUT shuffle; result lanes are u64.
inline __m256i popcount_lanes(__m256i v) {
    const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                         0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_mask = _mm256_set1_epi8(0x0f);
    __m256i lo = _mm256_and_si256(v, low_mask);
    __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
    return _mm256_sad_epu8(cnt, _mm256_setzero_si256());
}

}  // namespace

uint64_t count_and3_avx2(const uint64_t* doubled, uint32_t p, uint32_t o1, uint32_t o2) {
    const uint32_t q1 = o1 >> 6, r1 = o1 & 63;
    const uint32_t q2 = o2 >> 6, r2 = o2 & 63;
    uint32_t full_words = p >> 6;
    uint32_t w = 0;
    __m256i acc = _mm256_setzero_si256();
    for (; w + 4 <= full_words; w += 4) {
        __m256i base = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(doubled + w));
        __m256i a = bit_window4(doubled + w + q1, r1);
        __m256i b = bit_window4(doubled + w + q2, r2);
        __m256i x = _mm256_and_si256(base, _mm256_and_si256(a, b));
        acc = _mm256_add_epi64(acc, popcount_lanes(x));
    }
    alignas(32) uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];

    for (; w < full_words; ++w) {
        uint64_t base = static_cast<uint64_t>(w) << 6;
        uint64_t x = doubled[w] & bit_window(doubled, base + o1) & bit_window(doubled, base + o2);
        total += std::popcount(x);
    }
    uint32_t tail = p & 63;
    if (tail != 0) {
        uint64_t base = static_cast<uint64_t>(full_words) << 6;
        uint64_t x = doubled[full_words] & bit_window(doubled, base + o1) &
                     bit_window(doubled, base + o2);
        x &= (uint64_t{1} << tail) - 1;
        total += std::popcount(x);
    }
    return total;
}

void add_u32_avx2(uint32_t* acc, const uint32_t* src, size_t n) {
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(acc + i));
        __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(acc + i), _mm256_add_epi32(a, s));
    }
    for (; i < n; ++i)
        acc[i] += src[i];
}

// No FMA here: products and the add/sub must contract exactly like the
// scalar reference so both backends agree bit for bit.
void cmul_avx2(const double* a, const double* b, double* out, size_t n) {
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(a + 2 * i);
        __m256d vb = _mm256_loadu_pd(b + 2 * i);
        __m256d b_re = _mm256_movedup_pd(vb);
        __m256d b_im = _mm256_permute_pd(vb, 0xf);
        __m256d a_sw = _mm256_permute_pd(va, 0x5);
        __m256d t1 = _mm256_mul_pd(va, b_re);
        __m256d t2 = _mm256_mul_pd(a_sw, b_im);
        _mm256_storeu_pd(out + 2 * i, _mm256_addsub_pd(t1, t2));
    }
    if (i < n) {
        double ar = a[2 * i], ai = a[2 * i + 1];
        double br = b[2 * i], bi = b[2 * i + 1];
        out[2 * i] = ar * br - ai * bi;
        out[2 * i + 1] = ar * bi + ai * br;
    }
}

}  // namespace ap3::kernels
