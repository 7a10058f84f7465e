#include "ap3/kernels.hpp"

#include <bit>
#include <cstdlib>
#include <stdexcept>

namespace ap3::kernels {

namespace {

// Reads 64 bits starting at bit offset `off`. The buffer owns enough guard
// words that words[off/64 + 1] is always addressable.
inline uint64_t bit_window(const uint64_t* words, uint64_t off) {
    uint64_t lo = words[off >> 6];
    unsigned r = static_cast<unsigned>(off & 63);
    if (r == 0)
        return lo;
    uint64_t hi = words[(off >> 6) + 1];
    return (lo >> r) | (hi << (64 - r));
}

}  // namespace

uint64_t count_and3_scalar(const uint64_t* doubled, uint32_t p, uint32_t o1, uint32_t o2) {
    uint64_t total = 0;
    uint32_t full_words = p >> 6;
    for (uint32_t w = 0; w < full_words; ++w) {
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

void add_u32_scalar(uint32_t* acc, const uint32_t* src, size_t n) {
    for (size_t i = 0; i < n; ++i)
        acc[i] += src[i];
}

void cmul_scalar(const double* a, const double* b, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        double ar = a[2 * i], ai = a[2 * i + 1];
        double br = b[2 * i], bi = b[2 * i + 1];
        out[2 * i] = ar * br - ai * bi;
        out[2 * i + 1] = ar * bi + ai * br;
    }
}

#if defined(AP3_HAVE_AVX2_TU)
// Defined in kernels_avx2.cpp, compiled with -mavx2; only reachable after a
// runtime CPU check.
uint64_t count_and3_avx2(const uint64_t* doubled, uint32_t p, uint32_t o1, uint32_t o2);
void add_u32_avx2(uint32_t* acc, const uint32_t* src, size_t n);
void cmul_avx2(const double* a, const double* b, double* out, size_t n);
#endif

namespace {

bool cpu_has_avx2() {
#if defined(AP3_HAVE_AVX2_TU) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend initial_backend() {
    if (const char* env = std::getenv("AP3LAB_KERNELS")) {
        std::string v(env);
        if (v == "scalar")
            return Backend::scalar;
        if (v == "avx2") {
            if (!cpu_has_avx2())
                throw std::invalid_argument("AP3LAB_KERNELS=avx2: CPU or build lacks AVX2");
            return Backend::avx2;
        }
        // "auto" and anything else fall through to detection.
    }
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

Backend& backend_slot() {
    static Backend backend = initial_backend();
    return backend;
}

}  // namespace

bool avx2_supported() {
    return cpu_has_avx2();
}

Backend active_backend() {
    return backend_slot();
}

std::string backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

void force_backend(Backend b) {
    if (b == Backend::avx2 && !cpu_has_avx2())
        throw std::invalid_argument("force_backend: CPU or build lacks AVX2");
    backend_slot() = b;
}

uint64_t count_and3(const uint64_t* doubled, uint32_t p, uint32_t o1, uint32_t o2) {
#if defined(AP3_HAVE_AVX2_TU)
    if (active_backend() == Backend::avx2)
        return count_and3_avx2(doubled, p, o1, o2);
#endif
    return count_and3_scalar(doubled, p, o1, o2);
}

void add_u32(uint32_t* acc, const uint32_t* src, size_t n) {
#if defined(AP3_HAVE_AVX2_TU)
    if (active_backend() == Backend::avx2) {
        add_u32_avx2(acc, src, n);
        return;
    }
#endif
    add_u32_scalar(acc, src, n);
}

void cmul(const double* a, const double* b, double* out, size_t n) {
#if defined(AP3_HAVE_AVX2_TU)
    if (active_backend() == Backend::avx2) {
        cmul_avx2(a, b, out, n);
        return;
    }
#endif
    cmul_scalar(a, b, out, n);
}

}  // namespace ap3::kernels
