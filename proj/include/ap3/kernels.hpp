#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace ap3::kernels {

// The hot inner loops exist twice: a portable scalar reference and an AVX2
// variant. Dispatch is resolved once at startup from CPU capability, with
// the AP3LAB_KERNELS environment variable (scalar|avx2|auto) as override.
// Both variants produce identical results, bit for bit; the complex
// multiply deliberately avoids FMA so the contraction order matches.
enum class Backend { scalar, avx2 };

bool avx2_supported();
Backend active_backend();
std::string backend_name(Backend);

// Test hook: pin the dispatch to one backend. Throws std::invalid_argument
// if the CPU (or build) lacks it.
void force_backend(Backend);

// Popcount of bit(n) & bit(n + o1) & bit(n + o2) over n in [0, p).
// `doubled` holds 2p indicator bits (bit i = membership of i mod p) followed
// by at least 6 zeroed guard words; o1, o2 < p keeps every read in range.
uint64_t count_and3(const uint64_t* doubled, uint32_t p, uint32_t o1, uint32_t o2);

// acc[i] += src[i] for i in [0, n).
void add_u32(uint32_t* acc, const uint32_t* src, size_t n);

// Pointwise complex product out[i] = a[i] * b[i] on interleaved re/im pairs;
// n counts complex elements. out may alias a.
void cmul(const double* a, const double* b, double* out, size_t n);

// Scalar reference implementations, exposed for equivalence tests.
uint64_t count_and3_scalar(const uint64_t* doubled, uint32_t p, uint32_t o1, uint32_t o2);
void add_u32_scalar(uint32_t* acc, const uint32_t* src, size_t n);
void cmul_scalar(const double* a, const double* b, double* out, size_t n);

}  // namespace ap3::kernels
