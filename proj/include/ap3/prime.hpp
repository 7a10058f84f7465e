#pragma once

#include <cstdint>
#include <stdexcept>

namespace ap3 {

// Modular helpers over 64-bit residues. Products go through __int128 so any
// modulus below 2^63 is safe.
inline uint64_t mod_mul(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

inline uint64_t mod_pow(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1)
            result = mod_mul(result, base, m);
        exp >>= 1;
        base = mod_mul(base, base, m);
    }
    return result;
}

// Inverse of a modulo prime p (Fermat). a must not be 0 mod p.
inline uint64_t mod_inverse(uint64_t a, uint64_t p) {
    a %= p;
    if (a == 0)
        throw std::invalid_argument("mod_inverse: zero has no inverse");
    return mod_pow(a, p - 2, p);
}

// Deterministic Miller-Rabin. The fixed witness set decides primality
// exactly for all n < 3.3e24, far beyond anything this library handles.
bool is_prime_u64(uint64_t n);

// The ambient modulus. Construction validates primality once; everything
// downstream relies on p being an odd prime >= 5 (so 2 and 3 are invertible).
class PrimeModulus {
public:
    explicit PrimeModulus(uint32_t p) : p_(p) {
        if (p < 5 || !is_prime_u64(p))
            throw std::invalid_argument("PrimeModulus: p must be a prime >= 5");
    }

    uint32_t value() const { return p_; }
    uint32_t half_inverse() const { return (p_ + 1) / 2; }  // 2^-1 mod p

    uint32_t reduce(int64_t x) const {
        int64_t r = x % static_cast<int64_t>(p_);
        if (r < 0)
            r += p_;
        return static_cast<uint32_t>(r);
    }

    friend bool operator==(const PrimeModulus&, const PrimeModulus&) = default;

private:
    uint32_t p_;
};

}  // namespace ap3
