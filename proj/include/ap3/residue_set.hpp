#pragma once

#include <cstdint>
#include <vector>

#include "ap3/prime.hpp"

namespace ap3 {

// A subset of Z/pZ stored as a packed bit-vector, 64 residues per word.
// Immutable after construction; cardinality is cached.
class ResidueSet {
public:
    explicit ResidueSet(PrimeModulus modulus)
        : modulus_(modulus), words_((modulus.value() + 63) / 64, 0), cardinality_(0) {}

    ResidueSet(PrimeModulus modulus, const std::vector<int64_t>& members);

    const PrimeModulus& modulus() const { return modulus_; }
    uint32_t p() const { return modulus_.value(); }
    uint32_t size() const { return cardinality_; }
    bool empty() const { return cardinality_ == 0; }
    double density() const { return static_cast<double>(cardinality_) / p(); }

    bool contains(uint32_t n) const { return (words_[n >> 6] >> (n & 63)) & 1; }

    // Members in ascending order.
    std::vector<uint32_t> members() const;

    ResidueSet complement() const;

    // Raw words for bit-parallel kernels. Bits at positions >= p are zero.
    const std::vector<uint64_t>& words() const { return words_; }

    friend bool operator==(const ResidueSet& a, const ResidueSet& b) {
        return a.modulus_ == b.modulus_ && a.words_ == b.words_;
    }

    // Named constructors for the degenerate endpoints.
    static ResidueSet full(PrimeModulus modulus);

private:
    void set_bit(uint32_t n) { words_[n >> 6] |= uint64_t{1} << (n & 63); }

    PrimeModulus modulus_;
    std::vector<uint64_t> words_;
    uint32_t cardinality_;
};

// Canonical construction: members are reduced mod p, duplicates collapse.
ResidueSet make_residue_set(PrimeModulus modulus, const std::vector<int64_t>& members);

// Uniform random subset of the given cardinality, a pure function of seed.
ResidueSet random_residue_set(PrimeModulus modulus, uint32_t cardinality, uint64_t seed);

}  // namespace ap3
