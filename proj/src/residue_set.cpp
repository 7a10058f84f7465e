#include "ap3/residue_set.hpp"

#include <bit>
#include <numeric>
#include <stdexcept>

#include "ap3/rng.hpp"

namespace ap3 {

ResidueSet::ResidueSet(PrimeModulus modulus, const std::vector<int64_t>& members)
    : ResidueSet(modulus) {
    for (int64_t m : members)
        set_bit(modulus_.reduce(m));
    uint32_t count = 0;
    for (uint64_t w : words_)
        count += std::popcount(w);
    cardinality_ = count;
}

std::vector<uint32_t> ResidueSet::members() const {
    std::vector<uint32_t> out;
    out.reserve(cardinality_);
    for (uint32_t n = 0; n < p(); ++n)
        if (contains(n))
            out.push_back(n);
    return out;
}

ResidueSet ResidueSet::complement() const {
    ResidueSet out(modulus_);
    for (size_t i = 0; i < words_.size(); ++i)
        out.words_[i] = ~words_[i];
    // Clear the padding bits above p in the last word.
    uint32_t tail = p() & 63;
    if (tail != 0)
        out.words_.back() &= (uint64_t{1} << tail) - 1;
    out.cardinality_ = p() - cardinality_;
    return out;
}

ResidueSet ResidueSet::full(PrimeModulus modulus) {
    return ResidueSet(modulus).complement();
}

ResidueSet make_residue_set(PrimeModulus modulus, const std::vector<int64_t>& members) {
    return ResidueSet(modulus, members);
}

ResidueSet random_residue_set(PrimeModulus modulus, uint32_t cardinality, uint64_t seed) {
    uint32_t p = modulus.value();
    if (cardinality > p)
        throw std::invalid_argument("random_residue_set: cardinality exceeds p");
    std::vector<uint32_t> perm(p);
    std::iota(perm.begin(), perm.end(), 0u);
    Rng rng(seed);
    std::vector<int64_t> members;
    members.reserve(cardinality);
    for (uint32_t i = 0; i < cardinality; ++i) {
        uint32_t j = i + rng.uniform_u32(p - i);
        std::swap(perm[i], perm[j]);
        members.push_back(perm[i]);
    }
    return ResidueSet(modulus, members);
}

}  // namespace ap3
