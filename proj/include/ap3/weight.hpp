#pragma once

#include <vector>

#include "ap3/prime.hpp"
#include "ap3/residue_set.hpp"

namespace ap3 {

// A map m -> w(m) on residues with every value in [0, 1]. Values within a
// hair of the endpoints (floating-point residue from normalization) are
// clamped; anything further out is rejected.
class WeightFunction {
public:
    WeightFunction(PrimeModulus modulus, std::vector<double> values);

    static WeightFunction indicator(const ResidueSet& set);

    const PrimeModulus& modulus() const { return modulus_; }
    uint32_t p() const { return modulus_.value(); }
    const std::vector<double>& values() const { return values_; }
    double operator[](uint32_t m) const { return values_[m]; }

    // Sum of all values (the transform's value at frequency 0).
    double sum() const;

private:
    PrimeModulus modulus_;
    std::vector<double> values_;
};

}  // namespace ap3
