#pragma once

#include <array>
#include <cstdint>

#include "ap3/residue_set.hpp"

namespace ap3 {

// One ordered triple n, n+m, n+2m mod p. Trivial exactly when m == 0.
struct ApTriple {
    uint32_t n;
    uint32_t m;

    bool trivial() const { return m == 0; }

    std::array<uint32_t, 3> elements(const PrimeModulus& modulus) const {
        uint32_t p = modulus.value();
        uint32_t second = n + m >= p ? n + m - p : n + m;
        uint32_t third = second + m >= p ? second + m - p : second + m;
        return {n, second, third};
    }
};

// An arithmetic progression start, start+step, ..., start+(length-1)*step
// mod p. step is 0 exactly when length <= 1; the empty sentinel is {0,0,0}.
struct ApRun {
    uint32_t start;
    uint32_t step;
    uint32_t length;

    friend bool operator==(const ApRun&, const ApRun&) = default;
};

// True when every element of the run belongs to S.
bool run_contained(const ResidueSet& S, const ApRun& run);

// Longest progression inside S. Steps 1..(p-1)/2 cover everything: a run
// with step s read backwards is a run with step p-s. Ties break to the
// smallest step, then the smallest start. Empty set gives the sentinel.
ApRun longest_ap(const ResidueSet& S);

}  // namespace ap3
