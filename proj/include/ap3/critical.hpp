#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ap3/ap_run.hpp"
#include "ap3/residue_set.hpp"

namespace ap3 {

struct SearchStats {
    uint64_t nodes_visited;   // element insertions (exhaustive) or proposals (anneal)
    uint64_t moves_accepted;  // anneal only
    uint64_t seed;            // anneal only
};

// Outcome of one search. minimizers holds at most `cap` optimal sets in
// lexicographic member order; minimizer_total is the exact number of
// optima for the exhaustive method and 1 for anneal (best found, with no
// uniqueness claim). Every reported set is re-verified against the exact
// counter before it is returned.
struct CriticalSearchResult {
    uint32_t p;
    uint32_t s;
    uint64_t min_count;
    uint64_t min_nontrivial;
    uint64_t minimizer_total;
    std::vector<ResidueSet> minimizers;
    std::vector<ApRun> longest_runs;
    std::string method;
    SearchStats stats;
};

// Exact minimum over all s-subsets by depth-first enumeration with an
// incremental count update per inserted element. Guarded by
// C(p, s) <= 10^8; beyond that the error message points at anneal_critical.
CriticalSearchResult exhaustive_critical(PrimeModulus modulus, uint32_t s, uint32_t cap = 1000);

// Geometric cooling: temperature t0 * cooling^k at step k.
struct AnnealSchedule {
    uint64_t steps = 20000;
    double t0 = 2.0;
    double cooling = 0.9995;
};

// Simulated annealing over s-subsets with single-swap moves and exact
// integer energies maintained incrementally (full recount spot-check every
// 1000 proposals). Deterministic per seed; steps = 0 returns the seeded
// initial subset.
CriticalSearchResult anneal_critical(PrimeModulus modulus, uint32_t s,
                                     const AnnealSchedule& schedule, uint64_t seed);

// Number of s-subsets of [0, p), saturated at 2^63-1 to keep the guard
// comparison overflow-free.
uint64_t subset_count_capped(uint32_t p, uint32_t s);

struct VarnavidesRow {
    double d;
    uint32_t s;
    uint64_t min_count;
    uint64_t min_nontrivial;
    double ratio;  // min_count / p^2
    std::string method;
};

// Minimum progression count at cardinality ceil(d*p) for each grid density,
// by exhaustion where the subset space is small enough and annealing
// (seeded per row) elsewhere.
std::vector<VarnavidesRow> varnavides_estimate(PrimeModulus modulus,
                                               const std::vector<double>& d_grid,
                                               uint64_t seed);

}  // namespace ap3
