#pragma once

#include <cstdint>

#include "ap3/report.hpp"
#include "ap3/residue_set.hpp"

namespace ap3 {

// Observation run: spectrum split, Bohr step, smoothing progression,
// convolution profile, and the longest progression of S itself. Unlike the
// improvement pipeline this never modifies S.
struct TheoremExperimentConfig {
    double threshold = 0.0;      // <= 0 picks the reference threshold shape
    double eps = 0.1;            // Bohr radius and extraction gap
    uint32_t smoothing_length = 8;
    uint32_t compare_random = 0;  // longest-AP baseline sample count
    uint64_t seed = 0;            // drives the baseline samples
};

ExperimentReport run_theorem_experiment(const ResidueSet& S,
                                        const TheoremExperimentConfig& config);

}  // namespace ap3
