#pragma once

#include <cstdint>
#include <optional>

#include "ap3/ap_run.hpp"
#include "ap3/report.hpp"
#include "ap3/residue_set.hpp"

namespace ap3 {

// {u*b + v mod p : b in B}. u != 0 keeps the map a bijection, so the image
// has the same cardinality and the same nontrivial progression count.
ResidueSet affine_image(const ResidueSet& B, uint32_t u, uint32_t v);

// One accepted draw of C = A ∩ (uB + v).
struct IntersectionSample {
    uint32_t u;
    uint32_t v;
    ResidueSet set;
    double density;
    uint64_t nontrivial_3aps;
    uint32_t draws;
};

// Draws (u, v) uniformly with u in [1, p-1], v in [0, p-1], until the
// sample is both dense enough, |C| >= (1-eps) * gamma*delta*p, and
// progression-poor enough, Q(C) <= ntA * ntB * (1 + 2/sqrt(p)) / p^2,
// where gamma, delta are the densities of A, B and ntA, ntB their
// nontrivial counts. Throws StageError("intersection", ...) when max_draws
// runs out.
IntersectionSample sample_intersection(const ResidueSet& A, const ResidueSet& B, double eps,
                                       uint32_t max_draws, uint64_t seed);

// U is the complement of two intervals of combined measure theta*p placed
// at 0 and p/2: Ubar = [0, theta*p/2] ∪ [p/2, p/2 + theta*p/2] as integer
// residues. Construction checks count(U) <= p^2 (1 - 3 theta + 2.5 theta^2)
// + 10p and count(Ubar).nontrivial >= theta^2 p^2 / 2 - 10p.
struct TwoIntervalSet {
    double theta;
    ResidueSet U;
    ResidueSet Ubar;
};

TwoIntervalSet two_interval_set(PrimeModulus modulus, double theta);

// Knobs of the improvement pipeline. All stochastic stages derive their
// streams from the one seed, so a parameter tuple fixes the output.
struct ImproveParams {
    double threshold;             // large-spectrum cutoff
    double eps;                   // Bohr radius, extraction gap, intersection slack
    uint32_t smoothing_length;    // |N|
    double bound_factor = 1.0;    // rounding acceptance scale
    double concentration_target = 0.9;  // kappa floor is 1 - this
    uint32_t max_draws = 4096;
    uint32_t max_round_attempts = 64;
    uint64_t seed = 0;
};

struct ImproveOutcome {
    ResidueSet result;            // C' (or S itself on the short-circuit paths)
    std::optional<ApRun> extracted;
    std::string verdict;  // already-concentrated | ap-extracted | improved | not-improved
    ExperimentReport report;
};

// The full chain: spectrum split -> Bohr step n0 -> smoothing progression
// N -> convolution -> (short-circuit to AP extraction when some translate
// is (1-eps)-dense) -> weights w = conv / kappa -> rounding -> two-interval
// mask -> affine intersection -> cardinality restore to |S|. kappa =
// max(1 - concentration_target, max convolution). The verdict reports
// whether count(C') < count(S); that inequality is observed, not promised.
ImproveOutcome improve_critical_candidate(const ResidueSet& S, const ImproveParams& params);

}  // namespace ap3
