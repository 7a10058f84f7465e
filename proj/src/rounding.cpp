#include "ap3/rounding.hpp"

#include <cmath>
#include <stdexcept>

#include "ap3/errors.hpp"
#include "ap3/fourier.hpp"
#include "ap3/rng.hpp"

namespace ap3 {

double hoeffding_bound(uint64_t r, double t) {
    if (r < 1 || !(t > 0.0))
        throw std::invalid_argument("hoeffding_bound: needs r >= 1 and t > 0");
    return 4.0 * std::exp(-static_cast<double>(r) * t * t / 2.0);
}

namespace {

double max_deviation(const Spectrum& a, const Spectrum& b) {
    double worst = 0.0;
    for (uint32_t i = 0; i < a.p(); ++i)
        worst = std::max(worst, std::abs(a.coeffs[i] - b.coeffs[i]));
    return worst;
}

}  // namespace

RoundingResult round_weights(const WeightFunction& w, uint64_t seed, double bound_factor,
                             uint32_t max_attempts) {
    if (!(bound_factor > 0.0))
        throw std::invalid_argument("round_weights: bound_factor must be positive");
    if (max_attempts == 0)
        throw std::invalid_argument("round_weights: max_attempts must be positive");
    uint32_t p = w.p();
    double logp = std::log(static_cast<double>(p));
    double bound = bound_factor * logp * std::sqrt(static_cast<double>(p));
    Spectrum target = dft(w);
    double mass = w.sum();
    double delta = std::ceil(mass) - mass;

    for (uint32_t attempt = 0; attempt < max_attempts; ++attempt) {
        Rng rng(derive_seed(seed, attempt));
        std::vector<int64_t> picked;
        for (uint32_t m = 0; m < p; ++m)
            if (rng.uniform_double() < w[m])
                picked.push_back(m);
        ResidueSet sample(w.modulus(), picked);
        double deviation = max_deviation(dft(sample), target);
        if (deviation < bound) {
            return {std::move(sample),
                    RoundingCertificate{deviation, bound, attempt + 1, seed, delta}};
        }
    }
    throw StageError("rounding", "no sample met the spectral bound within " +
                                     std::to_string(max_attempts) +
                                     " attempts; raise bound_factor");
}

ResidueSet adjust_cardinality(const ResidueSet& S, uint32_t target, uint64_t seed) {
    uint32_t p = S.p();
    if (target > p)
        throw std::invalid_argument("adjust_cardinality: target exceeds p");
    uint32_t size = S.size();
    uint64_t flips = size > target ? size - target : target - size;
    double cap_d = 4.0 * std::ceil(std::log(static_cast<double>(p)) *
                                   std::sqrt(static_cast<double>(p)));
    if (static_cast<double>(flips) > cap_d)
        throw StageError("adjust-cardinality",
                         "requested " + std::to_string(flips) + " flips, above the repair cap " +
                             std::to_string(static_cast<uint64_t>(cap_d)));
    if (flips == 0)
        return S;

    std::vector<uint32_t> eligible =
        size > target ? S.members() : S.complement().members();
    // Partial Fisher-Yates: the first `flips` slots end up a uniform sample.
    Rng rng(seed);
    for (uint64_t i = 0; i < flips; ++i) {
        uint32_t j = static_cast<uint32_t>(i) +
                     rng.uniform_u32(static_cast<uint32_t>(eligible.size() - i));
        std::swap(eligible[i], eligible[j]);
    }

    std::vector<int64_t> members;
    members.reserve(target);
    if (size > target) {
        std::vector<bool> removed(p, false);
        for (uint64_t i = 0; i < flips; ++i)
            removed[eligible[i]] = true;
        for (uint32_t n : S.members())
            if (!removed[n])
                members.push_back(n);
    } else {
        for (uint32_t n : S.members())
            members.push_back(n);
        for (uint64_t i = 0; i < flips; ++i)
            members.push_back(eligible[i]);
    }
    return ResidueSet(S.modulus(), members);
}

}  // namespace ap3
