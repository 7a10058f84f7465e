#include "ap3/critical.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ap3/ap_count.hpp"
#include "ap3/rng.hpp"

namespace ap3 {

namespace {

// Progressions through x inside T ∪ {x}, with `in` the byte indicator of T
// and in[x] already set to 1 by the caller. Sums the three positions x can
// occupy; the m = 0 triple appears in all three sums, hence the -2.
uint64_t progressions_through(const uint8_t* in, uint32_t p, uint32_t x) {
    uint64_t a = 0, b = 0, c = 0;
    uint32_t f1 = x, f2 = x;  // x + m, x + 2m
    uint32_t b1 = x, b2 = x;  // x - m, x - 2m
    for (uint32_t m = 0; m < p; ++m) {
        a += in[f1] & in[f2];
        b += in[b1] & in[f1];
        c += in[b2] & in[b1];
        ++f1;
        if (f1 == p)
            f1 = 0;
        f2 += 2;
        if (f2 >= p)
            f2 -= p;
        b1 = b1 == 0 ? p - 1 : b1 - 1;
        b2 = b2 < 2 ? b2 + p - 2 : b2 - 2;
    }
    return a + b + c - 2;
}

ResidueSet set_from_members(PrimeModulus modulus, const std::vector<uint32_t>& members) {
    std::vector<int64_t> m(members.begin(), members.end());
    return ResidueSet(modulus, m);
}

void verify_result(const CriticalSearchResult& r, PrimeModulus modulus) {
    for (const ResidueSet& s : r.minimizers) {
        if (s.size() != r.s)
            throw std::logic_error("critical search: reported set has wrong cardinality");
        Ap3Count c = count_3aps(s);
        if (c.total != r.min_count || c.nontrivial != r.min_nontrivial)
            throw std::logic_error("critical search: reported count fails re-verification");
        (void)modulus;
    }
}

struct DfsState {
    uint32_t p;
    uint32_t s;
    uint32_t cap;
    std::vector<uint8_t> in;
    std::vector<uint32_t> chosen;
    uint64_t cur = 0;
    uint64_t best = UINT64_MAX;
    uint64_t best_total = 0;
    std::vector<std::vector<uint32_t>> best_sets;
    uint64_t nodes = 0;

    void dfs(uint32_t next, uint32_t remaining) {
        if (remaining == 0) {
            if (cur < best) {
                best = cur;
                best_total = 1;
                best_sets.clear();
                best_sets.push_back(chosen);
            } else if (cur == best) {
                ++best_total;
                if (best_sets.size() < cap)
                    best_sets.push_back(chosen);
            }
            return;
        }
        for (uint32_t cand = next; cand + remaining <= p; ++cand) {
            in[cand] = 1;
            uint64_t delta = progressions_through(in.data(), p, cand);
            cur += delta;
            chosen.push_back(cand);
            ++nodes;
            // Each future insertion contributes at least its own trivial
            // progression, so cur + (remaining - 1) lower-bounds the leaf.
            if (cur + (remaining - 1) <= best)
                dfs(cand + 1, remaining - 1);
            chosen.pop_back();
            cur -= delta;
            in[cand] = 0;
        }
    }
};

}  // namespace

uint64_t subset_count_capped(uint32_t p, uint32_t s) {
    if (s > p)
        return 0;
    long double acc = 1.0L;
    const long double cap = 9.22e18L;
    for (uint32_t i = 1; i <= s; ++i) {
        acc = acc * static_cast<long double>(p - s + i) / static_cast<long double>(i);
        if (acc > cap)
            return INT64_MAX;
    }
    return static_cast<uint64_t>(acc + 0.5L);
}

CriticalSearchResult exhaustive_critical(PrimeModulus modulus, uint32_t s, uint32_t cap) {
    uint32_t p = modulus.value();
    if (s < 1 || s > p)
        throw std::invalid_argument("exhaustive_critical: s must lie in [1, p]");
    if (subset_count_capped(p, s) > 100000000ull)
        throw std::invalid_argument(
            "exhaustive_critical: subset space exceeds the 10^8 guard; use anneal_critical");

    DfsState st;
    st.p = p;
    st.s = s;
    st.cap = cap;
    st.in.assign(p, 0);
    st.dfs(0, s);

    CriticalSearchResult r;
    r.p = p;
    r.s = s;
    r.min_count = st.best;
    r.min_nontrivial = st.best - s;  // the s trivial progressions are always present
    r.minimizer_total = st.best_total;
    for (const auto& members : st.best_sets)
        r.minimizers.push_back(set_from_members(modulus, members));
    for (const ResidueSet& m : r.minimizers)
        r.longest_runs.push_back(longest_ap(m));
    r.method = "exhaustive";
    r.stats = {st.nodes, 0, 0};
    verify_result(r, modulus);
    return r;
}

CriticalSearchResult anneal_critical(PrimeModulus modulus, uint32_t s,
                                     const AnnealSchedule& schedule, uint64_t seed) {
    uint32_t p = modulus.value();
    if (s < 1 || s > p)
        throw std::invalid_argument("anneal_critical: s must lie in [1, p]");

    // Seeded uniform initial subset.
    Rng init_rng(derive_seed(seed, 0));
    std::vector<uint32_t> perm(p);
    std::iota(perm.begin(), perm.end(), 0u);
    for (uint32_t i = 0; i < s; ++i) {
        uint32_t j = i + init_rng.uniform_u32(p - i);
        std::swap(perm[i], perm[j]);
    }
    std::vector<uint32_t> mem(perm.begin(), perm.begin() + s);
    std::vector<uint32_t> non(perm.begin() + s, perm.end());
    std::vector<uint8_t> in(p, 0);
    uint64_t cur = 0;
    for (uint32_t x : mem) {
        in[x] = 1;
        cur += progressions_through(in.data(), p, x);
    }

    uint64_t best = cur;
    std::vector<uint32_t> best_mem = mem;
    Rng rng(derive_seed(seed, 1));
    double temp = schedule.t0;
    uint64_t accepted = 0;

    for (uint64_t step = 0; step < schedule.steps; ++step) {
        if (s < p) {
            uint32_t i = rng.uniform_u32(s);
            uint32_t j = rng.uniform_u32(p - s);
            uint32_t x = mem[i], y = non[j];
            uint64_t d_rem = progressions_through(in.data(), p, x);
            in[x] = 0;
            in[y] = 1;
            uint64_t d_add = progressions_through(in.data(), p, y);
            int64_t delta = static_cast<int64_t>(d_add) - static_cast<int64_t>(d_rem);
            bool accept =
                delta <= 0 ||
                (temp > 0.0 &&
                 rng.uniform_double() < std::exp(-static_cast<double>(delta) / temp));
            if (accept) {
                cur = cur - d_rem + d_add;
                mem[i] = y;
                non[j] = x;
                ++accepted;
                if (cur < best) {
                    best = cur;
                    best_mem = mem;
                }
            } else {
                in[y] = 0;
                in[x] = 1;
            }
        }
        temp *= schedule.cooling;
        if ((step + 1) % 1000 == 0) {
            // Exact bookkeeping check against a full recount.
            ResidueSet now = set_from_members(modulus, mem);
            if (count_3aps(now).total != cur)
                throw std::logic_error("anneal_critical: incremental count drifted");
        }
    }

    CriticalSearchResult r;
    r.p = p;
    r.s = s;
    r.min_count = best;
    r.min_nontrivial = best - s;
    r.minimizer_total = 1;
    r.minimizers.push_back(set_from_members(modulus, best_mem));
    r.longest_runs.push_back(longest_ap(r.minimizers.front()));
    r.method = "anneal";
    r.stats = {schedule.steps, accepted, seed};
    verify_result(r, modulus);
    return r;
}

std::vector<VarnavidesRow> varnavides_estimate(PrimeModulus modulus,
                                               const std::vector<double>& d_grid,
                                               uint64_t seed) {
    uint32_t p = modulus.value();
    std::vector<VarnavidesRow> rows;
    uint64_t index = 0;
    for (double d : d_grid) {
        if (!(d > 0.0) || d > 1.0)
            throw std::invalid_argument("varnavides_estimate: densities must lie in (0, 1]");
        auto s = static_cast<uint32_t>(std::ceil(d * static_cast<double>(p) - 1e-9));
        if (s == 0)
            s = 1;
        CriticalSearchResult res =
            subset_count_capped(p, s) <= 1000000ull
                ? exhaustive_critical(modulus, s, 1)
                : anneal_critical(modulus, s, AnnealSchedule{}, derive_seed(seed, index));
        rows.push_back(VarnavidesRow{
            d, s, res.min_count, res.min_nontrivial,
            static_cast<double>(res.min_count) /
                (static_cast<double>(p) * static_cast<double>(p)),
            res.method});
        ++index;
    }
    return rows;
}

}  // namespace ap3
