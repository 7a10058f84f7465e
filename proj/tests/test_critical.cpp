#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ap3/ap_count.hpp"
#include "ap3/ap_run.hpp"
#include "ap3/critical.hpp"
#include "ap3/prime.hpp"
#include "ap3/residue_set.hpp"
#include "ap3/rng.hpp"
#include "oracles.hpp"

using namespace ap3;

namespace {

// Brute-force minimum over all s-subsets of Z/pZ, tracking ties.
struct BruteResult {
    uint64_t min_count = std::numeric_limits<uint64_t>::max();
    uint64_t tie_count = 0;
    std::vector<std::vector<uint32_t>> minimizers;
};

void brute_rec(const PrimeModulus& m, uint32_t s, uint32_t next,
               std::vector<uint32_t>& cur, BruteResult& out) {
    if (cur.size() == s) {
        std::vector<int64_t> members(cur.begin(), cur.end());
        ResidueSet set(m, members);
        uint64_t c = count_3aps(set).total;
        if (c < out.min_count) {
            out.min_count = c;
            out.tie_count = 1;
            out.minimizers.clear();
            out.minimizers.push_back(cur);
        } else if (c == out.min_count) {
            ++out.tie_count;
            out.minimizers.push_back(cur);
        }
        return;
    }
    for (uint32_t n = next; n < m.value(); ++n) {
        cur.push_back(n);
        brute_rec(m, s, n + 1, cur, out);
        cur.pop_back();
    }
}

BruteResult brute_minimum(const PrimeModulus& m, uint32_t s) {
    BruteResult out;
    std::vector<uint32_t> cur;
    brute_rec(m, s, 0, cur, out);
    return out;
}

}  // namespace

TEST_CASE("per-element progression counts tile the total") {
    // Each AP containing x is counted once, so summing over x triples the
    // nontrivial count and adds the trivial one.
    for (uint32_t p : {7u, 13u, 31u}) {
        PrimeModulus m(p);
        Rng rng(p);
        for (int trial = 0; trial < 8; ++trial) {
            ResidueSet S = oracle::random_set(m, 0.2 + 0.1 * (trial % 5), rng);
            Ap3Count c = count_3aps(S);
            uint64_t through_sum = 0;
            for (uint32_t x : S.members())
                through_sum += oracle::count_through(S, x);
            CHECK(through_sum == 3 * c.nontrivial + c.trivial);
        }
    }
}

TEST_CASE("progressions through a new element extend the count incrementally") {
    PrimeModulus m(31);
    Rng rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        ResidueSet S = oracle::random_set(m, 0.4, rng);
        std::vector<uint32_t> outside;
        for (uint32_t n = 0; n < 31; ++n)
            if (!S.contains(n)) outside.push_back(n);
        if (outside.empty()) continue;
        uint32_t x = outside[rng.uniform_u32(static_cast<uint32_t>(outside.size()))];

        std::vector<uint32_t> base = S.members();
        std::vector<int64_t> grown(base.begin(), base.end());
        grown.push_back(x);
        ResidueSet Sx(m, grown);
        CHECK(count_3aps(Sx).total ==
              count_3aps(S).total + oracle::count_through(Sx, x));
    }
}

TEST_CASE("exhaustive search matches a subset enumeration oracle at (7,3)") {
    PrimeModulus m(7);
    BruteResult oracle = brute_minimum(m, 3);
    CriticalSearchResult r = exhaustive_critical(m, 3, 1000);
    CHECK(r.method == "exhaustive");
    CHECK(r.p == 7);
    CHECK(r.s == 3);
    CHECK(r.min_count == oracle.min_count);
    CHECK(r.minimizer_total == oracle.tie_count);
    CHECK(r.min_nontrivial == r.min_count - 3);
    REQUIRE(!r.minimizers.empty());
    CHECK(r.minimizers.size() == r.longest_runs.size());
    for (size_t i = 0; i < r.minimizers.size(); ++i) {
        const ResidueSet& st = r.minimizers[i];
        CHECK(count_3aps(st).total == r.min_count);
        std::vector<uint32_t> mem = st.members();
        CHECK(std::find(oracle.minimizers.begin(), oracle.minimizers.end(), mem) !=
              oracle.minimizers.end());
        ApRun run = r.longest_runs[i];
        CHECK(run_contained(st, run));
        CHECK(run.length == oracle::longest_ap_length(st));
    }
    CHECK(r.stats.nodes_visited > 0);
}

TEST_CASE("exhaustive search refuses infeasible subset spaces") {
    PrimeModulus m(101);
    CHECK_THROWS_AS(exhaustive_critical(m, 50, 1000), std::invalid_argument);
    CHECK_THROWS_AS(exhaustive_critical(m, 0, 1000), std::invalid_argument);
    CHECK_THROWS_AS(exhaustive_critical(m, 102, 1000), std::invalid_argument);
}

TEST_CASE("annealing is seed-deterministic and finds the small-case optimum") {
    PrimeModulus m(11);
    CriticalSearchResult exact = exhaustive_critical(m, 5, 1000);

    AnnealSchedule sched;
    CriticalSearchResult a = anneal_critical(m, 5, sched, 42);
    CriticalSearchResult b = anneal_critical(m, 5, sched, 42);
    CHECK(a.min_count == b.min_count);
    REQUIRE(a.minimizers.size() == 1);
    REQUIRE(b.minimizers.size() == 1);
    CHECK(a.minimizers[0] == b.minimizers[0]);
    CHECK(a.stats.seed == 42);
    CHECK(a.method == "anneal");
    CHECK(a.minimizer_total == 1);

    int hits = 0;
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        CriticalSearchResult r = anneal_critical(m, 5, sched, seed);
        CHECK(r.minimizers[0].size() == 5);
        CHECK(count_3aps(r.minimizers[0]).total == r.min_count);
        CHECK(r.min_count >= exact.min_count);
        if (r.min_count == exact.min_count) ++hits;
    }
    CHECK(hits >= 9);
}

TEST_CASE("subset space size saturates instead of overflowing") {
    CHECK(subset_count_capped(13, 6) == 1716);
    CHECK(subset_count_capped(7, 0) == 1);
    CHECK(subset_count_capped(7, 7) == 1);
    CHECK(subset_count_capped(401, 200) ==
          static_cast<uint64_t>(std::numeric_limits<int64_t>::max()));
}

TEST_CASE("density sweep pins small exhaustive rows") {
    PrimeModulus m(11);
    std::vector<VarnavidesRow> rows = varnavides_estimate(m, {0.2, 0.5}, 0);
    REQUIRE(rows.size() == 2);

    // ceil(0.2 * 11) = 3; {0,1,3} has no nontrivial AP, so min is the 3
    // trivial ones.
    CHECK(rows[0].d == 0.2);
    CHECK(rows[0].s == 3);
    CHECK(rows[0].min_count == 3);
    CHECK(rows[0].min_nontrivial == 0);
    CHECK(rows[0].ratio == doctest::Approx(3.0 / 121.0));
    CHECK(rows[0].method == "exhaustive");

    CHECK(rows[1].d == 0.5);
    CHECK(rows[1].s == 6);
    CHECK(rows[1].method == "exhaustive");
    CriticalSearchResult exact = exhaustive_critical(m, 6, 1);
    CHECK(rows[1].min_count == exact.min_count);

    CHECK_THROWS_AS(varnavides_estimate(m, {0.0}, 0), std::invalid_argument);
    CHECK_THROWS_AS(varnavides_estimate(m, {1.5}, 0), std::invalid_argument);
    CHECK(varnavides_estimate(m, {}, 0).empty());
}
