#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ap3/bohr.hpp"
#include "ap3/fourier.hpp"
#include "ap3/residue_set.hpp"
#include "ap3/rng.hpp"
#include "oracles.hpp"

using namespace ap3;

TEST_CASE("bohr search validation") {
    PrimeModulus m(13);
    CHECK_THROWS_AS(bohr_element({m, {1}, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(bohr_element({m, {1}, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(bohr_element({m, {1}, -0.1}), std::invalid_argument);
    CHECK_THROWS_AS(bohr_element({m, {13}, 0.1}), std::invalid_argument);
}

TEST_CASE("bohr search on pinned instances") {
    PrimeModulus m(13);
    // No frequencies: every residue qualifies, the smallest is 1.
    CHECK(bohr_element({m, {}, 0.1}) == 1u);
    // freq 1: ||n/13|| < 0.2 first holds at n = 1.
    CHECK(bohr_element({m, {1}, 0.2}) == 1u);
    // freq 5: 5n mod 13 walks 5,10,2,7,12,...; n = 5 is the first with
    // distance 1/13 and nothing earlier gets below 2/13.
    CHECK(bohr_element({m, {5}, 0.1}) == 5u);
    // Radius below 1/13 leaves the neighborhood empty.
    CHECK(!bohr_element({m, {5}, 0.05}).has_value());
}

TEST_CASE("membership test is exact against bit-level rational arithmetic") {
    Rng rng(17);
    for (uint32_t p : {5u, 13u, 101u, 1009u}) {
        for (int trial = 0; trial < 200; ++trial) {
            uint32_t a = rng.uniform_u32(p);
            uint32_t n = 1 + rng.uniform_u32(p - 1);
            double eps = rng.uniform_double() * 0.499999 + 1e-12;
            CHECK(within_bohr_radius(a, n, p, eps) == oracle::in_bohr(a, n, p, eps));
        }
    }
    // Boundary: at p = 5, a = 1, n = 1 the distance is exactly 1/5; the
    // comparison against eps = fl(0.2) (slightly above 1/5) must pass and
    // the next double down must fail.
    double above = 0.2;
    double below = std::nextafter(0.2, 0.0);
    CHECK(within_bohr_radius(1, 1, 5, above) == oracle::in_bohr(1, 1, 5, above));
    CHECK(within_bohr_radius(1, 1, 5, below) == oracle::in_bohr(1, 1, 5, below));
    CHECK(within_bohr_radius(1, 1, 5, above));
    CHECK(!within_bohr_radius(1, 1, 5, below));
}

TEST_CASE("returned witness is minimal and verified") {
    Rng rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        uint32_t p = (trial % 2 == 0) ? 101 : 499;
        PrimeModulus m(p);
        std::vector<uint32_t> freqs = {1 + rng.uniform_u32(p - 1), 1 + rng.uniform_u32(p - 1)};
        double eps = 0.05 + rng.uniform_double() * 0.4;
        auto hit = bohr_element({m, freqs, eps});
        // Exhaustive reference scan.
        std::optional<uint32_t> expect;
        for (uint32_t n = 1; n < p && !expect; ++n) {
            bool ok = true;
            for (uint32_t a : freqs)
                ok = ok && oracle::in_bohr(a, n, p, eps);
            if (ok)
                expect = n;
        }
        CHECK(hit == expect);
    }
}

TEST_CASE("smoothing progression construction") {
    PrimeModulus m(11);
    SmoothingProgression N = make_progression(m, 3, 5);
    CHECK(N.elements == std::vector<uint32_t>{0, 3, 6, 9, 1});
    CHECK(N.n0 == 3);
    CHECK(N.length == 5);
    CHECK_THROWS_AS(make_progression(m, 0, 4), std::invalid_argument);
    CHECK_THROWS_AS(make_progression(m, 11, 4), std::invalid_argument);
    CHECK_THROWS_AS(make_progression(m, 3, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_progression(m, 3, 12), std::invalid_argument);
}

TEST_CASE("smoothing parameter shapes") {
    SmoothingParams sp = derive_smoothing_params(1009, 1.0);
    double logp = std::log(1009.0);
    CHECK(sp.length == static_cast<uint32_t>(std::ceil(logp)));
    CHECK(sp.eps == doctest::Approx(1.0 / (logp * logp)).epsilon(1e-12));
    SmoothingParams sp2 = derive_smoothing_params(1009, 2.0, 2.0);
    double l2 = std::log2(1009.0);
    CHECK(sp2.length == static_cast<uint32_t>(std::ceil(l2 * l2)));
}

TEST_CASE("convolution fixture") {
    PrimeModulus m(7);
    ResidueSet S(m, {0, 1, 2});
    SmoothingProgression N = make_progression(m, 1, 2);
    WeightFunction conv = convolve(S, N);
    // w(m) = |S ∩ {m, m-1}| / 2; total mass stays |S|.
    std::vector<double> expect = {0.5, 1.0, 1.0, 0.5, 0.0, 0.0, 0.0};
    for (uint32_t i = 0; i < 7; ++i)
        CHECK(conv[i] == expect[i]);
    CHECK(conv.sum() == doctest::Approx(3.0));
}

TEST_CASE("direct and spectral convolution agree") {
    Rng rng(29);
    for (uint32_t p : {13u, 101u, 257u}) {
        PrimeModulus m(p);
        ResidueSet S = oracle::random_set(m, 0.45, rng);
        uint32_t n0 = 1 + rng.uniform_u32(p - 1);
        SmoothingProgression N = make_progression(m, n0, 1 + rng.uniform_u32(p / 2));
        WeightFunction a = convolve(S, N, ConvolvePath::direct);
        WeightFunction b = convolve(S, N, ConvolvePath::spectral);
        double mass = 0.0;
        for (uint32_t i = 0; i < p; ++i) {
            CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9));
            CHECK(a[i] >= 0.0);
            CHECK(a[i] <= 1.0);
            mass += a[i];
        }
        CHECK(mass == doctest::Approx(static_cast<double>(S.size())).epsilon(1e-12));
    }
}

TEST_CASE("extraction returns the dense block as an ascending run") {
    PrimeModulus m(31);
    // Translate window at m = 20 with step 4: 20, 16, 12, 8, 4, 0.
    // Knock out j = 4 (residue 4): hits 1,1,1,1,0,1; the longest block is
    // j = 0..3, so the run ascends 8, 12, 16, 20.
    ResidueSet S(m, {20, 16, 12, 8, 0, 25});
    SmoothingProgression N = make_progression(m, 4, 6);
    ApRun run = extract_ap_from_convolution(S, N, 20, 0.4);
    CHECK(run == ApRun{8, 4, 4});
    CHECK(run_contained(S, run));

    // Density at this m is 5/6; eps below 1/6 makes the precondition fail.
    CHECK_THROWS_AS(extract_ap_from_convolution(S, N, 20, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(extract_ap_from_convolution(S, N, 20, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(extract_ap_from_convolution(S, N, 31, 0.4), std::invalid_argument);
}

TEST_CASE("extraction guarantee on the integral grid") {
    // With eps * |N| integral and (S*N)(m) > 1 - eps, the longest block
    // has length >= ceil(1/eps) - 1.
    Rng rng(37);
    PrimeModulus m(211);
    for (int trial = 0; trial < 100; ++trial) {
        uint32_t L = 6 + rng.uniform_u32(20);             // |N|
        uint32_t t = 2 + rng.uniform_u32((L - 1) / 2 - 1);  // eps = t/L < 1/2
        double eps = static_cast<double>(t) / static_cast<double>(L);
        uint32_t n0 = 1 + rng.uniform_u32(210);
        uint32_t mm = rng.uniform_u32(211);
        // Hit pattern with exactly L - t + 1 hits.
        std::vector<int> hits(L, 1);
        for (uint32_t knocked = 0; knocked < t - 1;) {
            uint32_t j = rng.uniform_u32(L);
            if (hits[j]) {
                hits[j] = 0;
                ++knocked;
            }
        }
        std::vector<int64_t> members;
        uint32_t pos = mm;
        for (uint32_t j = 0; j < L; ++j) {
            if (hits[j])
                members.push_back(pos);
            pos = pos >= n0 ? pos - n0 : pos + 211 - n0;
        }
        ResidueSet S(m, members);
        SmoothingProgression N = make_progression(m, n0, L);
        ApRun run = extract_ap_from_convolution(S, N, mm, eps);
        CHECK(run_contained(S, run));
        uint32_t promised = (L + t - 1) / t - 1;  // ceil(1/eps) - 1
        CHECK(run.length >= promised);
        CHECK(run.length == oracle::longest_true_block(hits));
        if (run.length > 1)
            CHECK(run.step == n0);
    }
}

TEST_CASE("flatness matches a direct recomputation and its cap") {
    PrimeModulus m(101);
    SmoothingProgression N = make_progression(m, 7, 5);
    std::vector<uint32_t> freqs = {1, 13, 44};
    double flat = spectrum_flatness(N, freqs);

    std::vector<long double> nvals(101, 0.0L);
    for (uint32_t n : N.elements)
        nvals[n] = 1.0L / 5.0L;
    auto F = oracle::dft(nvals, 101);
    long double worst = 0.0L;
    for (uint32_t a : freqs) {
        uint32_t minus2a = static_cast<uint32_t>((2ull * (101 - a)) % 101);
        worst = std::max(worst, std::abs(F[a] - 1.0L));
        worst = std::max(worst, std::abs(F[minus2a] - 1.0L));
    }
    CHECK(flat == doctest::Approx(static_cast<double>(worst)).epsilon(1e-10));
    CHECK(spectrum_flatness(N, {}) == 0.0);
    CHECK(spectrum_flatness(N, {0}) == doctest::Approx(0.0));
}

TEST_CASE("flatness obeys the Bohr radius cap") {
    // n0 chosen inside the Bohr neighborhood of the frequency list keeps
    // every listed coefficient within 2 pi |N| eps of 1.
    PrimeModulus m(1091);
    Rng rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<uint32_t> freqs = {1 + rng.uniform_u32(1090), 1 + rng.uniform_u32(1090)};
        uint32_t L = 4 + rng.uniform_u32(5);
        double eps = 1.0 / (4.0 * L + 1.0);
        auto n0 = bohr_element({m, freqs, eps});
        if (!n0)
            continue;  // pigeonhole guarantee needs ceil(1/eps)^2 < p
        SmoothingProgression N = make_progression(m, *n0, L);
        CHECK(spectrum_flatness(N, freqs) <=
              2.0 * 3.14159265358979323846 * static_cast<double>(L) * eps + 1e-12);
    }
}
