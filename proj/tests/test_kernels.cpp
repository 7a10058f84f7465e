#include <doctest.h>

#include <cstring>
#include <vector>

#include "ap3/ap_count.hpp"
#include "ap3/kernels.hpp"
#include "ap3/residue_set.hpp"
#include "ap3/rng.hpp"
#include "oracles.hpp"

using namespace ap3;
namespace k = ap3::kernels;

namespace {

// Restores the dispatch state a test pinned.
struct BackendGuard {
    k::Backend saved = k::active_backend();
    ~BackendGuard() { k::force_backend(saved); }
};

uint64_t count_and3_naive(const ResidueSet& S, uint32_t o1, uint32_t o2) {
    uint64_t p = S.p();
    uint64_t count = 0;
    for (uint64_t n = 0; n < p; ++n)
        count += S.contains(static_cast<uint32_t>(n)) &&
                 S.contains(static_cast<uint32_t>((n + o1) % p)) &&
                 S.contains(static_cast<uint32_t>((n + o2) % p));
    return count;
}

}  // namespace

TEST_CASE("backend names and dispatch state") {
    CHECK(k::backend_name(k::Backend::scalar) == "scalar");
    CHECK(k::backend_name(k::Backend::avx2) == "avx2");
    BackendGuard guard;
    k::force_backend(k::Backend::scalar);
    CHECK(k::active_backend() == k::Backend::scalar);
    if (k::avx2_supported()) {
        k::force_backend(k::Backend::avx2);
        CHECK(k::active_backend() == k::Backend::avx2);
    }
}

TEST_CASE("triple-AND popcount matches a membership loop") {
    Rng rng(2024);
    for (uint32_t p : {5u, 31u, 61u, 67u, 127u, 257u, 641u}) {
        PrimeModulus m(p);
        ResidueSet S = oracle::random_set(m, 0.5, rng);
        std::vector<uint64_t> doubled = doubled_indicator_bits(S);
        for (int trial = 0; trial < 8; ++trial) {
            uint32_t o1 = rng.uniform_u32(p);
            uint32_t o2 = rng.uniform_u32(p);
            uint64_t expect = count_and3_naive(S, o1, o2);
            CHECK(k::count_and3_scalar(doubled.data(), p, o1, o2) == expect);
            CHECK(k::count_and3(doubled.data(), p, o1, o2) == expect);
        }
        // Edge offsets: 0 and p-1 exercise the shift boundaries.
        for (auto [o1, o2] : {std::pair{0u, 0u}, {0u, p - 1}, {p - 1, p - 1}, {1u, 2u}}) {
            uint64_t expect = count_and3_naive(S, o1, o2);
            CHECK(k::count_and3_scalar(doubled.data(), p, o1, o2) == expect);
        }
    }
}

TEST_CASE("scalar and vector backends agree bit for bit") {
    if (!k::avx2_supported())
        return;
    Rng rng(77);

    SUBCASE("count_and3") {
        for (uint32_t p : {67u, 127u, 257u, 1009u, 4099u}) {
            PrimeModulus m(p);
            ResidueSet S = oracle::random_set(m, 0.47, rng);
            std::vector<uint64_t> doubled = doubled_indicator_bits(S);
            BackendGuard guard;
            for (int trial = 0; trial < 16; ++trial) {
                uint32_t o1 = rng.uniform_u32(p);
                uint32_t o2 = rng.uniform_u32(p);
                uint64_t scalar = k::count_and3_scalar(doubled.data(), p, o1, o2);
                k::force_backend(k::Backend::avx2);
                CHECK(k::count_and3(doubled.data(), p, o1, o2) == scalar);
            }
        }
    }

    SUBCASE("add_u32") {
        for (size_t n : {0ull, 1ull, 7ull, 8ull, 33ull, 1000ull}) {
            std::vector<uint32_t> base(n), src(n);
            for (size_t i = 0; i < n; ++i) {
                base[i] = static_cast<uint32_t>(rng.next_u64());
                src[i] = static_cast<uint32_t>(rng.next_u64());
            }
            std::vector<uint32_t> a = base, b = base;
            k::add_u32_scalar(a.data(), src.data(), n);
            BackendGuard guard;
            k::force_backend(k::Backend::avx2);
            k::add_u32(b.data(), src.data(), n);
            CHECK(a == b);
            for (size_t i = 0; i < n; ++i)
                CHECK(a[i] == base[i] + src[i]);
        }
    }

    SUBCASE("cmul is bit-identical, including the odd tail") {
        for (size_t n : {0ull, 1ull, 2ull, 3ull, 17ull, 256ull, 1001ull}) {
            std::vector<double> a(2 * n), b(2 * n), out_s(2 * n), out_v(2 * n);
            for (size_t i = 0; i < 2 * n; ++i) {
                a[i] = rng.uniform_double() * 2.0 - 1.0;
                b[i] = rng.uniform_double() * 2.0 - 1.0;
            }
            k::cmul_scalar(a.data(), b.data(), out_s.data(), n);
            BackendGuard guard;
            k::force_backend(k::Backend::avx2);
            k::cmul(a.data(), b.data(), out_v.data(), n);
            if (n > 0)
                CHECK(std::memcmp(out_s.data(), out_v.data(), 2 * n * sizeof(double)) == 0);
            // Against the reference formula.
            for (size_t i = 0; i < n; ++i) {
                double re = a[2 * i] * b[2 * i] - a[2 * i + 1] * b[2 * i + 1];
                double im = a[2 * i] * b[2 * i + 1] + a[2 * i + 1] * b[2 * i];
                CHECK(out_s[2 * i] == re);
                CHECK(out_s[2 * i + 1] == im);
            }
        }
    }
}

TEST_CASE("cmul supports aliased output") {
    std::vector<double> a = {1.0, 2.0, -0.5, 3.0};
    std::vector<double> b = {0.25, -1.0, 2.0, 0.5};
    std::vector<double> expect(4);
    k::cmul_scalar(a.data(), b.data(), expect.data(), 2);
    k::cmul(a.data(), b.data(), a.data(), 2);
    CHECK(a == expect);
}
