#include "ap3/ap_run.hpp"

namespace ap3 {

bool run_contained(const ResidueSet& S, const ApRun& run) {
    if (run.length == 0)
        return true;
    uint32_t p = S.p();
    uint32_t pos = run.start;
    for (uint32_t j = 0; j < run.length; ++j) {
        if (!S.contains(pos))
            return false;
        pos += run.step;
        if (pos >= p)
            pos -= p;
    }
    return true;
}

ApRun longest_ap(const ResidueSet& S) {
    uint32_t p = S.p();
    if (S.empty())
        return {0, 0, 0};
    if (S.size() == 1)
        return {S.members().front(), 0, 1};

    // For a fixed step the residues form one cycle of length p (p prime).
    // Walk the cycle twice so runs that wrap past the cycle origin appear
    // contiguously; counting only runs whose first element lies in the
    // first lap sees every circular run exactly once. A truncated prefix
    // copy of a wrapping run is strictly shorter than the run itself, so
    // it never decides the maximum.
    uint32_t best_len = 0;
    uint32_t best_step = 1;
    uint32_t best_start = 0;
    for (uint32_t step = 1; step <= (p - 1) / 2; ++step) {
        uint32_t pos = 0;
        uint32_t cur = 0;
        for (uint32_t j = 0; j < 2 * p; ++j) {
            if (S.contains(pos)) {
                ++cur;
                uint32_t first_index = j + 1 - cur;
                if (first_index < p) {
                    uint32_t len = cur > p ? p : cur;
                    uint32_t start =
                        static_cast<uint32_t>((static_cast<uint64_t>(first_index) * step) % p);
                    if (len > best_len ||
                        (len == best_len && step == best_step && start < best_start)) {
                        best_len = len;
                        best_step = step;
                        best_start = start;
                    }
                }
            } else {
                cur = 0;
            }
            pos += step;
            if (pos >= p)
                pos -= p;
        }
        if (best_len == p)
            break;
    }
    // Two distinct members always form a run of length 2 under either their
    // difference or its negation, so best_len >= 2 here.
    return {best_start, best_step, best_len};
}

}  // namespace ap3
