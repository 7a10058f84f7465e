#include "ap3/constructions.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "ap3/ap_count.hpp"
#include "ap3/bohr.hpp"
#include "ap3/errors.hpp"
#include "ap3/io.hpp"
#include "ap3/rng.hpp"
#include "ap3/rounding.hpp"

namespace ap3 {

ResidueSet affine_image(const ResidueSet& B, uint32_t u, uint32_t v) {
    uint32_t p = B.p();
    if (u == 0 || u >= p)
        throw std::invalid_argument("affine_image: u must lie in [1, p-1]");
    if (v >= p)
        throw std::invalid_argument("affine_image: v must lie in [0, p-1]");
    std::vector<int64_t> members;
    members.reserve(B.size());
    for (uint32_t b : B.members())
        members.push_back(static_cast<int64_t>((static_cast<uint64_t>(u) * b + v) % p));
    return ResidueSet(B.modulus(), members);
}

IntersectionSample sample_intersection(const ResidueSet& A, const ResidueSet& B, double eps,
                                       uint32_t max_draws, uint64_t seed) {
    if (A.empty() || B.empty())
        throw std::invalid_argument("sample_intersection: A and B must be nonempty");
    if (!(eps > 0.0) || !(eps < 1.0))
        throw std::invalid_argument("sample_intersection: eps must lie in (0, 1)");
    if (!(A.modulus() == B.modulus()))
        throw std::invalid_argument("sample_intersection: mismatched moduli");
    uint32_t p = A.p();
    double gamma = A.density();
    double delta = B.density();
    uint64_t nt_a = count_3aps(A).nontrivial;
    uint64_t nt_b = count_3aps(B).nontrivial;
    double size_floor = (1.0 - eps) * gamma * delta * static_cast<double>(p);
    double q_ceiling = static_cast<double>(nt_a) * static_cast<double>(nt_b) *
                       (1.0 + 2.0 / std::sqrt(static_cast<double>(p))) /
                       (static_cast<double>(p) * static_cast<double>(p));

    Rng rng(seed);
    for (uint32_t draw = 1; draw <= max_draws; ++draw) {
        uint32_t u = 1 + rng.uniform_u32(p - 1);
        uint32_t v = rng.uniform_u32(p);
        ResidueSet image = affine_image(B, u, v);
        // C = A ∩ image, word by word.
        std::vector<int64_t> members;
        for (uint32_t n = 0; n < p; ++n)
            if (A.contains(n) && image.contains(n))
                members.push_back(n);
        ResidueSet C(A.modulus(), members);
        if (static_cast<double>(C.size()) < size_floor)
            continue;
        uint64_t q = count_3aps(C).nontrivial;
        if (static_cast<double>(q) > q_ceiling)
            continue;
        return {u, v, std::move(C), static_cast<double>(members.size()) / p, q, draw};
    }
    throw StageError("intersection", "no (u, v) met both bounds within " +
                                         std::to_string(max_draws) +
                                         " draws; relax eps or raise max_draws");
}

TwoIntervalSet two_interval_set(PrimeModulus modulus, double theta) {
    if (!(theta > 0.0) || !(theta < 1.0))
        throw std::invalid_argument("two_interval_set: theta must lie in (0, 1)");
    uint32_t p = modulus.value();
    double half_width = theta * static_cast<double>(p) / 2.0;
    auto lo0 = static_cast<uint32_t>(0);
    auto hi0 = static_cast<uint32_t>(std::floor(half_width));
    auto lo1 = (p + 1) / 2;  // ceil(p/2), p odd
    auto hi1 = static_cast<uint32_t>(std::floor((static_cast<double>(p) + theta * p) / 2.0));
    std::vector<int64_t> bar_members;
    for (uint32_t n = lo0; n <= hi0 && n < p; ++n)
        bar_members.push_back(n);
    for (uint32_t n = lo1; n <= hi1 && n < p; ++n)
        bar_members.push_back(n);
    ResidueSet ubar(modulus, bar_members);
    ResidueSet u = ubar.complement();

    double pd = static_cast<double>(p);
    double u_bound = pd * pd * (1.0 - 3.0 * theta + 2.5 * theta * theta) + 10.0 * pd;
    double bar_floor = theta * theta * pd * pd / 2.0 - 10.0 * pd;
    uint64_t count_u = count_3aps(u).total;
    uint64_t count_bar = count_3aps(ubar).nontrivial;
    if (static_cast<double>(count_u) > u_bound)
        throw std::logic_error("two_interval_set: progression count of U exceeds its ceiling");
    if (static_cast<double>(count_bar) < bar_floor)
        throw std::logic_error("two_interval_set: nontrivial count of Ubar below its floor");
    return {theta, std::move(u), std::move(ubar)};
}

namespace {

ordered_json complex_json(const std::complex<double>& z) {
    ordered_json j;
    j["re"] = z.real();
    j["im"] = z.imag();
    return j;
}

ordered_json freqs_json(const std::vector<uint32_t>& freqs) {
    constexpr size_t kEchoCap = 64;
    ordered_json arr = ordered_json::array();
    for (size_t i = 0; i < freqs.size() && i < kEchoCap; ++i)
        arr.push_back(freqs[i]);
    return arr;
}

class StageTimer {
public:
    explicit StageTimer(ExperimentReport::Stage& stage)
        : stage_(stage), begin_(std::chrono::steady_clock::now()) {}
    ~StageTimer() {
        auto end = std::chrono::steady_clock::now();
        stage_.wall_time_ms =
            std::chrono::duration<double, std::milli>(end - begin_).count();
    }

private:
    ExperimentReport::Stage& stage_;
    std::chrono::steady_clock::time_point begin_;
};

}  // namespace

ImproveOutcome improve_critical_candidate(const ResidueSet& S, const ImproveParams& params) {
    if (S.empty())
        throw std::invalid_argument("improve_critical_candidate: S must be nonempty");
    if (!(params.concentration_target > 0.0) || !(params.concentration_target < 1.0))
        throw std::invalid_argument(
            "improve_critical_candidate: concentration_target must lie in (0, 1)");
    uint32_t p = S.p();
    std::string set_digest = digest_hex(set_to_json_string(S));

    ExperimentReport report;
    report.command = "improve";
    report.config["p"] = p;
    report.config["set_digest"] = set_digest;
    report.config["cardinality"] = S.size();
    report.config["threshold"] = params.threshold;
    report.config["eps"] = params.eps;
    report.config["smoothing_length"] = params.smoothing_length;
    report.config["bound_factor"] = params.bound_factor;
    report.config["concentration_target"] = params.concentration_target;
    report.config["max_draws"] = params.max_draws;
    report.config["max_round_attempts"] = params.max_round_attempts;
    report.config["seed"] = params.seed;

    Ap3Count base_count = count_3aps(S);

    auto& split_stage = report.add_stage(
        "split-spectrum", digest_hex(set_digest + "|" + std::to_string(params.threshold)));
    SpectrumSplit split;
    {
        StageTimer t(split_stage);
        split = split_spectrum(S, params.threshold);
        split_stage.outputs["threshold"] = split.threshold;
        split_stage.outputs["large_count"] = split.large_count;
        split_stage.outputs["large_freqs"] = freqs_json(split.large_freqs);
        split_stage.outputs["sigma1"] = complex_json(split.sigma1);
        split_stage.outputs["sigma2"] = complex_json(split.sigma2);
        // Parseval: M T^2 never exceeds p |S|.
        split_stage.certificates["parseval_cap_ok"] =
            static_cast<double>(split.large_count) * split.threshold * split.threshold <=
            static_cast<double>(p) * static_cast<double>(S.size()) + 1e-6;
    }

    auto& bohr_stage = report.add_stage(
        "bohr-step", digest_hex(split_stage.outputs.dump() + "|" + std::to_string(params.eps)));
    uint32_t n0 = 0;
    {
        StageTimer t(bohr_stage);
        auto hit = bohr_element(BohrSpec{S.modulus(), split.large_freqs, params.eps});
        if (!hit)
            throw StageError("bohr-step", "no residue lies in the Bohr neighborhood; "
                                          "raise eps or the spectrum threshold");
        n0 = *hit;
        bohr_stage.outputs["n0"] = n0;
        bohr_stage.outputs["freq_count"] = split.large_freqs.size();
        bohr_stage.outputs["eps"] = params.eps;
    }

    auto& smooth_stage = report.add_stage(
        "smoothing", digest_hex(std::to_string(n0) + "|" +
                                std::to_string(params.smoothing_length) + "|" + set_digest));
    SmoothingProgression N = make_progression(S.modulus(), n0, params.smoothing_length);
    double max_conv = 0.0;
    uint32_t argmax_m = 0;
    WeightFunction conv(S.modulus(), std::vector<double>(p, 0.0));
    {
        StageTimer t(smooth_stage);
        double flatness = spectrum_flatness(N, split.large_freqs);
        conv = convolve(S, N);
        for (uint32_t m = 0; m < p; ++m) {
            if (conv[m] > max_conv) {
                max_conv = conv[m];
                argmax_m = m;
            }
        }
        smooth_stage.outputs["n0"] = n0;
        smooth_stage.outputs["length"] = N.length;
        smooth_stage.outputs["flatness"] = flatness;
        smooth_stage.outputs["max_convolution"] = max_conv;
        smooth_stage.outputs["argmax_m"] = argmax_m;
        smooth_stage.certificates["flatness_cap"] =
            2.0 * std::numbers::pi * static_cast<double>(N.length) * params.eps;
        smooth_stage.certificates["flatness_within_cap"] =
            flatness <= 2.0 * std::numbers::pi * static_cast<double>(N.length) * params.eps;
    }

    if (max_conv > 1.0 - params.eps) {
        // A translate of N is already (1-eps)-dense in S: the theorem's
        // conclusion. Extract the progression instead of rebuilding S.
        auto& extract_stage = report.add_stage(
            "extract", digest_hex(set_digest + "|" + std::to_string(argmax_m)));
        StageTimer t(extract_stage);
        ApRun run = extract_ap_from_convolution(S, N, argmax_m, params.eps);
        extract_stage.outputs["start"] = run.start;
        extract_stage.outputs["step"] = run.step;
        extract_stage.outputs["length"] = run.length;
        extract_stage.certificates["contained"] = run_contained(S, run);
        report.verdict = max_conv == 1.0 ? "already-concentrated" : "ap-extracted";
        return {S, run, report.verdict, std::move(report)};
    }

    double kappa = std::max(1.0 - params.concentration_target, max_conv);
    double theta = 1.0 - kappa;

    auto& weight_stage = report.add_stage(
        "weights", digest_hex(smooth_stage.outputs.dump() + "|" + std::to_string(kappa)));
    std::vector<double> wvals(p);
    {
        StageTimer t(weight_stage);
        for (uint32_t m = 0; m < p; ++m)
            wvals[m] = conv[m] / kappa;
        weight_stage.outputs["kappa"] = kappa;
        weight_stage.outputs["theta"] = theta;
    }
    WeightFunction w(S.modulus(), std::move(wvals));
    weight_stage.outputs["mass"] = w.sum();

    auto& round_stage = report.add_stage(
        "rounding", digest_hex(weights_to_json_string(w) + "|" +
                               std::to_string(derive_seed(params.seed, 1))));
    RoundingResult rounded = [&] {
        StageTimer t(round_stage);
        return round_weights(w, derive_seed(params.seed, 1), params.bound_factor,
                             params.max_round_attempts);
    }();
    round_stage.outputs["cardinality"] = rounded.set.size();
    round_stage.certificates["max_spectral_deviation"] =
        rounded.certificate.max_spectral_deviation;
    round_stage.certificates["bound"] = rounded.certificate.bound;
    round_stage.certificates["attempts"] = rounded.certificate.attempts;
    round_stage.certificates["delta"] = rounded.certificate.delta;

    auto& interval_stage =
        report.add_stage("two-interval", digest_hex(std::to_string(p) + "|" +
                                                    std::to_string(theta)));
    TwoIntervalSet masks = [&] {
        StageTimer t(interval_stage);
        return two_interval_set(S.modulus(), theta);
    }();
    interval_stage.outputs["theta"] = theta;
    interval_stage.outputs["ubar_size"] = masks.Ubar.size();
    interval_stage.outputs["u_size"] = masks.U.size();
    interval_stage.outputs["u_count_total"] = count_3aps(masks.U).total;

    auto& inter_stage = report.add_stage(
        "intersection",
        digest_hex(set_to_json_string(masks.U) + set_to_json_string(rounded.set) + "|" +
                   std::to_string(derive_seed(params.seed, 2))));
    IntersectionSample sample = [&] {
        StageTimer t(inter_stage);
        return sample_intersection(masks.U, rounded.set, params.eps, params.max_draws,
                                   derive_seed(params.seed, 2));
    }();
    inter_stage.outputs["u"] = sample.u;
    inter_stage.outputs["v"] = sample.v;
    inter_stage.outputs["draws"] = sample.draws;
    inter_stage.outputs["cardinality"] = sample.set.size();
    inter_stage.outputs["density"] = sample.density;
    inter_stage.outputs["nontrivial_3aps"] = sample.nontrivial_3aps;

    auto& adjust_stage = report.add_stage(
        "cardinality",
        digest_hex(set_to_json_string(sample.set) + "|" + std::to_string(S.size()) + "|" +
                   std::to_string(derive_seed(params.seed, 3))));
    ResidueSet improved = [&] {
        StageTimer t(adjust_stage);
        return adjust_cardinality(sample.set, S.size(), derive_seed(params.seed, 3));
    }();
    adjust_stage.outputs["cardinality"] = improved.size();
    adjust_stage.certificates["matches_input_cardinality"] = improved.size() == S.size();

    Ap3Count final_count = count_3aps(improved);
    auto& verdict_stage = report.add_stage("verdict", set_digest);
    verdict_stage.outputs["count_before"] = base_count.total;
    verdict_stage.outputs["count_after"] = final_count.total;
    verdict_stage.outputs["nontrivial_before"] = base_count.nontrivial;
    verdict_stage.outputs["nontrivial_after"] = final_count.nontrivial;
    report.verdict = final_count.total < base_count.total ? "improved" : "not-improved";
    return {std::move(improved), std::nullopt, report.verdict, std::move(report)};
}

}  // namespace ap3
