#include "ap3/experiment.hpp"

#include <chrono>
#include <cmath>

#include "ap3/ap_count.hpp"
#include "ap3/ap_run.hpp"
#include "ap3/bohr.hpp"
#include "ap3/errors.hpp"
#include "ap3/io.hpp"
#include "ap3/rng.hpp"

namespace ap3 {

namespace {

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

ExperimentReport run_theorem_experiment(const ResidueSet& S,
                                        const TheoremExperimentConfig& config) {
    uint32_t p = S.p();
    double threshold =
        config.threshold > 0.0 ? config.threshold : reference_threshold(p);
    std::string set_digest = digest_hex(set_to_json_string(S));

    ExperimentReport report;
    report.command = "experiment";
    report.config["p"] = p;
    report.config["set_digest"] = set_digest;
    report.config["cardinality"] = S.size();
    report.config["threshold"] = threshold;
    report.config["eps"] = config.eps;
    report.config["smoothing_length"] = config.smoothing_length;
    report.config["compare_random"] = config.compare_random;
    report.config["seed"] = config.seed;

    auto& count_stage = report.add_stage("count", set_digest);
    {
        StageTimer t(count_stage);
        Ap3Count c = count_3aps(S);
        count_stage.outputs["total"] = c.total;
        count_stage.outputs["trivial"] = c.trivial;
        count_stage.outputs["nontrivial"] = c.nontrivial;
    }

    auto& split_stage = report.add_stage(
        "split-spectrum", digest_hex(set_digest + "|" + std::to_string(threshold)));
    SpectrumSplit split;
    {
        StageTimer t(split_stage);
        split = split_spectrum(S, threshold);
        split_stage.outputs["threshold"] = split.threshold;
        split_stage.outputs["large_count"] = split.large_count;
    }

    auto& bohr_stage = report.add_stage(
        "bohr-step", digest_hex(split_stage.outputs.dump() + "|" + std::to_string(config.eps)));
    uint32_t n0 = 0;
    {
        StageTimer t(bohr_stage);
        auto hit = bohr_element(BohrSpec{S.modulus(), split.large_freqs, config.eps});
        if (!hit)
            throw StageError("bohr-step", "no residue lies in the Bohr neighborhood; "
                                          "raise eps or the spectrum threshold");
        n0 = *hit;
        bohr_stage.outputs["n0"] = n0;
        bohr_stage.outputs["freq_count"] = split.large_freqs.size();
    }

    auto& smooth_stage = report.add_stage(
        "smoothing", digest_hex(std::to_string(n0) + "|" +
                                std::to_string(config.smoothing_length) + "|" + set_digest));
    SmoothingProgression N = make_progression(S.modulus(), n0, config.smoothing_length);
    double max_conv = 0.0;
    uint32_t argmax_m = 0;
    {
        StageTimer t(smooth_stage);
        WeightFunction conv = convolve(S, N);
        for (uint32_t m = 0; m < p; ++m) {
            if (conv[m] > max_conv) {
                max_conv = conv[m];
                argmax_m = m;
            }
        }
        // |S ∩ (m - N)| recomputed as an integer; conv carries it scaled.
        uint32_t hits = 0;
        uint32_t pos = argmax_m;
        for (uint32_t j = 0; j < N.length; ++j) {
            hits += S.contains(pos);
            pos = pos >= N.n0 ? pos - N.n0 : pos + p - N.n0;
        }
        smooth_stage.outputs["n0"] = n0;
        smooth_stage.outputs["length"] = N.length;
        smooth_stage.outputs["flatness"] = spectrum_flatness(N, split.large_freqs);
        smooth_stage.outputs["max_convolution"] = max_conv;
        smooth_stage.outputs["argmax_m"] = argmax_m;
        smooth_stage.outputs["dense_translate_hits"] = hits;
        smooth_stage.outputs["dense_translate_ratio"] =
            static_cast<double>(hits) / static_cast<double>(N.length);
    }

    bool extracted = false;
    if (max_conv > 1.0 - config.eps) {
        auto& extract_stage = report.add_stage(
            "extract", digest_hex(set_digest + "|" + std::to_string(argmax_m)));
        StageTimer t(extract_stage);
        ApRun run = extract_ap_from_convolution(S, N, argmax_m, config.eps);
        extract_stage.outputs["start"] = run.start;
        extract_stage.outputs["step"] = run.step;
        extract_stage.outputs["length"] = run.length;
        extract_stage.certificates["contained"] = run_contained(S, run);
        extracted = true;
    }

    auto& run_stage = report.add_stage("longest-ap", set_digest);
    {
        StageTimer t(run_stage);
        ApRun run = longest_ap(S);
        run_stage.outputs["start"] = run.start;
        run_stage.outputs["step"] = run.step;
        run_stage.outputs["length"] = run.length;
        run_stage.certificates["contained"] = run_contained(S, run);
    }

    if (config.compare_random > 0) {
        auto& base_stage = report.add_stage(
            "random-baseline",
            digest_hex(set_digest + "|" + std::to_string(config.compare_random) + "|" +
                       std::to_string(config.seed)));
        StageTimer t(base_stage);
        ordered_json lengths = ordered_json::array();
        uint32_t max_len = 0;
        double sum_len = 0.0;
        for (uint32_t i = 0; i < config.compare_random; ++i) {
            ResidueSet sample =
                random_residue_set(S.modulus(), S.size(), derive_seed(config.seed, 100 + i));
            uint32_t len = longest_ap(sample).length;
            lengths.push_back(len);
            max_len = std::max(max_len, len);
            sum_len += len;
        }
        base_stage.outputs["cardinality"] = S.size();
        base_stage.outputs["samples"] = config.compare_random;
        base_stage.outputs["lengths"] = lengths;
        base_stage.outputs["max_length"] = max_len;
        base_stage.outputs["mean_length"] =
            sum_len / static_cast<double>(config.compare_random);
    }

    report.verdict = extracted ? "ap-extracted" : "observed";
    return report;
}

}  // namespace ap3
