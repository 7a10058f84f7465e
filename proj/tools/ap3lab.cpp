// ap3lab: command-line workbench for 3AP counting, spectral analysis, and
// critical-set experiments over Z/pZ. One subcommand per module; every
// stochastic stage takes an explicit seed (no system entropy anywhere).
// Exit codes: 0 success, 2 invalid input, 3 stage failure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ap3/ap_count.hpp"
#include "ap3/ap_run.hpp"
#include "ap3/bohr.hpp"
#include "ap3/constructions.hpp"
#include "ap3/critical.hpp"
#include "ap3/errors.hpp"
#include "ap3/experiment.hpp"
#include "ap3/fourier.hpp"
#include "ap3/io.hpp"
#include "ap3/report.hpp"
#include "ap3/rng.hpp"
#include "ap3/rounding.hpp"

namespace {

using ap3::ordered_json;

void emit_text(const std::string& body, const std::string& out_path) {
    if (out_path.empty())
        std::cout << body;
    else
        ap3::write_file(out_path, body);
}

void emit_payload(const ordered_json& j, const std::string& format,
                  const std::string& out_path) {
    if (format == "csv")
        emit_text(ap3::csv_flatten(j), out_path);
    else
        emit_text(j.dump(2) + "\n", out_path);
}

ordered_json run_json(const ap3::ApRun& run) {
    ordered_json j;
    j["start"] = run.start;
    j["step"] = run.step;
    j["length"] = run.length;
    return j;
}

ordered_json members_json(const ap3::ResidueSet& S) {
    ordered_json arr = ordered_json::array();
    for (uint32_t n : S.members())
        arr.push_back(n);
    return arr;
}

nlohmann::json load_config(const std::string& path) {
    nlohmann::json j = nlohmann::json::parse(ap3::read_file(path), nullptr, false);
    if (j.is_discarded())
        throw std::invalid_argument("config file: malformed JSON");
    if (!j.is_object())
        throw std::invalid_argument("config file: expected a JSON object");
    return j;
}

uint64_t require_seed(const nlohmann::json& config) {
    if (!config.contains("seed") || !config["seed"].is_number_integer())
        throw std::invalid_argument("seed required");
    return config["seed"].get<uint64_t>();
}

// Shared output options.
struct OutputOpts {
    std::string out_path;
    std::string format = "json";
};

void add_output_opts(CLI::App* cmd, OutputOpts& opts) {
    cmd->add_option("--out", opts.out_path, "Write output here instead of stdout");
    cmd->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"3AP workbench over Z/pZ"};
    app.require_subcommand(1);
    std::function<void()> action;

    // ---- count ----------------------------------------------------------
    struct {
        std::string set_path;
        std::string method = "both";
        std::string spectrum_out;
        OutputOpts out;
    } count_opts;
    {
        auto* cmd = app.add_subcommand("count", "Count 3-term progressions in a set");
        cmd->add_option("--set", count_opts.set_path, "Set file (JSON or text)")->required();
        cmd->add_option("--method", count_opts.method, "Counting method")
            ->check(CLI::IsMember({"naive", "spectral", "both"}));
        cmd->add_option("--spectrum-out", count_opts.spectrum_out,
                        "Also dump the transform as CSV (a,re,im)");
        add_output_opts(cmd, count_opts.out);
        cmd->callback([&] {
            action = [&] {
                ap3::ResidueSet S = ap3::load_set(count_opts.set_path);
                ap3::Ap3Count c = ap3::count_3aps(S);
                ordered_json j;
                j["p"] = S.p();
                j["cardinality"] = S.size();
                j["method"] = count_opts.method;
                j["total"] = c.total;
                j["trivial"] = c.trivial;
                j["nontrivial"] = c.nontrivial;
                if (count_opts.method != "naive") {
                    ap3::SpectralCount sc = ap3::count_3aps_spectral(S);
                    double rel = std::abs(sc.value - static_cast<double>(c.total)) /
                                 std::max(1.0, static_cast<double>(c.total));
                    j["spectral_value"] = sc.value;
                    j["spectral_imag_residue"] = sc.imag_residue;
                    j["agreement"] = rel <= 1e-6;
                }
                if (!count_opts.spectrum_out.empty())
                    ap3::save_spectrum_csv(ap3::dft(S), count_opts.spectrum_out);
                emit_payload(j, count_opts.out.format, count_opts.out.out_path);
            };
        });
    }

    // ---- bohr -----------------------------------------------------------
    struct {
        std::string set_path;
        double threshold = 0.0;
        double eps = 0.1;
        uint32_t length = 8;
        OutputOpts out;
    } bohr_opts;
    {
        auto* cmd = app.add_subcommand(
            "bohr", "Bohr step search, smoothing progression, and convolution profile");
        cmd->add_option("--set", bohr_opts.set_path, "Set file")->required();
        cmd->add_option("--threshold", bohr_opts.threshold,
                        "Large-spectrum cutoff (0 = reference shape)");
        cmd->add_option("--eps", bohr_opts.eps, "Bohr radius in (0, 1/2)")->required();
        cmd->add_option("--length", bohr_opts.length, "Smoothing progression length")
            ->required();
        add_output_opts(cmd, bohr_opts.out);
        cmd->callback([&] {
            action = [&] {
                ap3::ResidueSet S = ap3::load_set(bohr_opts.set_path);
                double threshold = bohr_opts.threshold > 0.0
                                       ? bohr_opts.threshold
                                       : ap3::reference_threshold(S.p());
                ap3::SpectrumSplit split = ap3::split_spectrum(S, threshold);
                auto n0 = ap3::bohr_element(
                    ap3::BohrSpec{S.modulus(), split.large_freqs, bohr_opts.eps});
                if (!n0)
                    throw ap3::StageError("bohr-step",
                                          "no residue lies in the Bohr neighborhood");
                ap3::SmoothingProgression N =
                    ap3::make_progression(S.modulus(), *n0, bohr_opts.length);
                ap3::WeightFunction conv = ap3::convolve(S, N);
                double max_conv = 0.0;
                uint32_t argmax_m = 0;
                for (uint32_t m = 0; m < S.p(); ++m) {
                    if (conv[m] > max_conv) {
                        max_conv = conv[m];
                        argmax_m = m;
                    }
                }
                ordered_json j;
                j["p"] = S.p();
                j["threshold"] = threshold;
                j["large_count"] = split.large_count;
                j["n0"] = *n0;
                j["flatness"] = ap3::spectrum_flatness(N, split.large_freqs);
                j["max_convolution"] = max_conv;
                j["argmax_m"] = argmax_m;
                if (max_conv > 1.0 - bohr_opts.eps) {
                    ap3::ApRun run =
                        ap3::extract_ap_from_convolution(S, N, argmax_m, bohr_opts.eps);
                    j["extracted_run"] = run_json(run);
                } else {
                    j["extracted_run"] = nullptr;
                }
                emit_payload(j, bohr_opts.out.format, bohr_opts.out.out_path);
            };
        });
    }

    // ---- round ----------------------------------------------------------
    struct {
        std::string weights_path;
        uint64_t seed = 0;
        double bound_factor = 1.0;
        uint32_t max_attempts = 64;
        OutputOpts out;
    } round_opts;
    {
        auto* cmd = app.add_subcommand("round",
                                       "Randomized rounding of weights to a certified set");
        cmd->add_option("--weights", round_opts.weights_path, "Weights file (JSON)")
            ->required();
        cmd->add_option("--seed", round_opts.seed, "RNG seed")->required();
        cmd->add_option("--bound-factor", round_opts.bound_factor,
                        "Scale on the ln(p) sqrt(p) acceptance bound");
        cmd->add_option("--max-attempts", round_opts.max_attempts, "Retry cap");
        add_output_opts(cmd, round_opts.out);
        cmd->callback([&] {
            action = [&] {
                ap3::WeightFunction w = ap3::load_weights(round_opts.weights_path);
                ap3::RoundingResult r = ap3::round_weights(
                    w, round_opts.seed, round_opts.bound_factor, round_opts.max_attempts);
                ordered_json j;
                j["p"] = w.p();
                j["cardinality"] = r.set.size();
                j["members"] = members_json(r.set);
                ordered_json cert;
                cert["max_spectral_deviation"] = r.certificate.max_spectral_deviation;
                cert["bound"] = r.certificate.bound;
                cert["attempts"] = r.certificate.attempts;
                cert["seed"] = r.certificate.seed;
                cert["delta"] = r.certificate.delta;
                j["certificate"] = cert;
                emit_payload(j, round_opts.out.format, round_opts.out.out_path);
            };
        });
    }

    // ---- intersect ------------------------------------------------------
    struct {
        std::string a_path;
        std::string b_path;
        double eps = 0.5;
        uint32_t max_draws = 4096;
        uint64_t seed = 0;
        OutputOpts out;
    } inter_opts;
    {
        auto* cmd = app.add_subcommand(
            "intersect", "Sample an affine intersection A ∩ (uB + v) meeting both bounds");
        cmd->add_option("--a", inter_opts.a_path, "Set file for A")->required();
        cmd->add_option("--b", inter_opts.b_path, "Set file for B")->required();
        cmd->add_option("--eps", inter_opts.eps, "Density slack in (0, 1)")->required();
        cmd->add_option("--max-draws", inter_opts.max_draws, "Draw cap");
        cmd->add_option("--seed", inter_opts.seed, "RNG seed")->required();
        add_output_opts(cmd, inter_opts.out);
        cmd->callback([&] {
            action = [&] {
                ap3::ResidueSet A = ap3::load_set(inter_opts.a_path);
                ap3::ResidueSet B = ap3::load_set(inter_opts.b_path);
                ap3::IntersectionSample s = ap3::sample_intersection(
                    A, B, inter_opts.eps, inter_opts.max_draws, inter_opts.seed);
                ordered_json j;
                j["p"] = A.p();
                j["u"] = s.u;
                j["v"] = s.v;
                j["cardinality"] = s.set.size();
                j["density"] = s.density;
                j["nontrivial_3aps"] = s.nontrivial_3aps;
                j["draws"] = s.draws;
                j["members"] = members_json(s.set);
                emit_payload(j, inter_opts.out.format, inter_opts.out.out_path);
            };
        });
    }

    // ---- two-interval ---------------------------------------------------
    struct {
        uint32_t p = 0;
        double theta = 0.0;
        OutputOpts out;
    } ti_opts;
    {
        auto* cmd = app.add_subcommand(
            "two-interval", "Two-interval progression-poor set U and its complement");
        cmd->add_option("--p", ti_opts.p, "Prime modulus")->required();
        cmd->add_option("--theta", ti_opts.theta, "Removed measure in (0, 1)")->required();
        add_output_opts(cmd, ti_opts.out);
        cmd->callback([&] {
            action = [&] {
                ap3::PrimeModulus modulus(ti_opts.p);
                ap3::TwoIntervalSet t = ap3::two_interval_set(modulus, ti_opts.theta);
                ap3::Ap3Count cu = ap3::count_3aps(t.U);
                ap3::Ap3Count cb = ap3::count_3aps(t.Ubar);
                double pd = ti_opts.p;
                ordered_json j;
                j["p"] = ti_opts.p;
                j["theta"] = t.theta;
                j["u_cardinality"] = t.U.size();
                j["ubar_cardinality"] = t.Ubar.size();
                j["u_count_total"] = cu.total;
                j["u_count_ceiling"] =
                    pd * pd * (1.0 - 3.0 * t.theta + 2.5 * t.theta * t.theta) + 10.0 * pd;
                j["ubar_nontrivial"] = cb.nontrivial;
                j["ubar_nontrivial_floor"] = t.theta * t.theta * pd * pd / 2.0 - 10.0 * pd;
                j["ubar_members"] = members_json(t.Ubar);
                emit_payload(j, ti_opts.out.format, ti_opts.out.out_path);
            };
        });
    }

    // ---- improve --------------------------------------------------------
    struct {
        std::string set_path;
        std::string config_path;
        bool no_timing = false;
        OutputOpts out;
    } improve_opts;
    {
        auto* cmd = app.add_subcommand(
            "improve", "Run the full improvement pipeline and report every stage");
        cmd->add_option("--set", improve_opts.set_path, "Set file")->required();
        cmd->add_option("--config", improve_opts.config_path, "Pipeline config JSON")
            ->required();
        cmd->add_flag("--no-timing", improve_opts.no_timing,
                      "Omit wall_time_ms fields (byte-reproducible output)");
        add_output_opts(cmd, improve_opts.out);
        cmd->callback([&] {
            action = [&] {
                ap3::ResidueSet S = ap3::load_set(improve_opts.set_path);
                nlohmann::json config = load_config(improve_opts.config_path);
                ap3::ImproveParams params;
                params.seed = require_seed(config);
                if (config.contains("threshold") && config["threshold"].is_number())
                    params.threshold = config["threshold"].get<double>();
                else
                    params.threshold = ap3::reference_threshold(S.p());
                params.eps = config.value("eps", 0.1);
                params.smoothing_length = config.value("smoothing_length", 8u);
                params.bound_factor = config.value("bound_factor", 1.0);
                params.concentration_target = config.value("concentration_target", 0.9);
                params.max_draws = config.value("max_draws", 4096u);
                params.max_round_attempts = config.value("max_round_attempts", 64u);
                ap3::ImproveOutcome outcome = ap3::improve_critical_candidate(S, params);
                ordered_json j = outcome.report.to_json(!improve_opts.no_timing);
                j["result_members"] = members_json(outcome.result);
                emit_payload(j, improve_opts.out.format, improve_opts.out.out_path);
            };
        });
    }

    // ---- search ---------------------------------------------------------
    struct {
        uint32_t p = 0;
        uint32_t s = 0;
        std::string method = "exhaustive";
        uint64_t seed = 0;
        bool seed_given = false;
        uint32_t cap = 1000;
        ap3::AnnealSchedule schedule;
        OutputOpts out;
    } search_opts;
    {
        auto* cmd = app.add_subcommand("search", "Find minimum-progression sets of size s");
        cmd->add_option("--p", search_opts.p, "Prime modulus")->required();
        cmd->add_option("--s", search_opts.s, "Subset cardinality")->required();
        cmd->add_option("--method", search_opts.method, "Search method")
            ->check(CLI::IsMember({"exhaustive", "anneal"}));
        auto* seed_opt = cmd->add_option("--seed", search_opts.seed, "RNG seed (anneal)");
        cmd->add_option("--cap", search_opts.cap, "Max minimizers to report");
        cmd->add_option("--steps", search_opts.schedule.steps, "Anneal schedule length");
        cmd->add_option("--t0", search_opts.schedule.t0, "Anneal initial temperature");
        cmd->add_option("--cooling", search_opts.schedule.cooling,
                        "Anneal geometric cooling factor");
        add_output_opts(cmd, search_opts.out);
        cmd->callback([&, seed_opt] {
            search_opts.seed_given = seed_opt->count() > 0;
            action = [&] {
                ap3::PrimeModulus modulus(search_opts.p);
                ap3::CriticalSearchResult r = [&] {
                    if (search_opts.method == "exhaustive")
                        return ap3::exhaustive_critical(modulus, search_opts.s,
                                                        search_opts.cap);
                    if (!search_opts.seed_given)
                        throw std::invalid_argument("seed required");
                    return ap3::anneal_critical(modulus, search_opts.s,
                                                search_opts.schedule, search_opts.seed);
                }();
                ordered_json j;
                j["p"] = r.p;
                j["s"] = r.s;
                j["method"] = r.method;
                j["min_count"] = r.min_count;
                j["min_nontrivial"] = r.min_nontrivial;
                j["minimizer_total"] = r.minimizer_total;
                ordered_json mins = ordered_json::array();
                for (const auto& m : r.minimizers)
                    mins.push_back(members_json(m));
                j["minimizers"] = mins;
                ordered_json runs = ordered_json::array();
                for (const auto& run : r.longest_runs)
                    runs.push_back(run_json(run));
                j["longest_runs"] = runs;
                ordered_json stats;
                stats["nodes_visited"] = r.stats.nodes_visited;
                stats["moves_accepted"] = r.stats.moves_accepted;
                stats["seed"] = r.stats.seed;
                j["stats"] = stats;
                emit_payload(j, search_opts.out.format, search_opts.out.out_path);
            };
        });
    }

    // ---- varnavides -----------------------------------------------------
    struct {
        uint32_t p = 0;
        std::string densities;
        uint64_t seed = 0;
        bool seed_given = false;
        OutputOpts out{.out_path = "", .format = "csv"};
    } var_opts;
    {
        auto* cmd = app.add_subcommand(
            "varnavides", "Minimum-count table over a density grid (d,s,min_count,ratio)");
        cmd->add_option("--p", var_opts.p, "Prime modulus")->required();
        cmd->add_option("--densities", var_opts.densities,
                        "Comma-separated densities in (0, 1]")
            ->required();
        auto* seed_opt =
            cmd->add_option("--seed", var_opts.seed, "RNG seed (rows beyond exhaustion)");
        add_output_opts(cmd, var_opts.out);
        cmd->callback([&, seed_opt] {
            var_opts.seed_given = seed_opt->count() > 0;
            action = [&] {
                ap3::PrimeModulus modulus(var_opts.p);
                std::vector<double> grid;
                std::string token;
                std::istringstream in(var_opts.densities);
                while (std::getline(in, token, ',')) {
                    try {
                        grid.push_back(std::stod(token));
                    } catch (const std::exception&) {
                        throw std::invalid_argument("varnavides: bad density \"" + token +
                                                    "\"");
                    }
                }
                if (grid.empty())
                    throw std::invalid_argument("varnavides: empty density grid");
                // Annealed rows draw randomness; require the seed up front.
                for (double d : grid) {
                    auto s = static_cast<uint32_t>(
                        std::ceil(d * static_cast<double>(var_opts.p) - 1e-9));
                    if (ap3::subset_count_capped(var_opts.p, std::max(1u, s)) > 1000000ull &&
                        !var_opts.seed_given)
                        throw std::invalid_argument("seed required");
                }
                std::vector<ap3::VarnavidesRow> rows =
                    ap3::varnavides_estimate(modulus, grid, var_opts.seed);
                if (var_opts.out.format == "csv") {
                    std::string body = "d,s,min_count,ratio\n";
                    char buf[128];
                    for (const auto& r : rows) {
                        std::snprintf(buf, sizeof buf, "%.17g,%u,%llu,%.17g\n", r.d, r.s,
                                      static_cast<unsigned long long>(r.min_count), r.ratio);
                        body += buf;
                    }
                    emit_text(body, var_opts.out.out_path);
                } else {
                    ordered_json j = ordered_json::array();
                    for (const auto& r : rows) {
                        ordered_json row;
                        row["d"] = r.d;
                        row["s"] = r.s;
                        row["min_count"] = r.min_count;
                        row["min_nontrivial"] = r.min_nontrivial;
                        row["ratio"] = r.ratio;
                        row["method"] = r.method;
                        j.push_back(row);
                    }
                    emit_payload(j, "json", var_opts.out.out_path);
                }
            };
        });
    }

    // ---- experiment -----------------------------------------------------
    struct {
        std::string config_path;
        std::string set_path;
        bool no_timing = false;
        OutputOpts out;
    } exp_opts;
    {
        auto* cmd = app.add_subcommand(
            "experiment", "Observation pipeline: spectrum, Bohr step, convolution, APs");
        cmd->add_option("--config", exp_opts.config_path, "Experiment config JSON")
            ->required();
        cmd->add_option("--set", exp_opts.set_path,
                        "Set file (overrides members/density in config)");
        cmd->add_flag("--no-timing", exp_opts.no_timing,
                      "Omit wall_time_ms fields (byte-reproducible output)");
        add_output_opts(cmd, exp_opts.out);
        cmd->callback([&] {
            action = [&] {
                nlohmann::json config = load_config(exp_opts.config_path);
                uint64_t seed = require_seed(config);
                ap3::ResidueSet S = [&]() -> ap3::ResidueSet {
                    if (!exp_opts.set_path.empty())
                        return ap3::load_set(exp_opts.set_path);
                    if (!config.contains("p") || !config["p"].is_number_integer())
                        throw std::invalid_argument(
                            "experiment config: needs \"p\" (or pass --set)");
                    ap3::PrimeModulus modulus(config["p"].get<uint32_t>());
                    if (config.contains("members")) {
                        std::vector<int64_t> members =
                            config["members"].get<std::vector<int64_t>>();
                        return ap3::ResidueSet(modulus, members);
                    }
                    if (config.contains("density")) {
                        double d = config["density"].get<double>();
                        if (!(d > 0.0) || d > 1.0)
                            throw std::invalid_argument(
                                "experiment config: density must lie in (0, 1]");
                        auto card = static_cast<uint32_t>(std::ceil(
                            d * static_cast<double>(modulus.value()) - 1e-9));
                        return ap3::random_residue_set(modulus, std::max(1u, card),
                                                       ap3::derive_seed(seed, 0));
                    }
                    throw std::invalid_argument(
                        "experiment config: needs \"members\" or \"density\"");
                }();
                ap3::TheoremExperimentConfig tec;
                tec.threshold = config.value("threshold", 0.0);
                tec.eps = config.value("eps", 0.1);
                tec.smoothing_length = config.value("length", 8u);
                tec.compare_random = config.value("compare_random", 0u);
                tec.seed = seed;
                ap3::ExperimentReport report = ap3::run_theorem_experiment(S, tec);
                report.config["input"] = config;
                emit_payload(report.to_json(!exp_opts.no_timing), exp_opts.out.format,
                             exp_opts.out.out_path);
            };
        });
    }

    try {
        app.parse(argc, argv);
        action();
        return 0;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ap3::StageError& e) {
        std::cerr << "stage error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "internal consistency failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
