#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace ap3 {

using ordered_json = nlohmann::ordered_json;

// FNV-1a over the bytes of a string; used to fingerprint stage inputs.
uint64_t fnv1a64(const std::string& bytes);
std::string digest_hex(const std::string& bytes);

// Structured record of one run: the full config echo plus one entry per
// pipeline stage. Field order is fixed so serialization is byte-stable;
// wall_time_ms is the only nondeterministic field and can be omitted.
struct ExperimentReport {
    struct Stage {
        std::string name;
        std::string inputs_digest;
        ordered_json outputs;
        ordered_json certificates;
        double wall_time_ms = 0.0;
    };

    std::string schema_version = "1";
    std::string command;
    ordered_json config;
    std::vector<Stage> stages;
    std::string verdict;

    Stage& add_stage(const std::string& name, const std::string& inputs_digest);

    ordered_json to_json(bool include_timing = true) const;
};

// Flattens a JSON tree to CSV: header row of dot-joined key paths (array
// elements by index), one value row. Documented companion of the JSON form.
std::string csv_flatten(const ordered_json& j);

enum class EmitFormat { json, csv };

// Serializes to the path, or to stdout when path is empty. JSON gets a
// trailing newline; CSV is emitted via csv_flatten.
void emit(const ExperimentReport& report, EmitFormat format, const std::string& path,
          bool include_timing = true);

}  // namespace ap3
