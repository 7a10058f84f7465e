#include "ap3/report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace ap3 {

uint64_t fnv1a64(const std::string& bytes) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string digest_hex(const std::string& bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return std::string(buf);
}

ExperimentReport::Stage& ExperimentReport::add_stage(const std::string& name,
                                                     const std::string& inputs_digest) {
    stages.push_back(Stage{name, inputs_digest, ordered_json::object(),
                           ordered_json::object(), 0.0});
    return stages.back();
}

ordered_json ExperimentReport::to_json(bool include_timing) const {
    ordered_json j;
    j["schema_version"] = schema_version;
    j["command"] = command;
    j["config"] = config;
    j["stages"] = ordered_json::array();
    for (const Stage& s : stages) {
        ordered_json js;
        js["name"] = s.name;
        js["inputs_digest"] = s.inputs_digest;
        js["outputs"] = s.outputs;
        js["certificates"] = s.certificates;
        if (include_timing)
            js["wall_time_ms"] = s.wall_time_ms;
        j["stages"].push_back(std::move(js));
    }
    j["verdict"] = verdict;
    return j;
}

namespace {

void flatten_into(const ordered_json& j, const std::string& prefix,
                  std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            std::string next = prefix.empty() ? key : prefix + "." + key;
            flatten_into(value, next, out);
        }
    } else if (j.is_array()) {
        size_t i = 0;
        for (const auto& value : j) {
            flatten_into(value, prefix + "." + std::to_string(i), out);
            ++i;
        }
    } else if (j.is_string()) {
        out.emplace_back(prefix, j.get<std::string>());
    } else {
        out.emplace_back(prefix, j.dump());
    }
}

}  // namespace

std::string csv_flatten(const ordered_json& j) {
    std::vector<std::pair<std::string, std::string>> cells;
    flatten_into(j, "", cells);
    std::string header, row;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) {
            header += ',';
            row += ',';
        }
        header += cells[i].first;
        // Quote any cell containing a separator.
        const std::string& v = cells[i].second;
        if (v.find_first_of(",\"\n") != std::string::npos) {
            row += '"';
            for (char c : v) {
                if (c == '"')
                    row += '"';
                row += c;
            }
            row += '"';
        } else {
            row += v;
        }
    }
    return header + "\n" + row + "\n";
}

void emit(const ExperimentReport& report, EmitFormat format, const std::string& path,
          bool include_timing) {
    ordered_json j = report.to_json(include_timing);
    std::string body =
        format == EmitFormat::json ? j.dump(2) + "\n" : csv_flatten(j);
    if (path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::invalid_argument("emit: cannot open " + path + " for writing");
    out << body;
    if (!out)
        throw std::invalid_argument("emit: write to " + path + " failed");
}

}  // namespace ap3
