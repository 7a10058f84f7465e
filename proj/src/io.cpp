#include "ap3/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ap3 {

namespace {

using nlohmann::json;

json parse_json(const std::string& body, const char* what) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded())
        throw std::invalid_argument(std::string(what) + ": malformed JSON");
    return j;
}

PrimeModulus modulus_from_json(const json& j, const char* what) {
    if (!j.is_object() || !j.contains("p") || !j["p"].is_number_integer())
        throw std::invalid_argument(std::string(what) + ": missing integer field \"p\"");
    int64_t p = j["p"].get<int64_t>();
    if (p < 5 || p > 0xffffffffll)
        throw std::invalid_argument(std::string(what) + ": p out of range");
    return PrimeModulus(static_cast<uint32_t>(p));
}

}  // namespace

ResidueSet parse_set(const std::string& body) {
    size_t first = body.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        throw std::invalid_argument("set file: empty input");
    if (body[first] == '{') {
        json j = parse_json(body, "set file");
        PrimeModulus modulus = modulus_from_json(j, "set file");
        if (!j.contains("members") || !j["members"].is_array())
            throw std::invalid_argument("set file: missing array field \"members\"");
        std::vector<int64_t> members;
        for (const auto& m : j["members"]) {
            if (!m.is_number_integer())
                throw std::invalid_argument("set file: non-integer member");
            members.push_back(m.get<int64_t>());
        }
        return ResidueSet(modulus, members);
    }
    // Text form: "p=<int>" header, then one residue per line.
    std::istringstream in(body);
    std::string line;
    if (!std::getline(in, line) || line.rfind("p=", 0) != 0)
        throw std::invalid_argument("set file: expected \"p=<int>\" header");
    long long p = 0;
    try {
        p = std::stoll(line.substr(2));
    } catch (const std::exception&) {
        throw std::invalid_argument("set file: bad modulus in header");
    }
    if (p < 5 || p > 0xffffffffll)
        throw std::invalid_argument("set file: p out of range");
    std::vector<int64_t> members;
    while (std::getline(in, line)) {
        size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos)
            continue;
        size_t e = line.find_last_not_of(" \t\r");
        try {
            members.push_back(std::stoll(line.substr(b, e - b + 1)));
        } catch (const std::exception&) {
            throw std::invalid_argument("set file: bad residue line \"" + line + "\"");
        }
    }
    return ResidueSet(PrimeModulus(static_cast<uint32_t>(p)), members);
}

ResidueSet load_set(const std::string& path) {
    return parse_set(read_file(path));
}

std::string set_to_json_string(const ResidueSet& S) {
    std::string out = "{\"p\": " + std::to_string(S.p()) + ", \"members\": [";
    bool first = true;
    for (uint32_t n : S.members()) {
        if (!first)
            out += ", ";
        out += std::to_string(n);
        first = false;
    }
    out += "]}\n";
    return out;
}

std::string set_to_text_string(const ResidueSet& S) {
    std::string out = "p=" + std::to_string(S.p()) + "\n";
    for (uint32_t n : S.members()) {
        out += std::to_string(n);
        out += '\n';
    }
    return out;
}

void save_set(const ResidueSet& S, const std::string& path, bool as_json) {
    write_file(path, as_json ? set_to_json_string(S) : set_to_text_string(S));
}

WeightFunction parse_weights(const std::string& body) {
    json j = parse_json(body, "weights file");
    PrimeModulus modulus = modulus_from_json(j, "weights file");
    if (!j.contains("values") || !j["values"].is_array())
        throw std::invalid_argument("weights file: missing array field \"values\"");
    std::vector<double> values;
    for (const auto& v : j["values"]) {
        if (!v.is_number())
            throw std::invalid_argument("weights file: non-numeric value");
        values.push_back(v.get<double>());
    }
    if (values.size() != modulus.value())
        throw std::invalid_argument("weights file: needs exactly p values");
    return WeightFunction(modulus, std::move(values));
}

WeightFunction load_weights(const std::string& path) {
    return parse_weights(read_file(path));
}

std::string weights_to_json_string(const WeightFunction& w) {
    nlohmann::ordered_json j;
    j["p"] = w.p();
    j["values"] = w.values();
    return j.dump() + "\n";
}

void save_weights(const WeightFunction& w, const std::string& path) {
    write_file(path, weights_to_json_string(w));
}

std::string spectrum_to_csv(const Spectrum& F) {
    std::string out = "a,re,im\n";
    char buf[64];
    for (uint32_t a = 0; a < F.p(); ++a) {
        std::snprintf(buf, sizeof buf, "%u,%.17g,%.17g", a, F.coeffs[a].real(),
                      F.coeffs[a].imag());
        out += buf;
        out += '\n';
    }
    return out;
}

void save_spectrum_csv(const Spectrum& F, const std::string& path) {
    write_file(path, spectrum_to_csv(F));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::invalid_argument("cannot open " + path + " for writing");
    out << body;
    if (!out)
        throw std::invalid_argument("write to " + path + " failed");
}

}  // namespace ap3
