#pragma once

#include <string>

#include "ap3/fourier.hpp"
#include "ap3/residue_set.hpp"
#include "ap3/weight.hpp"

namespace ap3 {

// Set files come in two shapes, sniffed by the first non-space byte:
//   JSON: {"p": <int>, "members": [<ints>]}
//   text: a "p=<int>" header line, then one residue per line.
// Emission is byte-stable: members sorted ascending, fixed layout.
ResidueSet parse_set(const std::string& body);
ResidueSet load_set(const std::string& path);
std::string set_to_json_string(const ResidueSet& S);
std::string set_to_text_string(const ResidueSet& S);
void save_set(const ResidueSet& S, const std::string& path, bool as_json = true);

// Weights: {"p": <int>, "values": [<p doubles>]}.
WeightFunction parse_weights(const std::string& body);
WeightFunction load_weights(const std::string& path);
std::string weights_to_json_string(const WeightFunction& w);
void save_weights(const WeightFunction& w, const std::string& path);

// Spectrum debug dump: header "a,re,im", one row per frequency.
std::string spectrum_to_csv(const Spectrum& F);
void save_spectrum_csv(const Spectrum& F, const std::string& path);

// Whole-file helpers; failures throw std::invalid_argument with the path.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& body);

}  // namespace ap3
