#pragma once

#include <string>

#include "gwldp/measure.hpp"
#include "gwldp/model.hpp"
#include "gwldp/test_function.hpp"
#include "gwldp/types.hpp"

namespace gwldp {

// Model files: {"alphabet": [...], "root_law": {"a": p, ...},
// "kernel": {"a": [{"children": ["a","a"], "p": 0.5}, ...], ...}}.
// Probabilities may be JSON numbers or decimal strings.
GWModel parse_model_json(const std::string& text);
GWModel load_model_file(const std::string& path);  // missing file: ValidationError("model_not_found")

// Measures and test functions are flat objects keyed "(a|b,c)"; a leaf
// configuration is written "(a|)".
std::string atom_key(const Atom& atom, const GWModel& model);
Atom parse_atom_key(const std::string& key, const GWModel& model);

OffspringMeasure parse_measure_json(const std::string& text, const GWModel& model);
OffspringMeasure load_measure_file(const std::string& path, const GWModel& model);
std::string measure_to_json(const OffspringMeasure& rho, const GWModel& model);

TestFunction parse_test_function_json(const std::string& text, const GWModel& model);
TestFunction load_test_function_file(const std::string& path, const GWModel& model);
std::string test_function_to_json(const TestFunction& g, const GWModel& model);

std::string read_text_file(const std::string& path);  // throws ValidationError("file_not_found")
void write_text_file(const std::string& path, const std::string& content);

}  // namespace gwldp
