#include "gwldp/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gwldp/errors.hpp"

namespace gwldp {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

json parse_json(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw ValidationError("bad_json", std::string("could not parse ") + what);
  }
  return j;
}

// Probabilities arrive as numbers or decimal strings; both go through
// strtod so "0.5" and 0.5 read identically.
double read_probability(const json& v, const char* where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    std::size_t used = 0;
    double out = 0.0;
    try {
      out = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ValidationError("bad_probability", std::string(where) + ": '" + s + "' is not a number");
    }
    if (used != s.size()) {
      throw ValidationError("bad_probability", std::string(where) + ": '" + s + "' is not a number");
    }
    return out;
  }
  throw ValidationError("bad_probability",
                        std::string(where) + ": probabilities must be numbers or decimal strings");
}

OffspringConfig read_config(const json& children, const GWModel* model,
                            const std::vector<std::string>& alphabet) {
  if (!children.is_array()) {
    throw ValidationError("bad_config", "children must be an array of type symbols");
  }
  OffspringConfig c;
  c.children.reserve(children.size());
  for (const auto& item : children) {
    if (!item.is_string()) {
      throw ValidationError("bad_config", "children must be type symbols");
    }
    const std::string sym = item.get<std::string>();
    TypeId t = -1;
    if (model != nullptr) {
      t = model->type_index(sym);
    } else {
      for (std::size_t i = 0; i < alphabet.size(); ++i) {
        if (alphabet[i] == sym) {
          t = static_cast<TypeId>(i);
          break;
        }
      }
    }
    if (t < 0) {
      throw ValidationError("unknown_type", "type '" + sym + "' is not in the alphabet");
    }
    c.children.push_back(t);
  }
  return c;
}

}  // namespace

GWModel parse_model_json(const std::string& text) {
  json j = parse_json(text, "model");
  if (!j.is_object() || !j.contains("alphabet") || !j.contains("root_law") || !j.contains("kernel")) {
    throw ValidationError("bad_model", "model needs alphabet, root_law and kernel");
  }

  RawModel raw;
  if (!j["alphabet"].is_array()) {
    throw ValidationError("bad_model", "alphabet must be an array of symbols");
  }
  for (const auto& s : j["alphabet"]) {
    if (!s.is_string()) throw ValidationError("bad_model", "alphabet entries must be strings");
    raw.alphabet.push_back(s.get<std::string>());
  }

  raw.root_law.assign(raw.alphabet.size(), 0.0);
  if (!j["root_law"].is_object()) {
    throw ValidationError("bad_root_law", "root_law must map type symbols to probabilities");
  }
  for (const auto& [sym, value] : j["root_law"].items()) {
    auto it = std::find(raw.alphabet.begin(), raw.alphabet.end(), sym);
    if (it == raw.alphabet.end()) {
      throw ValidationError("unknown_type", "root_law mentions unknown type '" + sym + "'");
    }
    raw.root_law[static_cast<std::size_t>(it - raw.alphabet.begin())] =
        read_probability(value, "root_law");
  }

  raw.kernel.resize(raw.alphabet.size());
  if (!j["kernel"].is_object()) {
    throw ValidationError("bad_model", "kernel must map type symbols to offspring rows");
  }
  for (const auto& [sym, row] : j["kernel"].items()) {
    auto it = std::find(raw.alphabet.begin(), raw.alphabet.end(), sym);
    if (it == raw.alphabet.end()) {
      throw ValidationError("unknown_type", "kernel mentions unknown type '" + sym + "'");
    }
    if (!row.is_array()) {
      throw ValidationError("bad_model", "each kernel row must be an array of entries");
    }
    auto& out = raw.kernel[static_cast<std::size_t>(it - raw.alphabet.begin())];
    for (const auto& entry : row) {
      if (!entry.is_object() || !entry.contains("children") || !entry.contains("p")) {
        throw ValidationError("bad_model", "kernel entries need children and p");
      }
      out.push_back(KernelEntry{read_config(entry["children"], nullptr, raw.alphabet),
                                read_probability(entry["p"], "kernel")});
    }
  }
  return validate_model(std::move(raw));
}

GWModel load_model_file(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const ValidationError& e) {
    throw ValidationError("model_not_found", e.detail());
  }
  return parse_model_json(text);
}

std::string atom_key(const Atom& atom, const GWModel& model) {
  std::ostringstream out;
  out << '(' << model.symbol(atom.parent) << '|';
  for (std::size_t i = 0; i < atom.config.children.size(); ++i) {
    if (i > 0) out << ',';
    out << model.symbol(atom.config.children[i]);
  }
  out << ')';
  return out.str();
}

Atom parse_atom_key(const std::string& key, const GWModel& model) {
  if (key.size() < 3 || key.front() != '(' || key.back() != ')') {
    throw ValidationError("bad_atom_key", "expected '(parent|child,child)', got '" + key + "'");
  }
  const std::string body = key.substr(1, key.size() - 2);
  const std::size_t bar = body.find('|');
  if (bar == std::string::npos) {
    throw ValidationError("bad_atom_key", "expected '(parent|child,child)', got '" + key + "'");
  }
  const std::string parent = body.substr(0, bar);
  Atom atom;
  atom.parent = model.type_index(parent);
  if (atom.parent < 0) {
    throw ValidationError("unknown_type", "type '" + parent + "' is not in the alphabet");
  }
  std::string rest = body.substr(bar + 1);
  if (!rest.empty()) {
    std::istringstream in(rest);
    std::string sym;
    while (std::getline(in, sym, ',')) {
      TypeId t = model.type_index(sym);
      if (t < 0) {
        throw ValidationError("unknown_type", "type '" + sym + "' is not in the alphabet");
      }
      atom.config.children.push_back(t);
    }
  }
  return atom;
}

namespace {

template <class Setter>
void parse_keyed_values(const std::string& text, const GWModel& model, const char* what,
                        Setter&& set) {
  json j = parse_json(text, what);
  if (!j.is_object()) {
    throw ValidationError("bad_json", std::string(what) + " must be an object keyed by atoms");
  }
  for (const auto& [key, value] : j.items()) {
    Atom atom = parse_atom_key(key, model);
    set(std::move(atom), read_probability(value, what));
  }
}

}  // namespace

OffspringMeasure parse_measure_json(const std::string& text, const GWModel& model) {
  OffspringMeasure rho;
  parse_keyed_values(text, model, "measure", [&](Atom atom, double w) {
    rho.set(atom.parent, std::move(atom.config), w);
  });
  return rho;
}

OffspringMeasure load_measure_file(const std::string& path, const GWModel& model) {
  return parse_measure_json(read_text_file(path), model);
}

std::string measure_to_json(const OffspringMeasure& rho, const GWModel& model) {
  ordered_json out = ordered_json::object();
  for (const auto& [atom, w] : rho.atoms()) {
    out[atom_key(atom, model)] = w;
  }
  return out.dump(2) + "\n";
}

TestFunction parse_test_function_json(const std::string& text, const GWModel& model) {
  TestFunction g;
  parse_keyed_values(text, model, "test function", [&](Atom atom, double v) {
    g.set(atom.parent, std::move(atom.config), v);
  });
  return g;
}

TestFunction load_test_function_file(const std::string& path, const GWModel& model) {
  return parse_test_function_json(read_text_file(path), model);
}

std::string test_function_to_json(const TestFunction& g, const GWModel& model) {
  ordered_json out = ordered_json::object();
  for (const auto& [atom, v] : g.values()) {
    out[atom_key(atom, model)] = v;
  }
  return out.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("file_not_found", "could not open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ValidationError("file_not_found", "could not open '" + path + "' for writing");
  }
  out << content;
}

}  // namespace gwldp
