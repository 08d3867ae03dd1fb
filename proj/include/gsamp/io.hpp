#pragma once

// Problem files (JSON) and vector CSV files for the command-line front end.

#include "gsamp/cyclic_sampling.hpp"
#include "gsamp/lca_finite.hpp"
#include "gsamp/spectral.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <system_error>

namespace gsamp::io {

using nlohmann::json;

struct SchemaError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct CyclicProblem {
  LinearOperator op = LinearOperator::identity(1);
  std::vector<CVector> generators;
  std::vector<int> orders;
  std::vector<CVector> samplers;
  int r = 1;
  std::optional<CVector> truth;
};

struct ShiftProblem {
  int r = 1;
  int grid = 0;
  std::map<std::string, spectral::FiniteSequence> sequences;
  spectral::SpectraTable spectra;
  std::optional<spectral::FilterBank> filter_bank;
};

struct LcaProblem {
  std::vector<int> moduli;
  std::vector<LinearOperator> operators;
  std::vector<lca::Element> H_gens;
  std::vector<lca::Element> M_gens;
  CVector generator;
  std::vector<CVector> samplers;
  std::optional<CVector> truth;
};

struct ProblemFile {
  std::string model;
  std::optional<CyclicProblem> cyclic;
  std::optional<ShiftProblem> shift;
  std::optional<LcaProblem> lca;
};

namespace detail {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline int as_int(const json& j, const char* what) {
  if (!j.is_number_integer()) throw SchemaError(std::string(what) + ": expected integer");
  return j.get<int>();
}

inline std::vector<int> as_ints(const json& j, const char* what) {
  if (!j.is_array()) throw SchemaError(std::string(what) + ": expected array of integers");
  std::vector<int> out;
  for (const auto& v : j) out.push_back(as_int(v, what));
  return out;
}

inline Complex as_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw SchemaError("complex value must be a number or an [re, im] pair");
}

inline CVector as_vector(const json& j, Eigen::Index dim, const char* what) {
  if (!j.is_array()) throw SchemaError(std::string(what) + ": expected array");
  if (static_cast<Eigen::Index>(j.size()) != dim) {
    throw SchemaError(std::string(what) + ": expected length " + std::to_string(dim) + ", got " +
                      std::to_string(j.size()));
  }
  CVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = as_complex(j[static_cast<std::size_t>(i)]);
  return v;
}

inline std::vector<CVector> as_vectors(const json& j, Eigen::Index dim, const char* what) {
  if (!j.is_array() || j.empty()) throw SchemaError(std::string(what) + ": expected nonempty array");
  std::vector<CVector> out;
  for (const auto& v : j) out.push_back(as_vector(v, dim, what));
  return out;
}

/// Row-major matrix, either as a list of rows or as a flat list of dim^2 entries.
inline CMatrix as_matrix(const json& j, int dim, const char* what) {
  if (!j.is_array()) throw SchemaError(std::string(what) + ": expected array");
  CMatrix m(dim, dim);
  const bool rows = static_cast<int>(j.size()) == dim &&
                    std::all_of(j.begin(), j.end(), [&](const json& row) {
                      return row.is_array() && static_cast<int>(row.size()) == dim;
                    });
  if (rows) {
    for (int i = 0; i < dim; ++i) m.row(i) = as_vector(j[static_cast<std::size_t>(i)], dim, what).transpose();
    return m;
  }
  if (static_cast<int>(j.size()) != dim * dim) {
    throw SchemaError(std::string(what) + ": expected " + std::to_string(dim) + " rows or " +
                      std::to_string(dim * dim) + " entries");
  }
  for (int i = 0; i < dim * dim; ++i) m(i / dim, i % dim) = as_complex(j[static_cast<std::size_t>(i)]);
  return m;
}

inline LinearOperator as_operator(const json& j, int dim, const char* what) {
  try {
    return LinearOperator(as_matrix(j, dim, what));
  } catch (const RankError& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
}

inline spectral::FiniteSequence as_sequence(const json& j, const std::string& name) {
  const auto& values = field(j, "values");
  if (!values.is_array() || values.empty()) throw SchemaError("sequence " + name + ": empty values");
  std::vector<Complex> v;
  for (const auto& e : values) v.push_back(as_complex(e));
  const int offset = j.contains("offset") ? as_int(j.at("offset"), "offset") : 0;
  return {offset, std::move(v)};
}

inline const spectral::FiniteSequence& lookup(const ShiftProblem& p, const json& name) {
  if (!name.is_string()) throw SchemaError("sequence reference must be a name");
  auto it = p.sequences.find(name.get<std::string>());
  if (it == p.sequences.end()) throw SchemaError("unknown sequence \"" + name.get<std::string>() + "\"");
  return it->second;
}

inline std::vector<spectral::FiniteSequence> lookup_all(const ShiftProblem& p, const json& names,
                                                        const char* what) {
  if (!names.is_array() || names.empty()) throw SchemaError(std::string(what) + ": expected names");
  std::vector<spectral::FiniteSequence> out;
  for (const auto& n : names) out.push_back(lookup(p, n));
  return out;
}

inline std::vector<lca::Element> as_elements(const json& j, std::size_t rank, const char* what) {
  if (!j.is_array()) throw SchemaError(std::string(what) + ": expected array of elements");
  std::vector<lca::Element> out;
  for (const auto& e : j) {
    auto v = as_ints(e, what);
    if (v.size() != rank) throw SchemaError(std::string(what) + ": element has wrong rank");
    out.push_back(std::move(v));
  }
  return out;
}

inline CyclicProblem parse_cyclic(const json& j) {
  CyclicProblem p;
  const int dim = as_int(field(j, "dimension"), "dimension");
  if (dim <= 0) throw SchemaError("dimension must be positive");
  p.op = as_operator(field(j, "operator"), dim, "operator");
  p.generators = as_vectors(field(j, "generators"), dim, "generators");
  p.orders = as_ints(field(j, "orders"), "orders");
  if (p.orders.size() != p.generators.size()) throw SchemaError("orders: one order per generator required");
  p.samplers = as_vectors(field(j, "samplers"), dim, "samplers");
  p.r = as_int(field(j, "r"), "r");
  if (j.contains("truth")) p.truth = as_vector(j.at("truth"), dim, "truth");
  return p;
}

inline ShiftProblem parse_shift(const json& j) {
  ShiftProblem p;
  p.r = j.contains("r") ? as_int(j.at("r"), "r") : 1;
  if (p.r <= 0) throw SchemaError("r must be positive");
  p.grid = j.contains("grid") ? as_int(j.at("grid"), "grid") : 0;
  const auto& seqs = field(j, "sequences");
  if (!seqs.is_object()) throw SchemaError("sequences: expected object of named sequences");
  for (const auto& [name, value] : seqs.items()) p.sequences.emplace(name, as_sequence(value, name));
  if (j.contains("spectra")) {
    const auto& rows = j.at("spectra");
    if (!rows.is_array() || rows.empty()) throw SchemaError("spectra: expected [sampler][generator] names");
    for (const auto& row : rows) p.spectra.push_back(lookup_all(p, row, "spectra"));
    for (const auto& row : p.spectra) {
      if (row.size() != p.spectra.front().size()) throw SchemaError("spectra: ragged table");
    }
  }
  if (j.contains("filter_bank")) {
    const auto& fbj = j.at("filter_bank");
    spectral::FilterBank fb;
    fb.r = p.r;
    fb.analysis = lookup_all(p, field(fbj, "analysis"), "analysis");
    fb.synthesis = lookup_all(p, field(fbj, "synthesis"), "synthesis");
    try {
      fb.validate();
    } catch (const std::exception& e) {
      throw SchemaError(std::string("filter_bank: ") + e.what());
    }
    p.filter_bank = std::move(fb);
  }
  if (p.spectra.empty() && !p.filter_bank) throw SchemaError("shift model needs \"spectra\" or \"filter_bank\"");
  return p;
}

inline LcaProblem parse_lca(const json& j) {
  LcaProblem p;
  const int dim = as_int(field(j, "dimension"), "dimension");
  if (dim <= 0) throw SchemaError("dimension must be positive");
  const auto& group = field(j, "group");
  p.moduli = as_ints(field(group, "moduli"), "moduli");
  if (p.moduli.empty()) throw SchemaError("moduli: at least one factor required");
  for (int d : p.moduli) {
    if (d <= 0) throw SchemaError("moduli must be positive");
  }
  p.H_gens = as_elements(field(group, "H_gens"), p.moduli.size(), "H_gens");
  p.M_gens = as_elements(field(group, "M_gens"), p.moduli.size(), "M_gens");
  const auto& ops = field(j, "operators");
  if (!ops.is_array() || ops.size() != p.moduli.size()) {
    throw SchemaError("operators: one operator per group factor required");
  }
  for (const auto& m : ops) p.operators.push_back(as_operator(m, dim, "operators"));
  const auto gens = as_vectors(field(j, "generators"), dim, "generators");
  if (gens.size() != 1) throw SchemaError("generators: the group model takes a single generator");
  p.generator = gens.front();
  p.samplers = as_vectors(field(j, "samplers"), dim, "samplers");
  if (j.contains("truth")) p.truth = as_vector(j.at("truth"), dim, "truth");
  return p;
}

}  // namespace detail

inline ProblemFile parse_problem(const json& j) {
  ProblemFile pf;
  const auto& model = detail::field(j, "model");
  if (!model.is_string()) throw SchemaError("model must be a string");
  pf.model = model.get<std::string>();
  if (pf.model == "cyclic") {
    pf.cyclic = detail::parse_cyclic(j);
  } else if (pf.model == "shift") {
    pf.shift = detail::parse_shift(j);
  } else if (pf.model == "lca") {
    pf.lca = detail::parse_lca(j);
  } else {
    throw SchemaError("model must be one of cyclic, shift, lca");
  }
  return pf;
}

inline ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  return parse_problem(j);
}

/// Shortest form that is still 17 significant digits: round trips bit for bit.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && *first == ' ') ++first;
  if (first < last && *first == '+') ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) throw SchemaError("CSV: bad number \"" + s + "\"");
  return v;
}

inline void write_csv(std::ostream& os, const CVector& v, int first_index = 0) {
  os << "index,re,im\n";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    os << first_index + i << ',' << format_double(v(i).real()) << ',' << format_double(v(i).imag()) << '\n';
  }
}

inline void write_csv(const std::string& path, const CVector& v, int first_index = 0) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_csv(out, v, first_index);
}

inline CVector read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw SchemaError("CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "index,re,im") throw SchemaError("CSV: expected header index,re,im");
  std::vector<Complex> values;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 3) throw SchemaError("CSV: expected 3 columns in \"" + line + "\"");
    values.emplace_back(parse_double(cells[1]), parse_double(cells[2]));
  }
  return Eigen::Map<CVector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

inline CVector read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  return read_csv(in);
}

}  // namespace gsamp::io
