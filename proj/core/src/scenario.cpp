// Copyright 2026 The qprojfilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qpf/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

#include <fmt/format.h>
#include <json.hpp>

#include "fnv.hpp"

namespace qpf {
namespace {

using nlohmann::json;

[[noreturn]] void invalid(std::string_view field, std::string_view what) {
  throw Error(ErrorCode::InvalidScenario, fmt::format("{}: {}", field, what));
}

const json& require(const json& obj, const char* field, std::string_view where = {}) {
  auto it = obj.find(field);
  if (it == obj.end()) {
    invalid(where.empty() ? std::string(field) : fmt::format("{}.{}", where, field),
            "missing field");
  }
  return *it;
}

Complex parse_entry(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  invalid(where, "expected a number or a [re, im] pair");
}

ComplexMatrix parse_matrix(const json& v, int dim, const std::string& field) {
  if (!v.is_array() || static_cast<int>(v.size()) != dim) {
    invalid(field, fmt::format("expected {} rows", dim));
  }
  ComplexMatrix out(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      invalid(fmt::format("{}[{}]", field, i), fmt::format("expected {} entries", dim));
    }
    for (int j = 0; j < dim; ++j) {
      out(i, j) = parse_entry(row[static_cast<std::size_t>(j)],
                              fmt::format("{}[{}][{}]", field, i, j));
    }
  }
  return out;
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class T>
T get_number(const json& obj, const char* field, T fallback) {
  auto it = obj.find(field);
  if (it == obj.end()) return fallback;
  if constexpr (std::is_floating_point_v<T>) {
    if (!it->is_number()) invalid(field, "expected a number");
  } else {
    if (!it->is_number_integer() && !it->is_number_unsigned()) invalid(field, "expected an integer");
  }
  return it->get<T>();
}

// Wraps construction errors of nested objects with the field they came from.
template <class Fn>
auto with_field(std::string_view field, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidScenario) throw;
    throw Error(ErrorCode::InvalidScenario,
                fmt::format("{}: {}", field, e.what()), e.defect());
  }
}

json canonical(const Scenario& s) {
  json gens = json::array();
  for (const auto& a : s.chart.generators()) gens.push_back(matrix_to_json(a));
  json filters = json::array();
  for (Variant v : s.filters) filters.push_back(std::string(short_name(v)));
  return json{{"name", s.name},
              {"dim", s.model.dim()},
              {"hamiltonian", matrix_to_json(s.model.hamiltonian())},
              {"coupling", matrix_to_json(s.model.coupling())},
              {"rho0", matrix_to_json(s.chart.base_state())},
              {"chart", {{"generators", gens}}},
              {"T", s.horizon},
              {"log2_steps", s.log2_steps},
              {"substeps", s.substeps},
              {"paths", s.paths},
              {"seed", s.seed},
              {"filters", filters}};
}

std::string digest_of(const Scenario& s) {
  // The name is a label, not part of the experiment.
  json c = canonical(s);
  c.erase("name");
  return detail::hex16(detail::fnv1a(c.dump()));
}

}  // namespace

Scenario parse_scenario(std::string_view json_text, std::string name) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, fmt::format("{}: {}", name, e.what()));
  }
  if (!doc.is_object()) invalid("<root>", "expected a JSON object");

  if (auto it = doc.find("name"); it != doc.end() && it->is_string()) name = it->get<std::string>();

  const json& dim_field = require(doc, "dim");
  if (!dim_field.is_number_integer() || dim_field.get<int>() < 1 || dim_field.get<int>() > 64) {
    invalid("dim", "expected an integer in [1, 64]");
  }
  const int dim = dim_field.get<int>();

  const ComplexMatrix hamiltonian = parse_matrix(require(doc, "hamiltonian"), dim, "hamiltonian");
  const ComplexMatrix coupling = parse_matrix(require(doc, "coupling"), dim, "coupling");
  const ComplexMatrix rho0 = parse_matrix(require(doc, "rho0"), dim, "rho0");

  const json& chart_field = require(doc, "chart");
  if (!chart_field.is_object()) invalid("chart", "expected an object");
  const json& gens_field = require(chart_field, "generators", "chart");
  if (!gens_field.is_array() || gens_field.empty()) {
    invalid("chart.generators", "expected a non-empty list of matrices");
  }
  std::vector<ComplexMatrix> generators;
  for (std::size_t i = 0; i < gens_field.size(); ++i) {
    generators.push_back(
        parse_matrix(gens_field[i], dim, fmt::format("chart.generators[{}]", i)));
  }

  const double horizon = get_number<double>(doc, "T", kDefaultHorizon);
  if (!(horizon > 0.0) || !std::isfinite(horizon)) invalid("T", "must be positive and finite");
  const int log2_steps = get_number<int>(doc, "log2_steps", kDefaultLog2Steps);
  if (log2_steps < 1 || log2_steps > kMaxLog2Steps) {
    invalid("log2_steps", fmt::format("must lie in [1, {}]", kMaxLog2Steps));
  }
  const int substeps = get_number<int>(doc, "substeps", kDefaultSubsteps);
  if (substeps < 1 || (substeps & (substeps - 1)) != 0 || substeps > (1 << log2_steps)) {
    invalid("substeps", "must be a power of two not exceeding 2^log2_steps");
  }
  const int paths = get_number<int>(doc, "paths", kDefaultPaths);
  if (paths < 1) invalid("paths", "must be at least 1");
  std::uint64_t seed = kDefaultSeed;
  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<long long>() >= 0)) {
      invalid("seed", "expected a non-negative integer");
    }
    seed = it->get<std::uint64_t>();
  }

  std::vector<Variant> filters{Variant::NewStratonovich, Variant::Baseline};
  if (auto it = doc.find("filters"); it != doc.end()) {
    if (!it->is_array()) invalid("filters", "expected a list of names");
    filters.clear();
    for (const auto& f : *it) {
      if (!f.is_string()) invalid("filters", "expected a list of names");
      auto v = parse_variant(f.get<std::string>());
      if (!v) invalid("filters", fmt::format("unknown filter '{}'", f.get<std::string>()));
      filters.push_back(*v);
    }
  }

  SystemModel model = with_field("hamiltonian/coupling", [&] {
    return SystemModel(hamiltonian, coupling);
  });
  Chart chart = with_field("chart", [&] { return Chart(generators, rho0); });

  Scenario out{std::move(name), std::move(model), std::move(chart), horizon, log2_steps,
               substeps,        paths,            seed,             std::move(filters), {}};
  out.digest = digest_of(out);
  return out;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open scenario '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.stem().string());
}

std::filesystem::path default_scenario_dir() {
  if (const char* env = std::getenv("QPF_SCENARIO_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
#ifdef QPF_DEFAULT_SCENARIO_DIR
  // Source tree first, then the installed data directory.
  std::error_code ec;
  if (std::filesystem::is_directory(QPF_DEFAULT_SCENARIO_DIR, ec)) return QPF_DEFAULT_SCENARIO_DIR;
#endif
#ifdef QPF_INSTALLED_SCENARIO_DIR
  return QPF_INSTALLED_SCENARIO_DIR;
#else
  return "scenarios";
#endif
}

Scenario four_level_scenario(double offdiag) {
  const int n = 4;
  ComplexMatrix coupling = ComplexMatrix::Zero(n, n);
  const double levels[n] = {1.0, -1.0, 1.0, -1.0};
  for (int i = 0; i < n; ++i) coupling(i, i) = levels[i];
  coupling(3, 0) = offdiag;
  ComplexMatrix rho0 = ComplexMatrix::Zero(n, n);
  rho0(0, 0) = rho0(1, 1) = 1.0 / 8.0;
  rho0(2, 2) = rho0(3, 3) = 3.0 / 8.0;
  std::vector<ComplexMatrix> generators;
  for (int i = 0; i < n; ++i) {
    ComplexMatrix a = ComplexMatrix::Zero(n, n);
    a(i, i) = 1.0;
    generators.push_back(std::move(a));
  }
  Scenario out{offdiag == 0.0 ? "four_level_selfadjoint" : "four_level",
               SystemModel(ComplexMatrix::Zero(n, n), coupling),
               Chart(std::move(generators), rho0),
               kDefaultHorizon,
               kDefaultLog2Steps,
               kDefaultSubsteps,
               kDefaultPaths,
               kDefaultSeed,
               {Variant::NewStratonovich, Variant::Baseline, Variant::NewIto},
               {}};
  out.digest = digest_of(out);
  return out;
}

std::string scenario_to_json(const Scenario& scenario) { return canonical(scenario).dump(2); }

}  // namespace qpf
