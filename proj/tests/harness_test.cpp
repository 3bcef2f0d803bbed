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


#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "qpf/comparison.hpp"
#include "qpf/convergence.hpp"
#include "qpf/projection_filter.hpp"
#include "qpf/report.hpp"
#include "qpf/scenario.hpp"
#include "qpf/validate.hpp"
#include "test_support.hpp"

namespace qpf {
namespace {

using testing::max_abs_diff;

// Short horizon, coarse grid: the same model at a fraction of the cost.
Scenario small(Scenario s, int paths = 6) {
  s.horizon = 1.0;
  s.log2_steps = 8;
  s.paths = paths;
  return s;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("qpf_harness_" + name + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
  std::filesystem::remove_all(dir);
  return dir;
}

ErrorCode code_of(const std::string& json) {
  try {
    parse_scenario(json);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for " << json;
  return ErrorCode::InvalidArgument;
}

TEST(Scenario, BundledFourLevel) {
  const Scenario s = load_scenario(default_scenario_dir() / "four_level.json");
  EXPECT_EQ(s.name, "four_level");
  EXPECT_LT(s.model.hamiltonian().norm(), 1e-15);
  EXPECT_LT(max_abs_diff(s.model.coupling(), testing::four_level_coupling(0.3)), 1e-15);
  EXPECT_LT(max_abs_diff(s.chart.base_state(), testing::four_level_rho0()), 1e-15);
  ASSERT_EQ(s.chart.dim_m(), 4);
  for (int i = 0; i < 4; ++i) EXPECT_LT(max_abs_diff(s.chart.generator(i), testing::unit(4, i, i)), 1e-15);
  EXPECT_DOUBLE_EQ(s.horizon, 5.0);
  EXPECT_DOUBLE_EQ(s.fine_step(), 5.0 / 4096);
  EXPECT_DOUBLE_EQ(s.step(), 2 * s.fine_step());
  EXPECT_EQ(s.steps(), 2048);
  EXPECT_EQ(s.digest, four_level_scenario(0.3).digest);
}

TEST(Scenario, BundledSelfAdjoint) {
  const Scenario s = load_scenario(default_scenario_dir() / "four_level_selfadjoint.json");
  EXPECT_LT(max_abs_diff(s.model.coupling(), testing::four_level_coupling(0.0)), 1e-15);
  EXPECT_EQ(s.digest, four_level_scenario(0.0).digest);
  EXPECT_NE(s.digest, four_level_scenario(0.3).digest);
}

TEST(Scenario, DefaultsAndRoundTrip) {
  const std::string minimal = R"({"dim": 2, "hamiltonian": [[0, 0], [0, 0]],
    "coupling": [[1, 0], [0, -1]], "rho0": [[0.5, 0], [0, 0.5]],
    "chart": {"generators": [[[1, 0], [0, 0]]]}})";
  const Scenario s = parse_scenario(minimal, "mini");
  EXPECT_EQ(s.name, "mini");
  EXPECT_DOUBLE_EQ(s.horizon, kDefaultHorizon);
  EXPECT_EQ(s.log2_steps, kDefaultLog2Steps);
  EXPECT_EQ(s.substeps, kDefaultSubsteps);
  EXPECT_EQ(s.paths, kDefaultPaths);
  EXPECT_EQ(s.seed, kDefaultSeed);
  EXPECT_EQ(s.filters, (std::vector<Variant>{Variant::NewStratonovich, Variant::Baseline}));
  const Scenario back = parse_scenario(scenario_to_json(s));
  EXPECT_EQ(back.digest, s.digest);
  EXPECT_EQ(back.name, "mini");
  const Scenario renamed = parse_scenario(minimal, "other");
  EXPECT_EQ(renamed.digest, s.digest);
}

TEST(Scenario, FieldLevelDiagnostics) {
  const std::string base = R"("dim": 2, "hamiltonian": [[0, 0], [0, 0]],
    "coupling": [[1, 0], [0, -1]], "rho0": [[0.5, 0], [0, 0.5]])";
  try {
    parse_scenario("{" + base + "}");
    FAIL() << "expected InvalidScenario";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidScenario);
    EXPECT_EQ(e.message().rfind("chart", 0), 0u) << e.message();
  }
  const std::string chart = R"(, "chart": {"generators": [[[1, 0], [0, 0]]]})";
  EXPECT_EQ(code_of("{" + base), ErrorCode::ParseError);
  EXPECT_EQ(code_of("{" + base + chart + R"(, "substeps": 3})"), ErrorCode::InvalidScenario);
  EXPECT_EQ(code_of("{" + base + chart + R"(, "paths": 0})"), ErrorCode::InvalidScenario);
  EXPECT_EQ(code_of("{" + base + chart + R"(, "filters": ["new", "nope"]})"), ErrorCode::InvalidScenario);
  EXPECT_EQ(code_of("{" + base + chart + R"(, "T": -1})"), ErrorCode::InvalidScenario);
  EXPECT_EQ(code_of(R"({"dim": 2, "hamiltonian": [[0, 1], [0, 0]], "coupling": [[1, 0], [0, -1]],
    "rho0": [[0.5, 0], [0, 0.5]])" + chart + "}"),
            ErrorCode::InvalidScenario);
  EXPECT_EQ(code_of(R"({"dim": 2, "hamiltonian": [[0, 0], [0, 0]], "coupling": [[1, 0], [0, -1]],
    "rho0": [[0.5, 0], [0, 0.5]], "chart": {"generators": [[[0, 1], [1, 0]], [[1, 0], [0, 0]]]}})"),
            ErrorCode::InvalidScenario);
  try {
    load_scenario("/nonexistent/scenario.json");
    FAIL() << "expected Io";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
}

TEST(Comparison, SeriesShapeAndInitialDistance) {
  const Scenario s = small(four_level_scenario(0.3));
  ComparisonOptions opt;
  opt.keep_series = true;
  const ComparisonReport r = run_comparison(s, opt);
  EXPECT_EQ(r.accepted, 6);
  EXPECT_EQ(r.failed, 0);
  EXPECT_FALSE(r.run_failed());
  EXPECT_EQ(r.variants, s.filters);
  EXPECT_EQ(r.times.size(), static_cast<std::size_t>(s.steps() + 1));
  for (const auto& p : r.paths) {
    ASSERT_EQ(p.distance.size(), r.variants.size());
    for (const auto& series : p.distance) {
      ASSERT_EQ(series.size(), r.times.size());
      EXPECT_LT(series.front(), 1e-15);
      EXPECT_TRUE(std::all_of(series.begin(), series.end(), [](double d) { return d >= 0.0; }));
    }
  }
  EXPECT_GE(r.min_eigenvalue, -1e-8);
  EXPECT_LE(r.max_trace_defect, 1e-8);
  ASSERT_TRUE(r.win_rate.has_value());
}

TEST(Comparison, EnsembleIsOrderIndependent) {
  const Scenario s = small(four_level_scenario(0.3));
  ComparisonOptions opt;
  opt.keep_series = true;
  const ComparisonReport r = run_comparison(s, opt);
  for (std::size_t v = 0; v < r.variants.size(); ++v) {
    double reversed = 0.0;
    for (auto it = r.paths.rbegin(); it != r.paths.rend(); ++it) reversed += it->time_average[v];
    reversed /= static_cast<double>(r.paths.size());
    EXPECT_NEAR(r.time_average[v], reversed, 1e-15);
  }
}

TEST(Comparison, SelfAdjointNewMatchesBaselinePerPath) {
  const Scenario s = small(four_level_scenario(0.0));
  ComparisonOptions opt;
  opt.keep_series = true;
  opt.filters = std::vector<Variant>{Variant::NewStratonovich, Variant::Baseline};
  const ComparisonReport r = run_comparison(s, opt);
  for (const auto& p : r.paths) {
    ASSERT_TRUE(p.accepted);
    for (std::size_t j = 0; j < p.distance[0].size(); ++j)
      EXPECT_NEAR(p.distance[0][j], p.distance[1][j], 1e-10);
  }
}

TEST(Comparison, ByteIdenticalAcrossRunsAndWorkerCounts) {
  const Scenario s = small(four_level_scenario(0.3));
  ComparisonOptions one;
  one.workers = 1;
  ComparisonOptions many;
  many.workers = 3;
  const ComparisonReport a = run_comparison(s, one);
  const ComparisonReport b = run_comparison(s, many);
  const ComparisonReport c = run_comparison(s, one);
  EXPECT_EQ(comparison_csv(a), comparison_csv(b));
  EXPECT_EQ(comparison_csv(a), comparison_csv(c));
  EXPECT_EQ(path_summary_csv(a), path_summary_csv(b));
  ComparisonOptions other = one;
  other.seed = s.seed + 1;
  EXPECT_NE(comparison_csv(a), comparison_csv(run_comparison(s, other)));
}

TEST(Comparison, EveryFilterConsumesTheQuantumFilterRecord) {
  const Scenario s = small(four_level_scenario(0.3));
  const auto traces = trace_path(s, s.seed, 2, s.filters);
  ASSERT_EQ(traces.size(), s.filters.size() + 1);
  EXPECT_EQ(traces.front().label, "quantum");
  for (const auto& t : traces) EXPECT_EQ(t.observations, traces.front().observations);
  ComparisonOptions opt;
  const ComparisonReport r = run_comparison(s, opt);
  const auto& obs = traces.front().observations;
  // Recorded checksum equals the traced path's record.
  EXPECT_EQ(r.paths[2].record_checksum, [&] {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (double v : obs) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      for (int i = 0; i < 8; ++i) {
        h ^= (bits >> (8 * i)) & 0xffu;
        h *= 0x100000001b3ULL;
      }
    }
    return h;
  }());
}

TEST(Comparison, ProjectionFilterHasNoLookAhead) {
  const Scenario s = small(four_level_scenario(0.3));
  const auto traces = trace_path(s, s.seed, 0, {});
  const auto& dy = traces.front().observations;
  const std::span<const double> prefix(dy.data(), dy.size() / 2);
  for (Variant v : {Variant::NewStratonovich, Variant::Baseline, Variant::NewIto}) {
    const auto full = integrate_projection_filter(s.chart, s.model, v, dy, s.step());
    const auto part = integrate_projection_filter(s.chart, s.model, v, prefix, s.step());
    for (std::size_t j = 0; j < part.theta.size(); ++j) EXPECT_EQ(full.theta[j], part.theta[j]);
  }
}

TEST(Report, CsvFormats) {
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
  ComparisonReport empty;
  EXPECT_EQ(comparison_csv(empty), "time\n");
  const Scenario s = small(four_level_scenario(0.3), 2);
  const ComparisonReport r = run_comparison(s);
  const std::string csv = comparison_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "time,mean_new,std_new,mean_old,std_old,mean_ito,std_ito");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), s.steps() + 2);
  EXPECT_EQ(convergence_csv({}), "order,delta,mse,bound,paths,seed\n");
  const auto traces = trace_path(s, s.seed, 0, {Variant::NewStratonovich});
  const std::string tq = trajectory_csv(traces[0]);
  const std::string tn = trajectory_csv(traces[1]);
  EXPECT_EQ(tq.rfind("# filter quantum\ntime,dY,re_0_0,im_0_0,", 0), 0u);
  EXPECT_EQ(tn.rfind("# filter new\ntime,dY,theta_0,theta_1,theta_2,theta_3\n", 0), 0u);
  EXPECT_EQ(std::count(tn.begin(), tn.end(), '\n'), s.steps() + 3);
}

TEST(Report, EmitWritesManifestFilesAndIsReproducible) {
  const Scenario s = small(four_level_scenario(0.3), 3);
  const auto dir_a = temp_dir("a");
  const auto dir_b = temp_dir("b");
  const ComparisonReport r = run_comparison(s);
  const RunManifest m = emit_report(r, dir_a, trace_path(s, s.seed, 0, r.variants));
  emit_report(run_comparison(s), dir_b, trace_path(s, s.seed, 0, r.variants));
  EXPECT_EQ(m.digest, s.digest);
  EXPECT_EQ(m.seed, s.seed);
  EXPECT_EQ(m.stream_ids.size(), 3u);
  for (const auto& f : m.files) {
    ASSERT_TRUE(std::filesystem::exists(dir_a / f)) << f;
    EXPECT_EQ(read_file(dir_a / f), read_file(dir_b / f)) << f;
  }
  const std::string svg = read_file(dir_a / "comparison.svg");
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  std::size_t polylines = 0;
  for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos) ++polylines;
  EXPECT_GE(polylines, r.variants.size());
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
}

TEST(Convergence, TrivialModelGivesZeroErrors) {
  Scenario s = four_level_scenario(0.3);
  s.model = SystemModel(ComplexMatrix::Zero(4, 4), ComplexMatrix::Zero(4, 4));
  ConvergenceRunOptions opt;
  opt.paths = 10;
  opt.orders = {1, 2};
  const auto results = run_convergence(s, opt);
  ASSERT_EQ(results.size(), 2u);
  for (const auto& r : results)
    for (double e : r.mse) EXPECT_LT(e, 1e-28);
  EXPECT_EQ(results[0].seed, s.seed);
}

TEST(Validate, FreshSuitePassesAndFaultsAreNamed) {
  const Scenario s = four_level_scenario(0.3);
  ValidateOptions opt;
  opt.samples = 20;
  const ValidationReport ok = run_validate(s, opt);
  EXPECT_TRUE(ok.passed()) << format_validation(ok);
  EXPECT_GE(ok.checks.size(), 12u);
  opt.fault = Fault::RemainderRule;
  const ValidationReport bad = run_validate(s, opt);
  EXPECT_FALSE(bad.passed());
  EXPECT_EQ(bad.failures(), std::vector<std::string>{"appendix-recursion"});
  opt.fault = Fault::DuplicateGenerator;
  const auto dup = run_validate(s, opt).failures();
  EXPECT_NE(std::find(dup.begin(), dup.end(), "fisher-spd"), dup.end());
  EXPECT_EQ(parse_fault("duplicate-generator"), Fault::DuplicateGenerator);
  EXPECT_FALSE(parse_fault("other").has_value());
}

}  // namespace
}  // namespace qpf
