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


#include "qpf/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

#include "qpf/random.hpp"

namespace qpf {
namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, fmt::format("cannot write '{}'", path.string()));
  out << content;
  out.close();
  if (!out) throw Error(ErrorCode::Io, fmt::format("write failed for '{}'", path.string()));
}

void make_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::Io, fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
  }
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

struct Frame {
  double width = 820, height = 500;
  double left = 70, right = 150, top = 40, bottom = 60;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;

  double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
  double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

// Rounds the upper axis limit to 1, 2 or 5 times a power of ten.
double nice_ceiling(double v) {
  if (!(v > 0.0)) return 1.0;
  const double p = std::pow(10.0, std::floor(std::log10(v)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * p >= v) return m * p;
  }
  return 10.0 * p;
}

}  // namespace

std::string library_version() {
#ifdef QPF_VERSION
  return QPF_VERSION;
#else
  return "unknown";
#endif
}

std::string format_real(double value) { return fmt::format("{:.17g}", value); }

std::string comparison_csv(const ComparisonReport& report) {
  std::string out = "time";
  for (Variant v : report.variants) {
    out += fmt::format(",mean_{0},std_{0}", short_name(v));
  }
  out += '\n';
  if (report.variants.empty()) return out;
  for (std::size_t j = 0; j < report.times.size(); ++j) {
    out += format_real(report.times[j]);
    for (std::size_t v = 0; v < report.variants.size(); ++v) {
      out += ',';
      out += format_real(report.mean[v][j]);
      out += ',';
      out += format_real(report.stddev[v][j]);
    }
    out += '\n';
  }
  return out;
}

std::string path_summary_csv(const ComparisonReport& report) {
  std::string out = "path,stream_id,record_checksum,status";
  for (Variant v : report.variants) out += fmt::format(",avg_{}", short_name(v));
  out += '\n';
  for (const auto& p : report.paths) {
    out += fmt::format("{},{},{:016x},{}", p.path, p.stream_id, p.record_checksum,
                       p.accepted ? "ok" : "failed");
    for (std::size_t v = 0; v < report.variants.size(); ++v) {
      out += ',';
      if (p.accepted) out += format_real(p.time_average[v]);
    }
    out += '\n';
  }
  return out;
}

std::string convergence_csv(const std::vector<ConvergenceStudyResult>& results) {
  std::string out = "order,delta,mse,bound,paths,seed\n";
  for (const auto& r : results) {
    for (std::size_t i = 0; i < r.horizons.size(); ++i) {
      out += fmt::format("{},{},{},{},{},{}\n", r.order, format_real(r.horizons[i]),
                         format_real(r.mse[i]), format_real(r.bound[i]), r.paths, r.seed);
    }
  }
  return out;
}

std::string comparison_svg(const ComparisonReport& report) {
  Frame f;
  if (!report.times.empty()) f.x1 = std::max(report.times.back(), 1e-12);
  double ymax = 0.0;
  for (std::size_t v = 0; v < report.variants.size(); ++v) {
    for (std::size_t j = 0; j < report.times.size(); ++j) {
      ymax = std::max(ymax, report.mean[v][j] + report.stddev[v][j]);
    }
  }
  f.y1 = nice_ceiling(ymax);

  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      f.width, f.height);

  // Axes and ticks.
  s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n",
                   f.px(f.x0), f.py(f.y0), f.px(f.x1));
  s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n",
                   f.px(f.x0), f.py(f.y0), f.py(f.y1));
  for (int i = 0; i <= 5; ++i) {
    const double x = f.x0 + (f.x1 - f.x0) * i / 5.0;
    const double y = f.y0 + (f.y1 - f.y0) * i / 5.0;
    s += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>"
        "<text x=\"{0:.2f}\" y=\"{3:.2f}\" text-anchor=\"middle\">{4:g}</text>\n",
        f.px(x), f.py(f.y0), f.py(f.y0) + 5, f.py(f.y0) + 20, x);
    s += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"black\"/>"
        "<text x=\"{3:.2f}\" y=\"{4:.2f}\" text-anchor=\"end\">{5:g}</text>\n",
        f.px(f.x0) - 5, f.py(y), f.px(f.x0), f.px(f.x0) - 8, f.py(y) + 4, y);
  }
  s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">time</text>\n",
                   (f.px(f.x0) + f.px(f.x1)) / 2, f.height - 15);
  s += fmt::format(
      "<text x=\"18\" y=\"{0:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0:.2f})\">"
      "Hilbert-Schmidt distance</text>\n",
      (f.py(f.y0) + f.py(f.y1)) / 2);
  s += fmt::format("<text x=\"{:.2f}\" y=\"24\" text-anchor=\"middle\">{} ({} paths)</text>\n",
                   (f.px(f.x0) + f.px(f.x1)) / 2, report.scenario, report.accepted);

  for (std::size_t v = 0; v < report.variants.size(); ++v) {
    const char* colour = kPalette[v % std::size(kPalette)];
    std::string band, line;
    for (std::size_t j = 0; j < report.times.size(); ++j) {
      band += fmt::format("{:.2f},{:.2f} ", f.px(report.times[j]),
                          f.py(report.mean[v][j] + report.stddev[v][j]));
    }
    for (std::size_t j = report.times.size(); j-- > 0;) {
      band += fmt::format("{:.2f},{:.2f} ", f.px(report.times[j]),
                          f.py(std::max(0.0, report.mean[v][j] - report.stddev[v][j])));
    }
    for (std::size_t j = 0; j < report.times.size(); ++j) {
      line += fmt::format("{:.2f},{:.2f} ", f.px(report.times[j]), f.py(report.mean[v][j]));
    }
    s += fmt::format("<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.15\" stroke=\"none\"/>\n",
                     band, colour);
    s += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
                     line, colour);
    const double ly = f.top + 20.0 * static_cast<double>(v);
    s += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"{3}\" "
        "stroke-width=\"2\"/><text x=\"{4:.2f}\" y=\"{5:.2f}\">{6}</text>\n",
        f.width - f.right + 15, ly, f.width - f.right + 40, colour, f.width - f.right + 45,
        ly + 4, to_string(report.variants[v]));
  }
  s += "</svg>\n";
  return s;
}

std::string trajectory_csv(const FilterTrajectory& trajectory) {
  std::string out = fmt::format("# filter {}\ntime,dY", trajectory.label);
  const bool full = trajectory.theta.empty();
  const std::size_t rows = full ? trajectory.states.size() : trajectory.theta.size();
  if (full && !trajectory.states.empty()) {
    const Eigen::Index n = trajectory.states.front().rows();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) out += fmt::format(",re_{0}_{1},im_{0}_{1}", i, j);
  } else if (!full) {
    for (Eigen::Index i = 0; i < trajectory.theta.front().size(); ++i) out += fmt::format(",theta_{}", i);
  }
  out += '\n';
  for (std::size_t k = 0; k < rows; ++k) {
    const double t = k < trajectory.times.size() ? trajectory.times[k]
                                                 : static_cast<double>(k) * trajectory.dt;
    out += format_real(t);
    out += ',';
    if (k < trajectory.observations.size()) out += format_real(trajectory.observations[k]);
    if (full) {
      const ComplexMatrix& s = trajectory.states[k];
      for (Eigen::Index i = 0; i < s.rows(); ++i)
        for (Eigen::Index j = 0; j < s.cols(); ++j)
          out += fmt::format(",{},{}", format_real(s(i, j).real()), format_real(s(i, j).imag()));
    } else {
      for (Eigen::Index i = 0; i < trajectory.theta[k].size(); ++i) {
        out += ',';
        out += format_real(trajectory.theta[k][i]);
      }
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string> emit_trajectories(const std::vector<FilterTrajectory>& trajectories,
                                           const std::filesystem::path& out_dir) {
  make_dir(out_dir);
  std::vector<std::string> files;
  for (const auto& t : trajectories) {
    std::string name = "trajectory_" + t.label + ".csv";
    write_file(out_dir / name, trajectory_csv(t));
    files.push_back(std::move(name));
  }
  return files;
}

std::string manifest_json(const RunManifest& manifest) {
  nlohmann::json doc{{"command", manifest.command},
                     {"digest", manifest.digest},
                     {"seed", manifest.seed},
                     {"version", manifest.version},
                     {"stream_ids", manifest.stream_ids},
                     {"files", manifest.files}};
  return doc.dump(2) + "\n";
}

RunManifest emit_report(const ComparisonReport& report, const std::filesystem::path& out_dir,
                        const std::vector<FilterTrajectory>& traces) {
  make_dir(out_dir);
  RunManifest manifest;
  manifest.command = "compare";
  manifest.digest = report.digest;
  manifest.seed = report.seed;
  manifest.version = library_version();
  for (const auto& p : report.paths) manifest.stream_ids.push_back(p.stream_id);

  write_file(out_dir / "comparison.csv", comparison_csv(report));
  write_file(out_dir / "paths.csv", path_summary_csv(report));
  write_file(out_dir / "comparison.svg", comparison_svg(report));
  manifest.files = {"comparison.csv", "paths.csv", "comparison.svg"};
  for (auto& f : emit_trajectories(traces, out_dir)) manifest.files.push_back(std::move(f));
  manifest.files.push_back("manifest.json");
  write_file(out_dir / "manifest.json", manifest_json(manifest));
  return manifest;
}

RunManifest emit_convergence(const std::vector<ConvergenceStudyResult>& results,
                             const Scenario& scenario, const std::filesystem::path& out_dir) {
  make_dir(out_dir);
  RunManifest manifest;
  manifest.command = "convergence";
  manifest.digest = scenario.digest;
  manifest.seed = results.empty() ? scenario.seed : results.front().seed;
  manifest.version = library_version();
  if (!results.empty()) {
    for (int p = 0; p < results.front().paths; ++p) {
      manifest.stream_ids.push_back(
          NoiseStream(manifest.seed, StreamKind::Convergence, static_cast<std::uint32_t>(p))
              .stream_id());
    }
  }
  write_file(out_dir / "convergence.csv", convergence_csv(results));
  manifest.files = {"convergence.csv", "manifest.json"};
  write_file(out_dir / "manifest.json", manifest_json(manifest));
  return manifest;
}

}  // namespace qpf
