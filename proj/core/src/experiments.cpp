// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "irsfd/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "irsfd/channel_model.hpp"
#include "irsfd/oracles.hpp"

namespace irsfd {

using nlohmann::json;

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::SweepDistance: return "sweep_distance";
    case ExperimentKind::SweepN: return "sweep_n";
    case ExperimentKind::SweepM: return "sweep_m";
    case ExperimentKind::IterationsTable: return "iterations_table";
    case ExperimentKind::SingleSolve: return "single";
  }
  return "unknown";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Proposed: return "proposed";
    case Method::ProposedAccelerated: return "proposed_accel";
    case Method::RandomPhase: return "random_phase";
    case Method::NoIrs: return "no_irs";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view s) {
  for (auto k : {ExperimentKind::SweepDistance, ExperimentKind::SweepN, ExperimentKind::SweepM,
                 ExperimentKind::IterationsTable, ExperimentKind::SingleSolve})
    if (s == to_string(k)) return k;
  throw std::invalid_argument("unknown experiment kind '" + std::string(s) + "'");
}

Method parse_method(std::string_view s) {
  for (auto m : {Method::Proposed, Method::ProposedAccelerated, Method::RandomPhase, Method::NoIrs})
    if (s == to_string(m)) return m;
  throw std::invalid_argument("unknown method '" + std::string(s) + "'");
}

OutputFormat parse_output_format(std::string_view s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "jsonl") return OutputFormat::Jsonl;
  throw std::invalid_argument("unknown output format '" + std::string(s) + "' (expected csv or jsonl)");
}

// ---------------------------------------------------------------------------

void ExperimentSpec::validate() const {
  if (trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
  if (random_phase_draws < 1) throw std::invalid_argument("experiment: random_phase_draws must be >= 1");
  if (methods.empty()) throw std::invalid_argument("experiment: no methods requested");
  if (cases.empty()) throw std::invalid_argument("experiment: no constraint cases requested");
  if (kind != ExperimentKind::SingleSolve && values.empty())
    throw std::invalid_argument("experiment: sweep needs at least one value");
  if (kind == ExperimentKind::IterationsTable) {
    for (Method m : methods)
      if (m != Method::Proposed && m != Method::ProposedAccelerated)
        throw std::invalid_argument("experiment: iterations_table supports proposed methods only");
  }
  for (std::size_t i = 0; i < std::max<std::size_t>(values.size(), 1); ++i) {
    SystemConfig cfg = config_at(*this, i);
    for (const auto& c : cases) {
      cfg.phase_constraint = c;
      cfg.validate();
    }
  }
}

SystemConfig config_at(const ExperimentSpec& spec, std::size_t point_index) {
  SystemConfig cfg = spec.base;
  if (spec.kind == ExperimentKind::SingleSolve || spec.values.empty()) return cfg;
  const double v = spec.values.at(point_index);
  switch (spec.kind) {
    case ExperimentKind::SweepDistance:
      cfg.d_s1i_h = v;
      break;
    case ExperimentKind::SweepN:
    case ExperimentKind::IterationsTable:
      if (v != std::floor(v)) throw std::invalid_argument("experiment: N sweep values must be integers");
      cfg.N = static_cast<int>(v);
      break;
    case ExperimentKind::SweepM:
      if (v != std::floor(v)) throw std::invalid_argument("experiment: M sweep values must be integers");
      cfg.M = static_cast<int>(v);
      break;
    case ExperimentKind::SingleSolve:
      break;
  }
  return cfg;
}

ExperimentSpec parse_experiment(std::string_view json_text) {
  ExperimentSpec spec;
  spec.base = parse_config(json_text);
  const json j = json::parse(json_text);
  const auto it = j.find("experiment");
  if (it == j.end()) return spec;
  const json& e = *it;
  if (!e.is_object()) throw std::invalid_argument("experiment: 'experiment' must be an object");
  try {
    if (e.contains("kind")) spec.kind = parse_experiment_kind(e["kind"].get<std::string>());
    if (e.contains("values")) spec.values = e["values"].get<std::vector<double>>();
    if (e.contains("trials")) spec.trials = e["trials"].get<int>();
    if (e.contains("random_phase_draws")) spec.random_phase_draws = e["random_phase_draws"].get<int>();
    for (const char* key : {"values", "methods", "cases"})
      if (e.contains(key) && !e[key].is_array())
        throw std::invalid_argument(std::string("experiment: '") + key + "' must be an array");
    if (e.contains("methods")) {
      spec.methods.clear();
      for (const auto& m : e["methods"]) spec.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (e.contains("cases")) {
      spec.cases.clear();
      for (const auto& c : e["cases"]) spec.cases.push_back(parse_phase_constraint(c.get<std::string>()));
    }
  } catch (const json::exception& ex) {
    throw std::invalid_argument(std::string("experiment: ") + ex.what());
  }
  spec.validate();
  return spec;
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t kAuxStream = 0xA5A5A5A5DEADBEEFULL;

TrialOutcome evaluate(const ChannelSet& ch, SystemConfig cfg, std::uint64_t cell_seed, Method method,
                      const PhaseConstraint& constraint, int random_phase_draws, bool timing) {
  cfg.phase_constraint = constraint;
  Rng aux(splitmix64(cell_seed ^ kAuxStream));
  TrialOutcome out;
  const auto t0 = std::chrono::steady_clock::now();
  switch (method) {
    case Method::Proposed:
    case Method::ProposedAccelerated: {
      const SolverOptions opts = SolverOptions::from(cfg, method == Method::ProposedAccelerated);
      const SolveResult res = solve(ch, cfg, opts, aux);
      out.rate = res.state.objective;
      out.iterations = res.trace.iterations;
      break;
    }
    case Method::RandomPhase:
      out.rate = random_phase_baseline(ch, cfg, aux, random_phase_draws);
      break;
    case Method::NoIrs:
      out.rate = no_irs_baseline(ch, cfg);
      break;
  }
  if (timing) out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
          return;
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

std::vector<ResultRow> run_grid(const ExperimentSpec& spec, const RunOptions& opts) {
  spec.validate();
  const std::size_t points = spec.kind == ExperimentKind::SingleSolve ? 1 : spec.values.size();
  const std::size_t trials = static_cast<std::size_t>(spec.trials);
  const std::size_t combos = spec.methods.size() * spec.cases.size();

  // outcomes[(point * trials + trial) * combos + combo]
  std::vector<TrialOutcome> outcomes(points * trials * combos);
  parallel_for(points * trials, opts.threads, [&](std::size_t task) {
    const std::size_t point = task / trials;
    const std::size_t trial = task % trials;
    const SystemConfig cfg = config_at(spec, point);
    const std::uint64_t cell_seed = derive_seed(spec.base.seed, point, trial);
    Rng rng(cell_seed);
    const ChannelSet ch = generate_channels(cfg, rng);
    for (std::size_t mi = 0; mi < spec.methods.size(); ++mi)
      for (std::size_t ci = 0; ci < spec.cases.size(); ++ci)
        outcomes[task * combos + mi * spec.cases.size() + ci] =
            evaluate(ch, cfg, cell_seed, spec.methods[mi], spec.cases[ci], spec.random_phase_draws, opts.timing);
  });

  std::vector<ResultRow> rows;
  for (std::size_t point = 0; point < points; ++point) {
    const double sweep_value = spec.kind == ExperimentKind::SingleSolve ? 0.0 : spec.values[point];
    for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
      for (std::size_t ci = 0; ci < spec.cases.size(); ++ci) {
        std::vector<double> rate, iters, time;
        for (std::size_t trial = 0; trial < trials; ++trial) {
          const auto& o = outcomes[(point * trials + trial) * combos + mi * spec.cases.size() + ci];
          rate.push_back(o.rate);
          iters.push_back(o.iterations);
          time.push_back(o.wall_time);
        }
        ResultRow row;
        row.sweep_value = sweep_value;
        row.method = to_string(spec.methods[mi]);
        row.case_name = to_string(spec.cases[ci]);
        row.mean_rate = mean_of(rate);
        row.std_rate = sample_std(rate);
        row.mean_iters = mean_of(iters);
        row.mean_time_s = mean_of(time);
        row.trials = spec.trials;
        row.seed_base = spec.base.seed;
        rows.push_back(std::move(row));
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.sweep_value, a.method, a.case_name) < std::tie(b.sweep_value, b.method, b.case_name);
  });
  return rows;
}

std::vector<ResultRow> run_kind(ExperimentSpec spec, ExperimentKind kind, const RunOptions& opts) {
  spec.kind = kind;
  return run_grid(spec, opts);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t point, std::uint64_t trial) {
  std::uint64_t x = splitmix64(base);
  x = splitmix64(x ^ splitmix64(point + 0x632BE59BD9B4E019ULL));
  x = splitmix64(x ^ splitmix64(trial + 0x8CB92BA72F3D8DD7ULL));
  return x;
}

TrialOutcome run_trial(const ExperimentSpec& spec, std::size_t point_index, int trial, Method method,
                       const PhaseConstraint& constraint) {
  const SystemConfig cfg = config_at(spec, point_index);
  const std::uint64_t cell_seed = derive_seed(spec.base.seed, point_index, static_cast<std::uint64_t>(trial));
  Rng rng(cell_seed);
  const ChannelSet ch = generate_channels(cfg, rng);
  return evaluate(ch, cfg, cell_seed, method, constraint, spec.random_phase_draws, false);
}

std::vector<ResultRow> run_sweep_distance(const ExperimentSpec& spec, const RunOptions& opts) {
  return run_kind(spec, ExperimentKind::SweepDistance, opts);
}
std::vector<ResultRow> run_sweep_n(const ExperimentSpec& spec, const RunOptions& opts) {
  return run_kind(spec, ExperimentKind::SweepN, opts);
}
std::vector<ResultRow> run_sweep_m(const ExperimentSpec& spec, const RunOptions& opts) {
  return run_kind(spec, ExperimentKind::SweepM, opts);
}
std::vector<ResultRow> run_iterations_table(const ExperimentSpec& spec, const RunOptions& opts) {
  return run_kind(spec, ExperimentKind::IterationsTable, opts);
}
std::vector<ResultRow> run_single(const ExperimentSpec& spec, const RunOptions& opts) {
  return run_kind(spec, ExperimentKind::SingleSolve, opts);
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, const RunOptions& opts) {
  return run_grid(spec, opts);
}

// ---------------------------------------------------------------------------
// Output

namespace {

constexpr const char* kCsvHeader =
    "sweep_value,method,case,mean_rate,std_rate,mean_iters,mean_time_s,trials,seed_base";

std::string g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string format_results(const std::vector<ResultRow>& rows, OutputFormat format) {
  std::string out;
  if (format == OutputFormat::Csv) {
    out += kCsvHeader;
    out += '\n';
    for (const auto& r : rows) {
      out += g6(r.sweep_value) + ',' + r.method + ',' + r.case_name + ',' + g6(r.mean_rate) + ',' + g6(r.std_rate) +
             ',' + g6(r.mean_iters) + ',' + g6(r.mean_time_s) + ',' + std::to_string(r.trials) + ',' +
             std::to_string(r.seed_base) + '\n';
    }
    return out;
  }
  for (const auto& r : rows) {
    out += "{\"sweep_value\":" + g6(r.sweep_value) + ",\"method\":\"" + r.method + "\",\"case\":\"" + r.case_name +
           "\",\"mean_rate\":" + g6(r.mean_rate) + ",\"std_rate\":" + g6(r.std_rate) +
           ",\"mean_iters\":" + g6(r.mean_iters) + ",\"mean_time_s\":" + g6(r.mean_time_s) +
           ",\"trials\":" + std::to_string(r.trials) + ",\"seed_base\":" + std::to_string(r.seed_base) + "}\n";
  }
  return out;
}

std::vector<ResultRow> parse_results(std::string_view text, OutputFormat format) {
  std::vector<ResultRow> rows;
  std::stringstream ss{std::string(text)};
  std::string line;
  if (format == OutputFormat::Csv) {
    if (!std::getline(ss, line) || line != kCsvHeader) throw std::invalid_argument("results: bad CSV header");
    while (std::getline(ss, line)) {
      if (line.empty()) continue;
      const auto f = split_csv(line);
      if (f.size() != 9) throw std::invalid_argument("results: expected 9 CSV fields in '" + line + "'");
      ResultRow r;
      r.sweep_value = std::stod(f[0]);
      r.method = f[1];
      r.case_name = f[2];
      r.mean_rate = std::stod(f[3]);
      r.std_rate = std::stod(f[4]);
      r.mean_iters = std::stod(f[5]);
      r.mean_time_s = std::stod(f[6]);
      r.trials = std::stoi(f[7]);
      r.seed_base = std::stoull(f[8]);
      rows.push_back(std::move(r));
    }
    return rows;
  }
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    ResultRow r;
    r.sweep_value = j.at("sweep_value").get<double>();
    r.method = j.at("method").get<std::string>();
    r.case_name = j.at("case").get<std::string>();
    r.mean_rate = j.at("mean_rate").get<double>();
    r.std_rate = j.at("std_rate").get<double>();
    r.mean_iters = j.at("mean_iters").get<double>();
    r.mean_time_s = j.at("mean_time_s").get<double>();
    r.trials = j.at("trials").get<int>();
    r.seed_base = j.at("seed_base").get<std::uint64_t>();
    rows.push_back(std::move(r));
  }
  return rows;
}

void emit_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path, OutputFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << format_results(rows, format);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace irsfd
