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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "irsfd/config.hpp"
#include "irsfd/solver.hpp"

namespace irsfd {

enum class ExperimentKind { SweepDistance, SweepN, SweepM, IterationsTable, SingleSolve };
enum class Method { Proposed, ProposedAccelerated, RandomPhase, NoIrs };

std::string to_string(ExperimentKind k);
std::string to_string(Method m);
ExperimentKind parse_experiment_kind(std::string_view s);
Method parse_method(std::string_view s);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::SingleSolve;
  /// d_s1i_h (SweepDistance), N (SweepN, IterationsTable) or M (SweepM).
  /// Ignored by SingleSolve.
  std::vector<double> values;
  int trials = 300;
  SystemConfig base;
  std::vector<Method> methods{Method::Proposed};
  std::vector<PhaseConstraint> cases{PhaseConstraint::unit_modulus()};
  /// Surfaces averaged per channel draw by the RandomPhase method.
  int random_phase_draws = 1;

  /// Throws std::invalid_argument if trials < 1, a sweep value breaks the
  /// config invariants, or IterationsTable asks for a non-proposed method.
  void validate() const;
};

/// Parses the `experiment` object of a config document:
/// {"kind": "sweep_n", "values": [...], "trials": 50, "methods": [...],
///  "cases": ["unit", "amp", "discrete2"]}. The rest of the document is the
/// base SystemConfig. Missing `experiment` gives a SingleSolve.
ExperimentSpec parse_experiment(std::string_view json_text);

struct ResultRow {
  double sweep_value = 0.0;
  std::string method;
  std::string case_name;
  double mean_rate = 0.0;
  double std_rate = 0.0;
  double mean_iters = 0.0;
  double mean_time_s = 0.0;
  int trials = 0;
  std::uint64_t seed_base = 0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

/// Seed of Monte Carlo cell (point, trial); a pure function so that any cell
/// can be recomputed alone. Channels for a cell are shared by every method
/// and case evaluated there.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t point, std::uint64_t trial);

struct TrialOutcome {
  double rate = 0.0;
  double iterations = 0.0;
  double wall_time = 0.0;
};

/// Config used at sweep point `point_index` (the sweep value applied to base).
SystemConfig config_at(const ExperimentSpec& spec, std::size_t point_index);

/// Runs a single Monte Carlo cell.
TrialOutcome run_trial(const ExperimentSpec& spec, std::size_t point_index, int trial, Method method,
                       const PhaseConstraint& constraint);

struct RunOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  bool timing = false;   // record wall time; off keeps output byte-reproducible
};

std::vector<ResultRow> run_sweep_distance(const ExperimentSpec& spec, const RunOptions& opts = {});
std::vector<ResultRow> run_sweep_n(const ExperimentSpec& spec, const RunOptions& opts = {});
std::vector<ResultRow> run_sweep_m(const ExperimentSpec& spec, const RunOptions& opts = {});
std::vector<ResultRow> run_iterations_table(const ExperimentSpec& spec, const RunOptions& opts = {});
std::vector<ResultRow> run_single(const ExperimentSpec& spec, const RunOptions& opts = {});

/// Dispatches on spec.kind. Rows are sorted by (sweep value, method, case).
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, const RunOptions& opts = {});

enum class OutputFormat { Csv, Jsonl };
OutputFormat parse_output_format(std::string_view s);

/// CSV header: sweep_value,method,case,mean_rate,std_rate,mean_iters,mean_time_s,trials,seed_base
/// Floating-point fields use 6 significant digits.
std::string format_results(const std::vector<ResultRow>& rows, OutputFormat format);
std::vector<ResultRow> parse_results(std::string_view text, OutputFormat format);

/// Writes format_results to `path`; throws std::runtime_error naming the path
/// on I/O failure.
void emit_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path, OutputFormat format);

}  // namespace irsfd
