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

// irsfd: Monte Carlo harness for IRS-assisted full-duplex beamforming.
//
//   irsfd --config configs/sweep_n.json --trials 50 --out rates.csv
//   irsfd --experiment iterations_table --accelerate on --format jsonl

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "irsfd/experiments.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint transmit/reflect beamforming for IRS-assisted full-duplex links"};

  std::string config_path;
  std::optional<std::string> kind;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string format = "csv";
  std::optional<std::string> accelerate;
  unsigned threads = 0;
  bool timing = false;

  app.add_option("--config", config_path, "JSON config (system parameters plus optional \"experiment\" block)")
      ->check(CLI::ExistingFile);
  app.add_option("--experiment", kind, "sweep_distance | sweep_n | sweep_m | iterations_table | single");
  app.add_option("--trials", trials, "Monte Carlo trials per sweep point")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "base seed");
  app.add_option("--out", out_path, "output file (stdout if omitted)");
  app.add_option("--format", format, "csv | jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  app.add_option("--accelerate", accelerate, "on | off: run the proposed method with/without acceleration")
      ->check(CLI::IsMember({"on", "off"}));
  app.add_option("--threads", threads, "worker threads (0 = hardware concurrency)");
  app.add_flag("--timing", timing, "record mean wall time per trial (output is then not byte-reproducible)");

  CLI11_PARSE(app, argc, argv);

  try {
    irsfd::ExperimentSpec spec =
        config_path.empty() ? irsfd::parse_experiment("{}") : irsfd::parse_experiment(read_file(config_path));
    if (kind) spec.kind = irsfd::parse_experiment_kind(*kind);
    if (trials) spec.trials = *trials;
    if (seed) spec.base.seed = *seed;
    if (accelerate) {
      const bool on = *accelerate == "on";
      for (auto& m : spec.methods) {
        if (m == irsfd::Method::Proposed || m == irsfd::Method::ProposedAccelerated)
          m = on ? irsfd::Method::ProposedAccelerated : irsfd::Method::Proposed;
      }
    }
    if (spec.kind != irsfd::ExperimentKind::SingleSolve && spec.values.empty()) {
      // Reference sweeps when the config does not list values.
      switch (spec.kind) {
        case irsfd::ExperimentKind::SweepDistance:
          spec.values = {0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
          break;
        case irsfd::ExperimentKind::SweepN:
        case irsfd::ExperimentKind::IterationsTable:
          spec.values = {20, 40, 60};
          break;
        case irsfd::ExperimentKind::SweepM:
          spec.values = {1, 2, 4, 6, 8};
          break;
        default:
          break;
      }
    }

    const auto fmt = irsfd::parse_output_format(format);
    const auto rows = irsfd::run_experiment(spec, {threads, timing});
    if (out_path.empty()) {
      std::cout << irsfd::format_results(rows, fmt);
    } else {
      irsfd::emit_results(rows, out_path, fmt);
    }
  } catch (const std::exception& e) {
    std::cerr << "irsfd: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
