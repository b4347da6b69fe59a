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

namespace irsfd {

/// Feasible set of each IRS reflection coefficient.
struct PhaseConstraint {
  enum class Kind { UnitModulus, AmplitudeBounded, Discrete };

  Kind kind = Kind::UnitModulus;
  int bits = 0;  // only meaningful for Discrete

  static PhaseConstraint unit_modulus() { return {Kind::UnitModulus, 0}; }
  static PhaseConstraint amplitude_bounded() { return {Kind::AmplitudeBounded, 0}; }
  static PhaseConstraint discrete(int b) { return {Kind::Discrete, b}; }

  friend bool operator==(const PhaseConstraint&, const PhaseConstraint&) = default;
};

/// Short stable name ("unit", "amp", "discrete2", ...) used in result tables.
std::string to_string(const PhaseConstraint& c);
PhaseConstraint parse_phase_constraint(std::string_view name);

/// Scenario parameters for one point-to-point full-duplex link with an IRS.
///
/// Powers and noise are held in watts; configuration files carry them in
/// dBW and `load_config` converts once on load. Defaults reproduce the
/// reference simulation setup (M=4, N=40, 15 dBW, -80 dBW noise,
/// -30 dB at 1 m, PLE 2.5 for IRS links and 3.5 for the direct link,
/// -90 dB Rician(5 dB) loop interference).
struct SystemConfig {
  int M = 4;
  int N = 40;
  double P1 = 31.622776601683793;  // 15 dBW
  double P2 = 31.622776601683793;
  double sigma1_sq = 1e-8;  // -80 dBW
  double sigma2_sq = 1e-8;

  double d_s1s2 = 50.0;
  double d_s1i_h = 10.0;
  double d_v = 2.0;

  double pl_ref_db = -30.0;
  double d_ref = 1.0;
  double ple_s1i = 2.5;
  double ple_is2 = 2.5;
  double ple_s2i = 2.5;
  double ple_is1 = 2.5;
  double ple_direct = 3.5;
  double li_pl_db = -90.0;
  double rician_k_db = 5.0;

  PhaseConstraint phase_constraint = PhaseConstraint::unit_modulus();
  double epsilon = 1e-3;
  int max_iters = 500;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;
};

/// Parses a JSON document whose keys mirror the SystemConfig field names
/// (`m`, `n`, `p1`, `p2`, `sigma1_sq`, `sigma2_sq`, ...). `p*` and
/// `sigma*_sq` are read in dBW. Missing keys keep their defaults.
SystemConfig parse_config(std::string_view json_text);
SystemConfig load_config(const std::filesystem::path& path);

/// Inverse of parse_config (dBW on the wire).
std::string dump_config(const SystemConfig& cfg);

}  // namespace irsfd
