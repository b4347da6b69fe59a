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

#include <string>

#include "irsfd/beamforming.hpp"
#include "irsfd/channel_model.hpp"
#include "irsfd/config.hpp"

namespace irsfd {

// Reference implementations used to cross-check the core updates, and the
// comparison schemes reported next to the optimized design.

/// Mean converged sum rate over `trials` surfaces with i.i.d. uniform phases.
/// Each surface is held fixed while w1, w2 are optimized by alternating
/// transmit updates (MRT start). Uses cfg.epsilon / cfg.max_iters. Under a
/// Discrete constraint the random phases are snapped to the level grid.
double random_phase_baseline(const ChannelSet& ch, const SystemConfig& cfg, Rng& rng, int trials);

/// Sum rate with the surface switched off (theta = 0) and w1, w2 optimized by
/// the same transmit updates.
double no_irs_baseline(const ChannelSet& ch, const SystemConfig& cfg);

struct ExhaustiveResult {
  CVector theta;  // conjugated-coefficient convention, like BeamState::theta
  double objective = 0.0;
};

/// Global maximizer of the reflect objective g([theta; 1]) over all
/// (2^bits)^N discrete surfaces for fixed w1, w2. Requires a Discrete
/// constraint in `cfg`, N <= 8 and bits <= 2.
ExhaustiveResult exhaustive_phase_oracle(const ChannelSet& ch, const SystemConfig& cfg, const CVector& w1,
                                         const CVector& w2);

/// Projected gradient ascent on -alpha |h_li^H w|^2 + 2 Re{beta^H w} over the
/// ball ||w||^2 <= P, step 1/(2L) with L = alpha ||h_li||^2, with Nesterov
/// momentum and restart whenever the objective drops.
CVector projected_gradient_qcqp_oracle(const TransmitSurrogate& s, const CVector& h_li, double P,
                                       int iterations = 100000);

/// Two dominant eigenpairs of the dense Psi by shifted power iteration with
/// deflation; returns the largest eigenvalue found.
double dense_lambda_max_oracle(const CVector& phi1, const CVector& phi2, cplx c);

struct OracleReport {
  std::string instance;
  double core_value = 0.0;
  double oracle_value = 0.0;
  double relative_gap = 0.0;
  double tolerance = 0.0;
  bool pass = false;

  static OracleReport compare(std::string instance, double core, double oracle, double tolerance);
  /// One JSON object, no trailing newline.
  std::string to_jsonl() const;
};

}  // namespace irsfd
