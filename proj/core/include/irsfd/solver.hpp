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

#include <functional>
#include <vector>

#include "irsfd/beamforming.hpp"
#include "irsfd/channel_model.hpp"
#include "irsfd/config.hpp"

namespace irsfd {

enum class PhaseInit { Ones, Random };
enum class BeamInit { Mrt, Random };

struct SolverOptions {
  bool accelerate = false;
  double epsilon = 1e-3;
  int max_iters = 500;
  PhaseInit phase_init = PhaseInit::Ones;
  BeamInit beam_init = BeamInit::Mrt;

  static SolverOptions from(const SystemConfig& cfg, bool accelerate = false) {
    SolverOptions o;
    o.accelerate = accelerate;
    o.epsilon = cfg.epsilon;
    o.max_iters = cfg.max_iters;
    return o;
  }
};

/// Per-solve record. `objectives[0]` is the sum rate at the initial point and
/// `objectives[k]` the sum rate after outer iteration k, so
/// objectives.size() == iterations + 1. For Discrete constraints the
/// post-quantization objective is reported in BeamState::objective only.
struct SolveTrace {
  std::vector<double> objectives;
  int iterations = 0;
  bool converged = false;
  double wall_time = 0.0;
  int accepted_accel_steps = 0;
};

struct SolveResult {
  BeamState state;
  SolveTrace trace;
};

/// Initial point. Random draws (phases first, then w1, then w2) are taken
/// from `rng` only when the corresponding scheme asks for them.
BeamState initialize(const ChannelSet& ch, const SystemConfig& cfg, const SolverOptions& opts, Rng& rng);

/// One MM step on w_node with everything else fixed. Updates `state.w(node)`
/// and returns the new sum rate (state.objective is refreshed).
double transmit_update(const ChannelSet& ch, const SystemConfig& cfg, BeamState& state, Node node);

/// One reflect MM map on the augmented vector: builds the surrogate at
/// `theta_aug` (slack entry 1) and returns the maximizer renormalized so that
/// its slack entry is 1.
CVector reflect_map(const PhiPair& phi, const CVector& theta_aug, const PhaseConstraint& constraint);

struct SquaremResult {
  CVector theta_aug;
  bool extrapolated = false;  // an extrapolated point (not the plain F(F(x))) was kept
  int halvings = 0;
};

/// One safeguarded squared-extrapolation step around the fixed-point map F:
/// x1 = F(x0), x2 = F(x1), r = x1 - x0, v = x2 - x1 - r, a = -||r||/||v||
/// (capped at -1), candidate x0 - 2 a r + a^2 v projected by `project`. The
/// step length is halved toward -1 until objective(candidate) >=
/// objective(x2) - 1e-12; after 10 halvings x2 is returned.
SquaremResult squarem_step(const CVector& theta_aug, const std::function<CVector(const CVector&)>& fixed_point_map,
                           const std::function<double(const CVector&)>& objective,
                           const std::function<CVector(const CVector&)>& project);

/// Alternating maximization: w1 update, w2 update, reflect update (optionally
/// accelerated) per outer iteration until the relative change of the sum
/// rate drops below opts.epsilon or opts.max_iters is reached. Discrete
/// constraints run the unit-modulus loop, quantize once, and refresh w1, w2.
SolveResult solve(const ChannelSet& ch, const SystemConfig& cfg, const SolverOptions& opts, Rng& rng);

/// Same loop started from a given state.
SolveResult solve_from(const ChannelSet& ch, const SystemConfig& cfg, const SolverOptions& opts, BeamState start);

/// Alternates only the two transmit updates with `state.theta` held fixed.
/// Returns the number of outer iterations performed.
int solve_transmit_only(const ChannelSet& ch, const SystemConfig& cfg, BeamState& state, double epsilon,
                        int max_iters);

}  // namespace irsfd
