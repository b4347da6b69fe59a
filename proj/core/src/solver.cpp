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

#include "irsfd/solver.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace irsfd {

namespace {

CVector random_direction(int m, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVector v(m);
  for (int k = 0; k < m; ++k) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v(k) = {re, im};
  }
  return v / v.norm();
}

bool has_converged(double prev, double cur, double epsilon) {
  return std::abs(cur - prev) / std::max(prev, 1e-12) < epsilon;
}

PhaseConstraint loop_constraint(const PhaseConstraint& c) {
  return c.kind == PhaseConstraint::Kind::Discrete ? PhaseConstraint::unit_modulus() : c;
}

}  // namespace

BeamState initialize(const ChannelSet& ch, const SystemConfig& cfg, const SolverOptions& opts, Rng& rng) {
  BeamState s;
  const int n = ch.N();
  const int m = ch.M();
  if (opts.phase_init == PhaseInit::Ones) {
    s.theta = CVector::Ones(n);
  } else {
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    s.theta.resize(n);
    for (int k = 0; k < n; ++k) s.theta(k) = std::polar(1.0, phase(rng));
  }

  for (Node node : {Node::S1, Node::S2}) {
    const double amp = std::sqrt(power_of(cfg, node));
    CVector dir;
    if (opts.beam_init == BeamInit::Mrt) {
      const CVector h = effective_channel(ch, other(node), s.theta);
      const double hn = h.norm();
      dir = hn > 0.0 ? CVector(h / hn) : random_direction(m, rng);
    } else {
      dir = random_direction(m, rng);
    }
    s.w(node) = amp * dir;
  }
  s.objective = sum_rate(ch, s, cfg);
  return s;
}

double transmit_update(const ChannelSet& ch, const SystemConfig& cfg, BeamState& state, Node node) {
  const TransmitProblem p = transmit_problem(ch, state, node, cfg);
  const TransmitSurrogate s = transmit_surrogate(p, state.w(node));
  state.w(node) = solve_transmit_qcqp(s, p.h_li, power_of(cfg, node)).w;
  state.objective = sum_rate(ch, state, cfg);
  return state.objective;
}

CVector reflect_map(const PhiPair& phi, const CVector& theta_aug, const PhaseConstraint& constraint) {
  const ReflectSurrogate s = reflect_surrogate(phi, theta_aug);
  const CVector next = solve_phases(s.rho, s.lambda_max, constraint, theta_aug);
  return augment(extract_theta(next));
}

SquaremResult squarem_step(const CVector& theta_aug, const std::function<CVector(const CVector&)>& fixed_point_map,
                           const std::function<double(const CVector&)>& objective,
                           const std::function<CVector(const CVector&)>& project) {
  const CVector x1 = fixed_point_map(theta_aug);
  const CVector r = x1 - theta_aug;
  const double r_norm = r.norm();
  if (r_norm == 0.0) return {theta_aug, false, 0};

  const CVector x2 = fixed_point_map(x1);
  const CVector v = x2 - x1 - r;
  const double v_norm = v.norm();
  if (v_norm == 0.0) return {x2, false, 0};

  const double floor_value = objective(x2) - 1e-12;
  double a = std::min(-r_norm / v_norm, -1.0);
  if (a == -1.0) return {x2, false, 0};

  constexpr int kMaxHalvings = 10;
  for (int h = 0; h <= kMaxHalvings; ++h) {
    const CVector candidate = project(theta_aug - 2.0 * a * r + a * a * v);
    if (objective(candidate) >= floor_value) return {candidate, true, h};
    a = 0.5 * (a - 1.0);
  }
  return {x2, false, kMaxHalvings};
}

SolveResult solve_from(const ChannelSet& ch, const SystemConfig& cfg, const SolverOptions& opts, BeamState start) {
  if (!(opts.epsilon > 0.0)) throw std::invalid_argument("solve: epsilon must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  const PhaseConstraint inner = loop_constraint(cfg.phase_constraint);

  SolveResult out;
  BeamState& s = out.state;
  s = std::move(start);
  s.objective = sum_rate(ch, s, cfg);
  out.trace.objectives.push_back(s.objective);

  for (int it = 1; it <= opts.max_iters; ++it) {
    transmit_update(ch, cfg, s, Node::S1);
    transmit_update(ch, cfg, s, Node::S2);

    const PhiPair phi = build_phi(ch, s, cfg);
    const CVector x0 = augment(s.theta);
    const auto F = [&](const CVector& x) { return reflect_map(phi, x, inner); };
    CVector next;
    if (opts.accelerate) {
      const auto g = [&](const CVector& x) { return reflect_objective(phi, x); };
      const auto proj = [&](const CVector& x) { return project_augmented(x, inner, x0); };
      SquaremResult step = squarem_step(x0, F, g, proj);
      if (step.extrapolated) ++out.trace.accepted_accel_steps;
      next = std::move(step.theta_aug);
    } else {
      next = F(x0);
    }
    s.theta = extract_theta(next);
    s.objective = sum_rate(ch, s, cfg);

    const double prev = out.trace.objectives.back();
    out.trace.objectives.push_back(s.objective);
    out.trace.iterations = it;
    if (has_converged(prev, s.objective, opts.epsilon)) {
      out.trace.converged = true;
      break;
    }
  }

  if (cfg.phase_constraint.kind == PhaseConstraint::Kind::Discrete) {
    // Quantize the physical coefficients conj(theta), then refresh both
    // transmit beamformers once for the quantized surface.
    s.theta = quantize_phases(s.theta.conjugate(), cfg.phase_constraint.bits).conjugate();
    s.objective = sum_rate(ch, s, cfg);
    transmit_update(ch, cfg, s, Node::S1);
    transmit_update(ch, cfg, s, Node::S2);
  }

  out.trace.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

SolveResult solve(const ChannelSet& ch, const SystemConfig& cfg, const SolverOptions& opts, Rng& rng) {
  ch.validate();
  return solve_from(ch, cfg, opts, initialize(ch, cfg, opts, rng));
}

int solve_transmit_only(const ChannelSet& ch, const SystemConfig& cfg, BeamState& state, double epsilon,
                        int max_iters) {
  double prev = sum_rate(ch, state, cfg);
  state.objective = prev;
  int it = 0;
  while (it < max_iters) {
    ++it;
    transmit_update(ch, cfg, state, Node::S1);
    const double cur = transmit_update(ch, cfg, state, Node::S2);
    if (has_converged(prev, cur, epsilon)) break;
    prev = cur;
  }
  return it;
}

}  // namespace irsfd
