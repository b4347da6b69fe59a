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

#include "irsfd/oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "irsfd/solver.hpp"

namespace irsfd {

namespace {

// MRT beamformers for a fixed surface; a node whose outgoing channel vanishes
// transmits on its first antenna.
BeamState mrt_state(const ChannelSet& ch, const SystemConfig& cfg, CVector theta) {
  BeamState s;
  s.theta = std::move(theta);
  for (Node node : {Node::S1, Node::S2}) {
    const CVector h = effective_channel(ch, other(node), s.theta);
    CVector dir = CVector::Zero(ch.M());
    if (h.norm() > 0.0)
      dir = h / h.norm();
    else
      dir(0) = 1.0;
    s.w(node) = std::sqrt(power_of(cfg, node)) * dir;
  }
  s.objective = sum_rate(ch, s, cfg);
  return s;
}

}  // namespace

double random_phase_baseline(const ChannelSet& ch, const SystemConfig& cfg, Rng& rng, int trials) {
  if (trials < 1) throw std::invalid_argument("random_phase_baseline: trials must be >= 1");
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  double total = 0.0;
  for (int t = 0; t < trials; ++t) {
    CVector theta(ch.N());
    for (int n = 0; n < ch.N(); ++n) theta(n) = std::polar(1.0, phase(rng));
    if (cfg.phase_constraint.kind == PhaseConstraint::Kind::Discrete)
      theta = quantize_phases(theta, cfg.phase_constraint.bits);
    BeamState s = mrt_state(ch, cfg, std::move(theta));
    solve_transmit_only(ch, cfg, s, cfg.epsilon, cfg.max_iters);
    total += s.objective;
  }
  return total / trials;
}

double no_irs_baseline(const ChannelSet& ch, const SystemConfig& cfg) {
  BeamState s = mrt_state(ch, cfg, CVector::Zero(ch.N()));
  solve_transmit_only(ch, cfg, s, cfg.epsilon, cfg.max_iters);
  return s.objective;
}

ExhaustiveResult exhaustive_phase_oracle(const ChannelSet& ch, const SystemConfig& cfg, const CVector& w1,
                                         const CVector& w2) {
  if (cfg.phase_constraint.kind != PhaseConstraint::Kind::Discrete)
    throw std::invalid_argument("exhaustive_phase_oracle: needs a discrete phase constraint");
  const int bits = cfg.phase_constraint.bits;
  const int n = ch.N();
  if (n > 8 || bits > 2 || bits < 1)
    throw std::invalid_argument("exhaustive_phase_oracle: limited to N <= 8 and 1 <= bits <= 2");

  BeamState s;
  s.w1 = w1;
  s.w2 = w2;
  s.theta = CVector::Ones(n);
  const PhiPair phi = build_phi(ch, s, cfg);

  const int levels = 1 << bits;
  std::vector<cplx> grid(levels);
  for (int k = 0; k < levels; ++k) grid[k] = std::polar(1.0, 2.0 * std::numbers::pi * k / levels);

  std::vector<int> digit(n, 0);
  CVector x = CVector::Ones(n + 1);
  ExhaustiveResult best{CVector::Ones(n), -1.0};
  while (true) {
    for (int k = 0; k < n; ++k) x(k) = grid[digit[k]];
    const double g = reflect_objective(phi, x);
    if (g > best.objective) best = {x.head(n), g};

    int pos = 0;
    while (pos < n && ++digit[pos] == levels) digit[pos++] = 0;
    if (pos == n) break;
  }
  return best;
}

CVector projected_gradient_qcqp_oracle(const TransmitSurrogate& s, const CVector& h_li, double P, int iterations) {
  const double radius = std::sqrt(P);
  double lipschitz = s.alpha * h_li.squaredNorm();
  if (!(lipschitz > 0.0)) lipschitz = std::max(s.beta.norm() / radius, 1e-300);
  const double step = 1.0 / (2.0 * lipschitz);

  auto project = [&](CVector w) {
    const double nrm = w.norm();
    if (nrm > radius) w *= radius / nrm;
    return w;
  };
  auto value = [&](const CVector& w) { return qcqp_objective(s, h_li, w); };

  // Nesterov momentum with function-value restart; the plain iteration
  // stalls on ill-conditioned instances.
  CVector w = CVector::Zero(s.beta.size());
  CVector y = w;
  double t = 1.0;
  double f = value(w);
  for (int it = 0; it < iterations; ++it) {
    const CVector grad = 2.0 * (s.beta - s.alpha * h_li.dot(y) * h_li);
    const CVector next = project(y + step * grad);
    const double f_next = value(next);
    if (f_next < f) {
      y = w;
      t = 1.0;
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = next + ((t - 1.0) / t_next) * (next - w);
    w = next;
    f = f_next;
    t = t_next;
  }
  return w;
}

double dense_lambda_max_oracle(const CVector& phi1, const CVector& phi2, cplx c) {
  const CMatrix psi = psi_matrix(phi1, phi2, c);
  const double shift = psi.norm();
  if (shift == 0.0) return 0.0;
  const Eigen::Index dim = psi.rows();
  CMatrix shifted = psi + shift * CMatrix::Identity(dim, dim);

  auto power = [&](const CMatrix& a, CVector& v) {
    v.normalize();
    double mu = 0.0;
    for (int it = 0; it < 2000000; ++it) {
      const CVector y = a * v;
      mu = std::real(v.dot(y));
      const double residual = (y - mu * v).norm();
      v = y / y.norm();
      if (residual <= 1e-13 * shift) break;
    }
    return mu;
  };

  CVector v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) v(k) = cplx(1.0 + 0.01 * k, 0.5 - 0.003 * k);
  const double mu1 = power(shifted, v);
  double best = mu1 - shift;

  // Deflate the dominant pair and pick up the next eigenvalue as well.
  shifted -= mu1 * v * v.adjoint();
  CVector u(dim);
  for (Eigen::Index k = 0; k < dim; ++k) u(k) = cplx(0.7 - 0.002 * k, 1.0 + 0.013 * k);
  u -= v * v.dot(u);
  if (u.norm() > 0.0) best = std::max(best, power(shifted, u) - shift);
  return best;
}

OracleReport OracleReport::compare(std::string instance, double core, double oracle, double tolerance) {
  OracleReport r;
  r.instance = std::move(instance);
  r.core_value = core;
  r.oracle_value = oracle;
  const double scale = std::max(std::abs(oracle), 1e-300);
  r.relative_gap = std::abs(core - oracle) / scale;
  r.tolerance = tolerance;
  r.pass = r.relative_gap <= tolerance;
  return r;
}

std::string OracleReport::to_jsonl() const {
  nlohmann::json j;
  j["instance"] = instance;
  j["core_value"] = core_value;
  j["oracle_value"] = oracle_value;
  j["relative_gap"] = relative_gap;
  j["tolerance"] = tolerance;
  j["pass"] = pass;
  return j.dump();
}

}  // namespace irsfd
