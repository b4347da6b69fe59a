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

#include "irsfd/beamforming.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace irsfd {

Eigen::VectorXd physical_phases(const CVector& theta) {
  Eigen::VectorXd out(theta.size());
  for (Eigen::Index n = 0; n < theta.size(); ++n) out(n) = std::arg(std::conj(theta(n)));
  return out;
}

// ---------------------------------------------------------------------------
// Rates

double link_sinr(const ChannelSet& ch, const BeamState& state, Node rx, double sigma_sq) {
  const CVector h = effective_channel(ch, rx, state.theta);
  const double signal = std::norm(h.dot(state.w(other(rx))));
  const double interference = std::norm(ch.loop(rx).dot(state.w(rx)));
  return signal / (interference + sigma_sq);
}

double link_rate(const ChannelSet& ch, const BeamState& state, Node rx, double sigma_sq) {
  return std::log2(1.0 + link_sinr(ch, state, rx, sigma_sq));
}

double sum_rate(const ChannelSet& ch, const BeamState& state, const SystemConfig& cfg) {
  return link_rate(ch, state, Node::S1, cfg.sigma1_sq) + link_rate(ch, state, Node::S2, cfg.sigma2_sq);
}

// ---------------------------------------------------------------------------
// Transmit block

TransmitProblem transmit_problem(const ChannelSet& ch, const BeamState& state, Node node,
                                 const SystemConfig& cfg) {
  const Node peer = other(node);
  TransmitProblem p;
  p.node = node;
  p.h_out = effective_channel(ch, peer, state.theta);
  p.h_li = ch.loop(node);
  p.sigma_sq = noise_of(cfg, node);
  const CVector h_in = effective_channel(ch, node, state.theta);
  p.c_in = std::norm(h_in.dot(state.w(peer)));
  p.c_tilde = std::norm(ch.loop(peer).dot(state.w(peer))) + noise_of(cfg, peer);
  return p;
}

double transmit_objective(const TransmitProblem& p, const CVector& w) {
  const double u = std::norm(p.h_li.dot(w)) + p.sigma_sq;
  const double sinr_in = p.c_in / u;
  const double sinr_out = std::norm(p.h_out.dot(w)) / p.c_tilde;
  return sinr_in + sinr_out + sinr_in * sinr_out;
}

TransmitSurrogate transmit_surrogate(const TransmitProblem& p, const CVector& anchor) {
  const double li = std::norm(p.h_li.dot(anchor));
  const double u = li + p.sigma_sq;
  const cplx proj = p.h_out.dot(anchor);
  const double q = std::norm(proj);

  TransmitSurrogate s;
  s.anchor = anchor;
  s.alpha = p.c_in * (q + p.c_tilde) / (p.c_tilde * u * u);
  s.beta = ((1.0 + p.c_in / u) / p.c_tilde) * proj * p.h_out;
  s.gamma = s.alpha * li + p.c_in / u - q / p.c_tilde - p.c_in * q / (p.c_tilde * u);
  return s;
}

double TransmitSurrogate::value(const CVector& h_li, const CVector& w) const {
  return qcqp_objective(*this, h_li, w) + gamma;
}

double qcqp_objective(const TransmitSurrogate& s, const CVector& h_li, const CVector& w) {
  return -s.alpha * std::norm(h_li.dot(w)) + 2.0 * std::real(s.beta.dot(w));
}

namespace {

// beta = beta_perp + along * h, with beta_perp orthogonal to h.
struct QcqpSplit {
  double curvature;  // alpha ||h||^2
  double h_norm2;
  cplx along;        // h^H beta / ||h||^2
  CVector beta_perp;
  double perp_norm2;
};

QcqpSplit split(const TransmitSurrogate& s, const CVector& h_li) {
  QcqpSplit sp;
  sp.h_norm2 = h_li.squaredNorm();
  sp.curvature = s.alpha * sp.h_norm2;
  if (sp.h_norm2 > 0.0) {
    sp.along = h_li.dot(s.beta) / sp.h_norm2;
    sp.beta_perp = s.beta - sp.along * h_li;
  } else {
    sp.along = 0.0;
    sp.beta_perp = s.beta;
  }
  sp.perp_norm2 = sp.beta_perp.squaredNorm();
  return sp;
}

// ||w(nu)||^2 = ||beta_perp||^2 / nu^2 + |along|^2 ||h||^2 / (nu + alpha ||h||^2)^2
double point_norm2(const QcqpSplit& sp, double nu) {
  const double par = std::norm(sp.along) * sp.h_norm2 / ((nu + sp.curvature) * (nu + sp.curvature));
  if (nu == 0.0) return sp.perp_norm2 == 0.0 ? par : std::numeric_limits<double>::infinity();
  return sp.perp_norm2 / (nu * nu) + par;
}

CVector point(const QcqpSplit& sp, const CVector& h_li, double nu) {
  CVector w = CVector::Zero(h_li.size());
  if (sp.h_norm2 > 0.0 && (nu + sp.curvature) > 0.0) w += (sp.along / (nu + sp.curvature)) * h_li;
  if (nu > 0.0) w += sp.beta_perp / nu;
  return w;
}

constexpr double kBisectRelTol = 1e-9;
constexpr int kBisectMaxIter = 200;
constexpr double kNuFloorRel = 1e-12;

}  // namespace

CVector qcqp_point(const TransmitSurrogate& s, const CVector& h_li, double nu) {
  return point(split(s, h_li), h_li, nu);
}

double bisect_dual(const TransmitSurrogate& s, const CVector& h_li, double P) {
  const double beta_norm = s.beta.norm();
  if (beta_norm == 0.0) return 0.0;

  const QcqpSplit sp = split(s, h_li);
  // Constraint inactive: the unconstrained maximizer exists and is feasible.
  if (sp.perp_norm2 <= 1e-28 * beta_norm * beta_norm && sp.curvature > 0.0) {
    QcqpSplit exact = sp;
    exact.perp_norm2 = 0.0;
    if (point_norm2(exact, 0.0) <= P) return 0.0;
  }

  double hi = beta_norm / std::sqrt(P);
  double lo = kNuFloorRel * hi;
  if (point_norm2(sp, lo) <= P) return 0.0;

  for (int it = 0; it < kBisectMaxIter; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double n2 = point_norm2(sp, mid);
    if (n2 <= P && P - n2 <= kBisectRelTol * P) return mid;
    if (n2 > P)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

QcqpSolution solve_transmit_qcqp(const TransmitSurrogate& s, const CVector& h_li, double P) {
  if (!(P > 0.0)) throw std::invalid_argument("solve_transmit_qcqp: power budget must be positive");
  if (s.alpha < 0.0) throw std::invalid_argument("solve_transmit_qcqp: alpha must be non-negative");
  if (s.beta.norm() == 0.0) return {CVector::Zero(h_li.size()), 0.0};

  const double nu = bisect_dual(s, h_li, P);
  const QcqpSplit sp = split(s, h_li);
  if (nu == 0.0) {
    // Pseudo-inverse solution along h_li; beta_perp is numerically zero here.
    return {point(sp, h_li, 0.0), 0.0};
  }
  return {point(sp, h_li, nu), nu};
}

// ---------------------------------------------------------------------------
// Reflect block

PhiPair build_phi(const ChannelSet& ch, const BeamState& state, const SystemConfig& cfg) {
  const auto phi_into = [&](Node rx) {
    const CVector& w_tx = state.w(other(rx));
    const double u = std::norm(ch.loop(rx).dot(state.w(rx))) + noise_of(cfg, rx);
    const double scale = 1.0 / std::sqrt(u);
    const Eigen::Index n = ch.N();
    CVector phi(n + 1);
    phi.head(n) = ch.irs_to_rx(rx).conjugate().cwiseProduct(ch.tx_to_irs(rx) * w_tx) * scale;
    phi(n) = ch.direct(rx).dot(w_tx) * scale;
    return phi;
  };
  return {phi_into(Node::S1), phi_into(Node::S2)};
}

double reflect_objective(const PhiPair& phi, const CVector& theta_aug) {
  const double g1 = std::norm(theta_aug.dot(phi.phi1));
  const double g2 = std::norm(theta_aug.dot(phi.phi2));
  return g1 + g2 + g1 * g2;
}

ReflectSurrogate reflect_surrogate(const PhiPair& phi, const CVector& anchor) {
  ReflectSurrogate s;
  s.phi1 = phi.phi1;
  s.phi2 = phi.phi2;
  s.anchor = anchor;

  const cplx a1 = anchor.dot(phi.phi1);  // anchor^H phi1
  const cplx a2 = anchor.dot(phi.phi2);
  s.psi_factor_c = std::conj(a2) * a1;
  const cplx c = s.psi_factor_c;
  s.lambda_max = lambda_max_rank2(phi.phi1, phi.phi2, c);

  // Psi * anchor = -(c phi2 (phi1^H anchor) + conj(c) phi1 (phi2^H anchor))
  const CVector psi_anchor = -(c * std::conj(a1) * phi.phi2 + std::conj(c) * std::conj(a2) * phi.phi1);
  s.rho = 2.0 * (std::conj(a1) * phi.phi1 + std::conj(a2) * phi.phi2 + s.lambda_max * anchor - psi_anchor);

  const double g1 = std::norm(a1);
  const double g2 = std::norm(a2);
  const double dim = static_cast<double>(anchor.size());
  s.kappa = -s.lambda_max * (anchor.squaredNorm() + dim) - g1 - g2 - 3.0 * g1 * g2;
  return s;
}

double ReflectSurrogate::value(const CVector& x) const { return std::real(rho.dot(x)) + kappa; }

double ReflectSurrogate::quadratic_value(const CVector& x) const {
  return value(x) + lambda_max * (static_cast<double>(x.size()) - x.squaredNorm());
}

CMatrix psi_matrix(const CVector& phi1, const CVector& phi2, cplx c) {
  return -(c * phi2 * phi1.adjoint() + std::conj(c) * phi1 * phi2.adjoint());
}

double lambda_max_rank2(const CVector& phi1, const CVector& phi2, cplx c) {
  const double n1 = phi1.norm();
  const double n2 = phi2.norm();
  if (n1 == 0.0 || n2 == 0.0 || c == cplx{0.0, 0.0}) return 0.0;

  // Orthonormal basis {q1, q2} of span{phi1, phi2}; phi1 = n1 q1,
  // phi2 = b1 q1 + b2 q2 with b2 >= 0.
  const CVector q1 = phi1 / n1;
  cplx b1 = q1.dot(phi2);
  CVector r = phi2 - b1 * q1;
  const cplx fix = q1.dot(r);  // one reorthogonalization pass
  r -= fix * q1;
  b1 += fix;
  const double b2 = r.norm();

  // Restriction B = [[-2 n1 Re(c b1), -conj(c) n1 b2], [-c n1 b2, 0]].
  const double t = -n1 * std::real(c * b1);
  const double off2 = std::norm(c) * n1 * n1 * b2 * b2;
  const double root = std::sqrt(t * t + off2);
  if (t >= 0.0) return t + root;
  return off2 / (root - t);
}

CVector solve_phases(const CVector& rho, double lambda_max, const PhaseConstraint& constraint,
                     const CVector& previous) {
  if (previous.size() != rho.size()) throw std::invalid_argument("solve_phases: size mismatch");
  const Eigen::Index slack = rho.size() - 1;
  const bool bounded = constraint.kind == PhaseConstraint::Kind::AmplitudeBounded;

  CVector out(rho.size());
  for (Eigen::Index n = 0; n < rho.size(); ++n) {
    const double mag = std::abs(rho(n));
    if (mag == 0.0) {
      out(n) = previous(n);
      continue;
    }
    double amp = 1.0;
    if (bounded && n != slack && lambda_max > 0.0) amp = std::min(mag / (2.0 * lambda_max), 1.0);
    out(n) = (amp / mag) * rho(n);
  }
  return out;
}

CVector extract_theta(const CVector& theta_aug) {
  const Eigen::Index n = theta_aug.size() - 1;
  if (n < 1) throw std::invalid_argument("extract_theta: augmented vector too short");
  const cplx slack = theta_aug(n);
  if (slack == cplx{0.0, 0.0}) throw std::invalid_argument("extract_theta: slack entry is zero");
  return theta_aug.head(n) / slack;
}

CVector augment(const CVector& theta) {
  CVector out(theta.size() + 1);
  out.head(theta.size()) = theta;
  out(theta.size()) = 1.0;
  return out;
}

CVector quantize_phases(const CVector& x, int bits) {
  if (bits < 1) throw std::invalid_argument("quantize_phases: bits must be >= 1");
  const long levels = 1L << bits;
  const double step = 2.0 * std::numbers::pi / static_cast<double>(levels);
  CVector out(x.size());
  for (Eigen::Index n = 0; n < x.size(); ++n) {
    double ph = std::arg(x(n));
    if (ph < 0.0) ph += 2.0 * std::numbers::pi;
    const double k = ph / step;
    const double lower = std::floor(k);
    long level = static_cast<long>(lower) + ((k - lower) > 0.5 ? 1 : 0);
    level %= levels;
    out(n) = std::polar(1.0, static_cast<double>(level) * step);
  }
  return out;
}

CVector project_augmented(const CVector& theta_aug, const PhaseConstraint& constraint,
                          const CVector& fallback) {
  const Eigen::Index slack = theta_aug.size() - 1;
  const bool bounded = constraint.kind == PhaseConstraint::Kind::AmplitudeBounded;
  CVector out(theta_aug.size());
  for (Eigen::Index n = 0; n < theta_aug.size(); ++n) {
    const cplx v = theta_aug(n);
    const double mag = std::abs(v);
    if (!(mag > 0.0) || !std::isfinite(mag)) {
      out(n) = fallback(n);
    } else if (bounded && n != slack) {
      out(n) = mag > 1.0 ? v / mag : v;
    } else {
      out(n) = v / mag;
    }
  }
  const cplx s = out(slack);
  return out / s;
}

}  // namespace irsfd
