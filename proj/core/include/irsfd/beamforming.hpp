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

#include "irsfd/channel_model.hpp"
#include "irsfd/config.hpp"
#include "irsfd/types.hpp"

namespace irsfd {

/// Joint beamforming state.
///
/// `theta` holds the *conjugated* reflection coefficients: the IRS applies
/// diag(conj(theta)). Physical phase shifts are therefore arg(conj(theta_n)),
/// see `physical_phases`.
struct BeamState {
  CVector w1, w2;
  CVector theta;
  double objective = 0.0;  // sum rate, bits/s/Hz

  CVector& w(Node n) { return n == Node::S1 ? w1 : w2; }
  const CVector& w(Node n) const { return n == Node::S1 ? w1 : w2; }
};

Eigen::VectorXd physical_phases(const CVector& theta);

inline double noise_of(const SystemConfig& cfg, Node n) { return n == Node::S1 ? cfg.sigma1_sq : cfg.sigma2_sq; }
inline double power_of(const SystemConfig& cfg, Node n) { return n == Node::S1 ? cfg.P1 : cfg.P2; }

// ---------------------------------------------------------------------------
// Rates
// ---------------------------------------------------------------------------

/// SINR of the link received at `rx`:
/// |h_rx^H w_tx|^2 / (|h_LI,rx^H w_rx|^2 + sigma_rx^2).
double link_sinr(const ChannelSet& ch, const BeamState& state, Node rx, double sigma_sq);

/// log2(1 + link_sinr).
double link_rate(const ChannelSet& ch, const BeamState& state, Node rx, double sigma_sq);

double sum_rate(const ChannelSet& ch, const BeamState& state, const SystemConfig& cfg);

// ---------------------------------------------------------------------------
// Transmit-beamformer block
// ---------------------------------------------------------------------------

/// Everything the transmit update of node i needs once w_{other} and theta
/// are fixed.
struct TransmitProblem {
  Node node = Node::S1;
  CVector h_out;         // effective channel from node i to the other node
  CVector h_li;          // loop-interference channel of node i
  double sigma_sq = 0;   // noise at node i
  double c_in = 0;       // |h_other^H w_other|^2, received signal power at node i
  double c_tilde = 0;    // |h_LI,other^H w_other|^2 + sigma_other^2
};

TransmitProblem transmit_problem(const ChannelSet& ch, const BeamState& state, Node node,
                                 const SystemConfig& cfg);

/// (1 + SINR_i)(1 + SINR_other) - 1 as a function of w_i alone. The sum rate
/// equals log2(1 + transmit_objective).
double transmit_objective(const TransmitProblem& p, const CVector& w);

/// Concave minorizer -alpha |h_li^H w|^2 + 2 Re{beta^H w} + gamma of
/// transmit_objective, tight at `anchor`.
struct TransmitSurrogate {
  double alpha = 0;
  CVector beta;
  double gamma = 0;
  CVector anchor;

  double value(const CVector& h_li, const CVector& w) const;
};

TransmitSurrogate transmit_surrogate(const TransmitProblem& p, const CVector& anchor);

/// -alpha |h_li^H w|^2 + 2 Re{beta^H w}, the part of the surrogate that
/// depends on w.
double qcqp_objective(const TransmitSurrogate& s, const CVector& h_li, const CVector& w);

/// (alpha h_li h_li^H + nu I)^{-1} beta evaluated in O(M) by splitting beta
/// along h_li and its orthogonal complement. nu = 0 yields the
/// pseudo-inverse point (alpha h_li h_li^H)^+ beta.
CVector qcqp_point(const TransmitSurrogate& s, const CVector& h_li, double nu);

/// Optimal dual variable of the ball constraint. Returns 0 when the
/// constraint is inactive (or beta = 0). Otherwise bisects on
/// [nu_floor, ||beta||/sqrt(P)] until | ||w(nu)||^2 - P | <= 1e-9 P or 200
/// halvings, where nu_floor = 1e-12 ||beta||/sqrt(P).
double bisect_dual(const TransmitSurrogate& s, const CVector& h_li, double P);

struct QcqpSolution {
  CVector w;
  double nu = 0;
};

/// Maximizes the surrogate over ||w||^2 <= P. The returned w is feasible.
QcqpSolution solve_transmit_qcqp(const TransmitSurrogate& s, const CVector& h_li, double P);

// ---------------------------------------------------------------------------
// Reflect-beamformer block
// ---------------------------------------------------------------------------
//
// The reflect block works on the augmented vector theta_aug = [theta; t],
// length N+1, with |t| = 1. For fixed w1, w2 the objective is
//   g(theta_aug) = |theta_aug^H phi1|^2 + |theta_aug^H phi2|^2
//                + |theta_aug^H phi1|^2 |theta_aug^H phi2|^2
// which equals transmit_objective, so the sum rate is log2(1 + g).

struct PhiPair {
  CVector phi1;  // link received at S1, noise-normalized
  CVector phi2;  // link received at S2
};

PhiPair build_phi(const ChannelSet& ch, const BeamState& state, const SystemConfig& cfg);

double reflect_objective(const PhiPair& phi, const CVector& theta_aug);

/// Affine minorizer Re{rho^H x} + kappa of g on the torus |x_n| = 1, tight
/// at `anchor`. Psi = -(c phi2 phi1^H + conj(c) phi1 phi2^H) with
/// c = (phi2^H anchor)(anchor^H phi1).
///
/// For anchors or points off the torus the exact minorizer is
/// Re{rho^H x} - lambda_max ||x||^2 + kappa + lambda_max (N+1), which is
/// what `quadratic_value` returns; on the torus both coincide.
struct ReflectSurrogate {
  CVector phi1, phi2;
  CVector rho;
  double kappa = 0;
  double lambda_max = 0;
  cplx psi_factor_c{0.0, 0.0};
  CVector anchor;

  double value(const CVector& x) const;
  double quadratic_value(const CVector& x) const;
};

ReflectSurrogate reflect_surrogate(const PhiPair& phi, const CVector& anchor);

/// Dense Psi, for verification only.
CMatrix psi_matrix(const CVector& phi1, const CVector& phi2, cplx c);

/// Largest eigenvalue of Psi from its 2x2 restriction to span{phi1, phi2}.
/// O(N). The restriction has one non-negative and one non-positive
/// eigenvalue, so the result is >= 0. Returns 0 if either phi is zero.
double lambda_max_rank2(const CVector& phi1, const CVector& phi2, cplx c);

/// Maximizer of the surrogate over the constraint set.
///
/// UnitModulus / Discrete: x_n = exp(j arg rho_n).
/// AmplitudeBounded: x_n = min(|rho_n| / (2 lambda_max), 1) exp(j arg rho_n)
/// for n < N; the slack entry is always unit modulus. Entries with rho_n = 0
/// keep `previous`. Discrete quantization is applied by the caller.
CVector solve_phases(const CVector& rho, double lambda_max, const PhaseConstraint& constraint,
                     const CVector& previous);

/// theta = theta_aug(0:N) / theta_aug(N). Throws std::invalid_argument if
/// the slack entry is zero.
CVector extract_theta(const CVector& theta_aug);

/// [theta; 1].
CVector augment(const CVector& theta);

/// Maps arg(x_n) to the nearest of 2^bits uniform levels {0, 2pi/2^bits, ...}
/// (ties resolve to the lower level) and sets |x_n| = 1. The level grid is
/// closed under negation, so quantizing `theta` or its conjugate yields the
/// same physical phases except on exact ties.
CVector quantize_phases(const CVector& x, int bits);

/// Projection used by extrapolation schemes: unit modulus, or magnitude
/// clipped to [0, 1] for AmplitudeBounded. Zero entries fall back to
/// `fallback`. The slack entry is normalized to 1 afterwards.
CVector project_augmented(const CVector& theta_aug, const PhaseConstraint& constraint,
                          const CVector& fallback);

}  // namespace irsfd
