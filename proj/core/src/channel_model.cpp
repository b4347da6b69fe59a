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

#include "irsfd/channel_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace irsfd {

double path_loss_db(double d, double ple, const SystemConfig& cfg) {
  if (!(d > 0.0)) throw std::domain_error("path_loss_db: distance must be positive, got " + std::to_string(d));
  return cfg.pl_ref_db - 10.0 * ple * std::log10(d / cfg.d_ref);
}

Distances geometry_distances(const SystemConfig& cfg) {
  const double far_leg = cfg.d_s1s2 - cfg.d_s1i_h;
  return {std::hypot(cfg.d_s1i_h, cfg.d_v), std::hypot(far_leg, cfg.d_v), cfg.d_s1s2};
}

// Entries are drawn column-major, real part before imaginary part.
CMatrix sample_rayleigh(int rows, int cols, std::optional<double> gain_db, Rng& rng) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("sample_rayleigh: empty shape");
  if (!gain_db || (std::isinf(*gain_db) && *gain_db < 0)) return CMatrix::Zero(rows, cols);

  const double sd = std::sqrt(db_to_linear(*gain_db) / 2.0);
  std::normal_distribution<double> gauss(0.0, sd);
  CMatrix out(rows, cols);
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      out(r, c) = {re, im};
    }
  }
  return out;
}

CMatrix sample_rician(int rows, int cols, double gain_db, double k_db, Rng& rng) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("sample_rician: empty shape");
  const double amp = std::sqrt(db_to_linear(gain_db));
  const CMatrix los = CMatrix::Ones(rows, cols);

  if (std::isinf(k_db) && k_db > 0) return amp * los;
  if (std::isinf(k_db) && k_db < 0) return amp * sample_rayleigh(rows, cols, 0.0, rng);

  const double k = db_to_linear(k_db);
  const double w_los = std::sqrt(k / (k + 1.0));
  const double w_nlos = std::sqrt(1.0 / (k + 1.0));
  return amp * (w_los * los + w_nlos * sample_rayleigh(rows, cols, 0.0, rng));
}

ChannelSet generate_channels(const SystemConfig& cfg, Rng& rng) {
  cfg.validate();
  const auto [d_s1i, d_is2, d_s1s2] = geometry_distances(cfg);
  const int M = cfg.M;
  const int N = cfg.N;

  ChannelSet ch;
  ch.H_s1i = sample_rayleigh(N, M, path_loss_db(d_s1i, cfg.ple_s1i, cfg), rng);
  ch.H_s2i = sample_rayleigh(N, M, path_loss_db(d_is2, cfg.ple_s2i, cfg), rng);
  ch.h_is1 = sample_rayleigh(N, 1, path_loss_db(d_s1i, cfg.ple_is1, cfg), rng);
  ch.h_is2 = sample_rayleigh(N, 1, path_loss_db(d_is2, cfg.ple_is2, cfg), rng);
  const double direct_db = path_loss_db(d_s1s2, cfg.ple_direct, cfg);
  ch.h_s1s2 = sample_rayleigh(M, 1, direct_db, rng);
  ch.h_s2s1 = sample_rayleigh(M, 1, direct_db, rng);
  ch.h_s1s1 = sample_rician(M, 1, cfg.li_pl_db, cfg.rician_k_db, rng);
  ch.h_s2s2 = sample_rician(M, 1, cfg.li_pl_db, cfg.rician_k_db, rng);
  return ch;
}

void ChannelSet::validate() const {
  const auto m = H_s1i.cols();
  const auto n = H_s1i.rows();
  const bool dims_ok = H_s2i.rows() == n && H_s2i.cols() == m && h_is1.size() == n && h_is2.size() == n &&
                       h_s1s2.size() == m && h_s2s1.size() == m && h_s1s1.size() == m && h_s2s2.size() == m;
  if (!dims_ok || m < 1 || n < 1) throw std::invalid_argument("ChannelSet: inconsistent dimensions");
  const bool finite = H_s1i.allFinite() && H_s2i.allFinite() && h_is1.allFinite() && h_is2.allFinite() &&
                      h_s1s2.allFinite() && h_s2s1.allFinite() && h_s1s1.allFinite() && h_s2s2.allFinite();
  if (!finite) throw std::invalid_argument("ChannelSet: non-finite entry");
}

namespace {

CMatrix stack_link(const CMatrix& tx_to_irs, const CVector& irs_to_rx, const CVector& direct) {
  const auto n = tx_to_irs.rows();
  CMatrix out(n + 1, tx_to_irs.cols());
  out.topRows(n) = irs_to_rx.conjugate().asDiagonal() * tx_to_irs;
  out.row(n) = direct.adjoint();
  return out;
}

}  // namespace

StackedChannel stack_effective_channels(const ChannelSet& ch) {
  ch.validate();
  return {stack_link(ch.H_s1i, ch.h_is2, ch.h_s1s2), stack_link(ch.H_s2i, ch.h_is1, ch.h_s2s1)};
}

CVector effective_channel(const ChannelSet& ch, Node rx, const CVector& theta) {
  // h^H = h_IR^H diag(conj(theta)) H_TI + h_d^H
  return ch.tx_to_irs(rx).adjoint() * ch.irs_to_rx(rx).cwiseProduct(theta) + ch.direct(rx);
}

}  // namespace irsfd
