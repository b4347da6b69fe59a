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

#include <optional>

#include "irsfd/config.hpp"
#include "irsfd/types.hpp"

namespace irsfd {

/// One channel realization.
///
/// Naming follows the transmitter -> receiver order: `H_s1i` is node S1 to
/// the IRS (N x M), `h_is2` is the IRS to node S2 (length N, used as
/// h^H), `h_s1s2` the direct S1 -> S2 link (length M, used as h^H) and
/// `h_s1s1` the loop-interference channel of S1. The reflected
/// self-interference path is not modelled.
struct ChannelSet {
  CMatrix H_s1i, H_s2i;
  CVector h_is1, h_is2;
  CVector h_s1s2, h_s2s1;
  CVector h_s1s1, h_s2s2;

  int M() const { return static_cast<int>(H_s1i.cols()); }
  int N() const { return static_cast<int>(H_s1i.rows()); }

  /// Throws std::invalid_argument on inconsistent dimensions or non-finite
  /// entries.
  void validate() const;

  // Accessors for the link received at `rx` (transmitted by other(rx)).
  const CMatrix& tx_to_irs(Node rx) const { return rx == Node::S1 ? H_s2i : H_s1i; }
  const CVector& irs_to_rx(Node rx) const { return rx == Node::S1 ? h_is1 : h_is2; }
  const CVector& direct(Node rx) const { return rx == Node::S1 ? h_s2s1 : h_s1s2; }
  const CVector& loop(Node n) const { return n == Node::S1 ? h_s1s1 : h_s2s2; }
};

/// Stacked effective channels: for the link S_i -> S_j, rows 0..N-1
/// are diag(h_{I S_j})^H H_{S_i I} and row N is the direct channel
/// h_{S_i S_j}^H, so that the effective row channel for reflection vector
/// theta is [theta; 1]^H * H_bar.
struct StackedChannel {
  CMatrix H_bar_12;  // S1 -> S2
  CMatrix H_bar_21;  // S2 -> S1

  /// Stack of the link received at `rx`.
  const CMatrix& into(Node rx) const { return rx == Node::S1 ? H_bar_21 : H_bar_12; }
};

struct Distances {
  double d_s1i;
  double d_is2;
  double d_s1s2;
};

/// pl_ref_db - 10 * ple * log10(d / d_ref). Throws std::domain_error if d <= 0.
double path_loss_db(double d, double ple, const SystemConfig& cfg);

/// IRS on a line parallel to S1-S2 at vertical offset d_v.
Distances geometry_distances(const SystemConfig& cfg);

/// i.i.d. CN(0, 10^(gain_db/10)) entries. An empty `gain_db` stands for
/// -inf dB and yields the zero matrix without consuming randomness.
CMatrix sample_rayleigh(int rows, int cols, std::optional<double> gain_db, Rng& rng);

/// sqrt(g) * (sqrt(K/(K+1)) * ones + sqrt(1/(K+1)) * CN(0,1)). The LOS
/// component is the all-ones matrix. Infinite `k_db` values select the pure
/// LOS / pure NLOS limits.
CMatrix sample_rician(int rows, int cols, double gain_db, double k_db, Rng& rng);

/// Draws, in this order: H_s1i, H_s2i, h_is1, h_is2, h_s1s2, h_s2s1,
/// h_s1s1, h_s2s2. Loop-interference channels are Rician at li_pl_db,
/// everything else is Rayleigh with distance-dependent path loss.
ChannelSet generate_channels(const SystemConfig& cfg, Rng& rng);

StackedChannel stack_effective_channels(const ChannelSet& ch);

/// Effective MISO channel of the link received at `rx`, as a column vector h
/// with received signal h^H w_tx. `theta` stores the conjugated reflection
/// coefficients: the IRS applies diag(conj(theta)).
CVector effective_channel(const ChannelSet& ch, Node rx, const CVector& theta);

}  // namespace irsfd
