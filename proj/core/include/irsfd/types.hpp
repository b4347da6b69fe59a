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

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace irsfd {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Every random draw in the library goes through this engine so that a
// (config, seed) pair fully determines a run on a given standard library.
using Rng = std::mt19937_64;

/// One of the two full-duplex nodes. Per-node quantities (beamformer w_i,
/// loop-interference channel, noise, and the rate R_i measured at that node)
/// are keyed by this type.
enum class Node { S1 = 1, S2 = 2 };

constexpr Node other(Node n) noexcept { return n == Node::S1 ? Node::S2 : Node::S1; }

constexpr int index_of(Node n) noexcept { return n == Node::S1 ? 0 : 1; }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

}  // namespace irsfd
