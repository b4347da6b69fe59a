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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "irsfd/solver.hpp"

using namespace irsfd;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SystemConfig small_config(int N = 16) {
  SystemConfig cfg;
  cfg.N = N;
  return cfg;
}

void check_feasible(const BeamState& s, const SystemConfig& cfg) {
  CHECK(s.w1.squaredNorm() <= cfg.P1 + 1e-9);
  CHECK(s.w2.squaredNorm() <= cfg.P2 + 1e-9);
  CHECK(std::isfinite(s.objective));
  CHECK(s.objective >= 0.0);
  for (auto t : s.theta) {
    if (cfg.phase_constraint.kind == PhaseConstraint::Kind::AmplitudeBounded)
      CHECK(std::abs(t) <= 1.0 + 1e-12);
    else
      CHECK_THAT(std::abs(t), WithinAbs(1.0, 1e-12));
  }
}

}  // namespace

TEST_CASE("initialization schemes", "[solver]") {
  const auto cfg = small_config();
  Rng ch_rng(1);
  const auto ch = generate_channels(cfg, ch_rng);

  SolverOptions o = SolverOptions::from(cfg);
  Rng a(5), b(6);
  const auto s1 = initialize(ch, cfg, o, a);
  const auto s2 = initialize(ch, cfg, o, b);
  CHECK(s1.theta == CVector::Ones(cfg.N));
  CHECK(s1.w1 == s2.w1);  // ones + MRT ignores the rng
  CHECK_THAT(s1.w1.squaredNorm(), WithinRel(cfg.P1, 1e-12));
  CHECK_THAT(s1.w2.squaredNorm(), WithinRel(cfg.P2, 1e-12));
  const CVector h = effective_channel(ch, Node::S2, s1.theta);
  CHECK_THAT(std::abs(h.dot(s1.w1)), WithinRel(h.norm() * std::sqrt(cfg.P1), 1e-12));

  o.phase_init = PhaseInit::Random;
  o.beam_init = BeamInit::Random;
  Rng c(5), d(5);
  const auto r1 = initialize(ch, cfg, o, c);
  const auto r2 = initialize(ch, cfg, o, d);
  CHECK(r1.theta == r2.theta);
  CHECK(r1.w2 == r2.w2);
  CHECK(r1.theta != CVector::Ones(cfg.N));
  CHECK_THAT(r1.w2.squaredNorm(), WithinRel(cfg.P2, 1e-12));
}

TEST_CASE("MRT init falls back to a random direction on a dead channel", "[solver]") {
  auto cfg = small_config(4);
  Rng rng(2);
  auto ch = generate_channels(cfg, rng);
  ch.H_s1i.setZero();
  ch.h_s1s2.setZero();
  Rng r(3);
  const auto s = initialize(ch, cfg, SolverOptions::from(cfg), r);
  CHECK(s.w1.allFinite());
  CHECK_THAT(s.w1.squaredNorm(), WithinRel(cfg.P1, 1e-12));
}

TEST_CASE("transmit update never decreases the sum rate", "[solver][property]") {
  const auto cfg = small_config();
  for (int seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const auto ch = generate_channels(cfg, rng);
    SolverOptions o = SolverOptions::from(cfg);
    o.phase_init = PhaseInit::Random;
    o.beam_init = BeamInit::Random;
    BeamState s = initialize(ch, cfg, o, rng);
    double prev = s.objective;
    for (int k = 0; k < 10; ++k) {
      const double cur = transmit_update(ch, cfg, s, k % 2 ? Node::S2 : Node::S1);
      CHECK(cur >= prev - 1e-9);
      prev = cur;
    }
  }
}

TEST_CASE("reflect map never decreases the reflect objective", "[solver][property]") {
  const auto cfg = small_config();
  for (int seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const auto ch = generate_channels(cfg, rng);
    SolverOptions o = SolverOptions::from(cfg);
    o.phase_init = PhaseInit::Random;
    const BeamState s = initialize(ch, cfg, o, rng);
    const PhiPair phi = build_phi(ch, s, cfg);
    for (auto c : {PhaseConstraint::unit_modulus(), PhaseConstraint::amplitude_bounded()}) {
      CVector x = augment(s.theta);
      double g = reflect_objective(phi, x);
      for (int k = 0; k < 10; ++k) {
        x = reflect_map(phi, x, c);
        CHECK(x(cfg.N) == cplx(1.0, 0.0));
        const double next = reflect_objective(phi, x);
        CHECK(next >= g - 1e-9 * std::max(1.0, g));
        g = next;
      }
    }
  }
}

TEST_CASE("squarem step on a linear contraction", "[solver]") {
  // F(x) = x* + 0.5 (x - x*): the extrapolation lands on the fixed point.
  CVector star(3);
  star << 1.0, cplx(0.0, 2.0), -1.0;
  const auto F = [&](const CVector& x) { return CVector(star + 0.5 * (x - star)); };
  const auto g = [&](const CVector& x) { return -(x - star).squaredNorm(); };
  const auto id = [](const CVector& x) { return x; };
  const CVector x0 = CVector::Zero(3);
  const auto step = squarem_step(x0, F, g, id);
  CHECK(step.extrapolated);
  CHECK(step.halvings == 0);
  CHECK(step.theta_aug.isApprox(star, 1e-12));

  // Fixed point: no movement.
  const auto still = squarem_step(star, F, g, id);
  CHECK_FALSE(still.extrapolated);
  CHECK(still.theta_aug == star);
}

TEST_CASE("squarem step backtracks to the plain double step", "[solver]") {
  CVector star = CVector::Ones(2);
  const auto F = [&](const CVector& x) { return CVector(star + 0.5 * (x - star)); };
  const CVector x0 = CVector::Zero(2);
  const CVector x2 = F(F(x0));
  // An objective that penalizes anything but x2 forces every candidate to fail.
  const auto g = [&](const CVector& x) { return -(x - x2).squaredNorm(); };
  const auto id = [](const CVector& x) { return x; };
  const auto step = squarem_step(x0, F, g, id);
  CHECK_FALSE(step.extrapolated);
  CHECK(step.theta_aug == x2);
  CHECK(step.halvings == 10);
}

TEST_CASE("solve is monotone, feasible and converged", "[solver][property]") {
  for (auto c : {PhaseConstraint::unit_modulus(), PhaseConstraint::amplitude_bounded()}) {
    for (bool accel : {false, true}) {
      auto cfg = small_config(24);
      cfg.phase_constraint = c;
      for (int seed = 0; seed < 15; ++seed) {
        Rng rng(1000 + seed);
        const auto ch = generate_channels(cfg, rng);
        SolverOptions o = SolverOptions::from(cfg, accel);
        o.phase_init = PhaseInit::Random;
        const auto res = solve(ch, cfg, o, rng);
        const auto& obj = res.trace.objectives;
        REQUIRE(obj.size() == static_cast<std::size_t>(res.trace.iterations) + 1);
        for (std::size_t k = 1; k < obj.size(); ++k) CHECK(obj[k] >= obj[k - 1] - 1e-9);
        CHECK(res.trace.converged);
        CHECK(res.trace.iterations <= o.max_iters);
        CHECK(res.state.objective == obj.back());
        check_feasible(res.state, cfg);
      }
    }
  }
}

TEST_CASE("solve beats its own starting point and a transmit-only run", "[solver]") {
  const auto cfg = small_config(32);
  Rng rng(17);
  const auto ch = generate_channels(cfg, rng);
  const auto o = SolverOptions::from(cfg);
  const auto res = solve(ch, cfg, o, rng);
  CHECK(res.state.objective > res.trace.objectives.front());

  Rng r2(17);
  BeamState fixed = initialize(ch, cfg, o, r2);
  solve_transmit_only(ch, cfg, fixed, cfg.epsilon, cfg.max_iters);
  CHECK(res.state.objective >= fixed.objective - 1e-9);
}

TEST_CASE("iteration cap is respected", "[solver]") {
  auto cfg = small_config(40);
  Rng rng(3);
  const auto ch = generate_channels(cfg, rng);
  SolverOptions o = SolverOptions::from(cfg);
  o.max_iters = 1;
  o.epsilon = 1e-15;
  const auto res = solve(ch, cfg, o, rng);
  CHECK(res.trace.iterations == 1);
  CHECK(res.trace.objectives.size() == 2);

  o.epsilon = 0.0;
  CHECK_THROWS_AS(solve(ch, cfg, o, rng), std::invalid_argument);
}

TEST_CASE("direct-only channels converge quickly to MRT", "[solver]") {
  auto cfg = small_config(8);
  Rng rng(21);
  auto ch = generate_channels(cfg, rng);
  ch.H_s1i.setZero();
  ch.H_s2i.setZero();
  ch.h_is1.setZero();
  ch.h_is2.setZero();
  ch.h_s1s1.setZero();
  ch.h_s2s2.setZero();
  const auto res = solve(ch, cfg, SolverOptions::from(cfg), rng);
  CHECK(res.trace.converged);
  CHECK(res.trace.iterations <= 3);
  const CVector& h = ch.h_s1s2;
  CHECK_THAT(std::abs(h.dot(res.state.w1)), WithinRel(h.norm() * std::sqrt(cfg.P1), 1e-9));
  check_feasible(res.state, cfg);
}

TEST_CASE("discrete constraint ends on the level grid", "[solver]") {
  auto cfg = small_config(12);
  cfg.phase_constraint = PhaseConstraint::discrete(2);
  Rng rng(8);
  const auto ch = generate_channels(cfg, rng);
  const auto res = solve(ch, cfg, SolverOptions::from(cfg), rng);
  check_feasible(res.state, cfg);
  for (double ph : physical_phases(res.state.theta)) {
    const double k = ph / (std::numbers::pi / 2.0);
    CHECK_THAT(k, WithinAbs(std::round(k), 1e-9));
  }
  CHECK_THAT(res.state.objective, WithinRel(sum_rate(ch, res.state, cfg), 1e-12));
}

TEST_CASE("acceleration reaches a comparable rate", "[solver]") {
  const auto cfg = small_config(40);
  double plain = 0.0, fast = 0.0;
  for (int seed = 0; seed < 20; ++seed) {
    Rng a(seed), b(seed);
    const auto ch = generate_channels(cfg, a);
    plain += solve(ch, cfg, SolverOptions::from(cfg, false), a).state.objective;
    fast += solve(ch, cfg, SolverOptions::from(cfg, true), b).state.objective;
  }
  CHECK_THAT(fast, WithinRel(plain, 0.02));
}
