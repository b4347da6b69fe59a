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

// Per-iteration cost of the two update blocks.

#include <benchmark/benchmark.h>

#include "irsfd/solver.hpp"

namespace {

using namespace irsfd;

struct Fixture {
  SystemConfig cfg;
  ChannelSet ch;
  BeamState state;

  explicit Fixture(int N, int M = 4) {
    cfg.N = N;
    cfg.M = M;
    Rng rng(1);
    ch = generate_channels(cfg, rng);
    SolverOptions o = SolverOptions::from(cfg);
    o.phase_init = PhaseInit::Random;
    state = initialize(ch, cfg, o, rng);
  }
};

void BM_ReflectStep(benchmark::State& st) {
  Fixture f(static_cast<int>(st.range(0)));
  const CVector x0 = augment(f.state.theta);
  for (auto _ : st) {
    const PhiPair phi = build_phi(f.ch, f.state, f.cfg);
    benchmark::DoNotOptimize(reflect_map(phi, x0, PhaseConstraint::unit_modulus()));
  }
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_ReflectStep)->RangeMultiplier(2)->Range(25, 800)->Complexity();

void BM_AcceleratedReflectStep(benchmark::State& st) {
  Fixture f(static_cast<int>(st.range(0)));
  const CVector x0 = augment(f.state.theta);
  const PhaseConstraint unit = PhaseConstraint::unit_modulus();
  for (auto _ : st) {
    const PhiPair phi = build_phi(f.ch, f.state, f.cfg);
    const auto F = [&](const CVector& x) { return reflect_map(phi, x, unit); };
    const auto g = [&](const CVector& x) { return reflect_objective(phi, x); };
    const auto proj = [&](const CVector& x) { return project_augmented(x, unit, x0); };
    benchmark::DoNotOptimize(squarem_step(x0, F, g, proj));
  }
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_AcceleratedReflectStep)->RangeMultiplier(2)->Range(25, 800)->Complexity();

void BM_TransmitStep(benchmark::State& st) {
  Fixture f(40, static_cast<int>(st.range(0)));
  for (auto _ : st) {
    BeamState s = f.state;
    benchmark::DoNotOptimize(transmit_update(f.ch, f.cfg, s, Node::S1));
  }
}
BENCHMARK(BM_TransmitStep)->Arg(1)->Arg(4)->Arg(16)->Arg(64);

void BM_Solve(benchmark::State& st) {
  Fixture f(static_cast<int>(st.range(0)));
  const bool accel = st.range(1) != 0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(solve_from(f.ch, f.cfg, SolverOptions::from(f.cfg, accel), f.state));
  }
}
BENCHMARK(BM_Solve)->ArgsProduct({{20, 40, 60}, {0, 1}})->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
