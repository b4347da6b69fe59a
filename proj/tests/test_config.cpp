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

#include <filesystem>
#include <fstream>

#include "irsfd/config.hpp"
#include "irsfd/types.hpp"

using namespace irsfd;
using Catch::Matchers::WithinRel;

TEST_CASE("defaults describe the reference scenario", "[config]") {
  SystemConfig cfg;
  CHECK(cfg.M == 4);
  CHECK(cfg.N == 40);
  CHECK_THAT(linear_to_db(cfg.P1), WithinRel(15.0, 1e-12));
  CHECK_THAT(linear_to_db(cfg.sigma1_sq), WithinRel(-80.0, 1e-12));
  CHECK(cfg.ple_direct == 3.5);
  CHECK(cfg.li_pl_db == -90.0);
  CHECK(cfg.epsilon == 1e-3);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("validate rejects broken invariants", "[config]") {
  auto bad = [](auto mutate) {
    SystemConfig cfg;
    mutate(cfg);
    return cfg;
  };
  CHECK_THROWS_AS(bad([](SystemConfig& c) { c.M = 0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](SystemConfig& c) { c.N = 0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](SystemConfig& c) { c.P2 = 0.0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](SystemConfig& c) { c.sigma1_sq = -1.0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](SystemConfig& c) { c.d_s1i_h = 60.0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](SystemConfig& c) { c.d_s1i_h = -1.0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](SystemConfig& c) { c.epsilon = 0.0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](SystemConfig& c) { c.phase_constraint = PhaseConstraint::discrete(0); }).validate(),
                  std::invalid_argument);
  CHECK_NOTHROW(bad([](SystemConfig& c) { c.d_s1i_h = c.d_s1s2; }).validate());
}

TEST_CASE("phase constraint names", "[config]") {
  CHECK(to_string(PhaseConstraint::unit_modulus()) == "unit");
  CHECK(to_string(PhaseConstraint::amplitude_bounded()) == "amp");
  CHECK(to_string(PhaseConstraint::discrete(2)) == "discrete2");
  CHECK(parse_phase_constraint("discrete_3") == PhaseConstraint::discrete(3));
  CHECK(parse_phase_constraint("amplitude_bounded") == PhaseConstraint::amplitude_bounded());
  for (auto c : {PhaseConstraint::unit_modulus(), PhaseConstraint::amplitude_bounded(), PhaseConstraint::discrete(1)})
    CHECK(parse_phase_constraint(to_string(c)) == c);
  CHECK_THROWS_AS(parse_phase_constraint("discrete"), std::invalid_argument);
  CHECK_THROWS_AS(parse_phase_constraint("circle"), std::invalid_argument);
}

TEST_CASE("parse_config reads dBW and keeps defaults", "[config]") {
  const auto cfg = parse_config(R"({"m": 2, "n": 8, "p1": 10, "sigma2_sq": -90,
                                    "phase_constraint": "discrete", "phase_bits": 2})");
  CHECK(cfg.M == 2);
  CHECK(cfg.N == 8);
  CHECK_THAT(cfg.P1, WithinRel(10.0, 1e-12));
  CHECK_THAT(cfg.P2, WithinRel(31.622776601683793, 1e-12));
  CHECK_THAT(cfg.sigma2_sq, WithinRel(1e-9, 1e-12));
  CHECK(cfg.phase_constraint == PhaseConstraint::discrete(2));
}

TEST_CASE("parse_config errors", "[config]") {
  CHECK_THROWS_AS(parse_config("{not json"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[1, 2]"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"m": "four"})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"d_s1i_h": 80})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"phase_constraint": "discrete"})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"phase_constraint": "hexagonal"})"), std::invalid_argument);
}

TEST_CASE("dump_config round-trips", "[config]") {
  SystemConfig cfg;
  cfg.M = 3;
  cfg.P2 = db_to_linear(7.5);
  cfg.d_s1i_h = 17.0;
  cfg.phase_constraint = PhaseConstraint::amplitude_bounded();
  cfg.seed = 0xdeadbeefcafeULL;
  const auto back = parse_config(dump_config(cfg));
  CHECK(back.M == 3);
  CHECK_THAT(back.P2, WithinRel(cfg.P2, 1e-12));
  CHECK(back.d_s1i_h == 17.0);
  CHECK(back.phase_constraint == cfg.phase_constraint);
  CHECK(back.seed == cfg.seed);
}

TEST_CASE("load_config reports the path", "[config]") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto good = dir / "irsfd_test_config.json";
  std::ofstream(good) << R"({"n": 12})";
  CHECK(load_config(good).N == 12);

  const auto broken = dir / "irsfd_test_config_broken.json";
  std::ofstream(broken) << R"({"n": 0})";
  try {
    load_config(broken);
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("irsfd_test_config_broken.json") != std::string::npos);
  }
  CHECK_THROWS(load_config(dir / "irsfd_does_not_exist.json"));
}
