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

#include "irsfd/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "irsfd/types.hpp"

namespace irsfd {

using nlohmann::json;

std::string to_string(const PhaseConstraint& c) {
  switch (c.kind) {
    case PhaseConstraint::Kind::UnitModulus:
      return "unit";
    case PhaseConstraint::Kind::AmplitudeBounded:
      return "amp";
    case PhaseConstraint::Kind::Discrete:
      return "discrete" + std::to_string(c.bits);
  }
  return "unknown";
}

PhaseConstraint parse_phase_constraint(std::string_view name) {
  if (name == "unit" || name == "unit_modulus") return PhaseConstraint::unit_modulus();
  if (name == "amp" || name == "amplitude_bounded") return PhaseConstraint::amplitude_bounded();
  if (name.starts_with("discrete")) {
    auto digits = name.substr(8);
    if (!digits.empty() && digits.front() == '_') digits.remove_prefix(1);
    int bits = 0;
    try {
      bits = std::stoi(std::string(digits));
    } catch (const std::exception&) {
      throw std::invalid_argument("phase constraint '" + std::string(name) +
                                  "' needs a bit count, e.g. discrete2");
    }
    return PhaseConstraint::discrete(bits);
  }
  throw std::invalid_argument("unknown phase constraint '" + std::string(name) + "'");
}

void SystemConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("SystemConfig: " + what); };
  if (M < 1) fail("M must be >= 1");
  if (N < 1) fail("N must be >= 1");
  if (!(P1 > 0.0) || !(P2 > 0.0)) fail("transmit powers must be positive");
  if (!(sigma1_sq > 0.0) || !(sigma2_sq > 0.0)) fail("noise variances must be positive");
  if (!(d_s1s2 > 0.0)) fail("d_s1s2 must be positive");
  if (!(d_s1i_h >= 0.0 && d_s1i_h <= d_s1s2)) fail("d_s1i_h must lie in [0, d_s1s2]");
  if (!(d_v >= 0.0)) fail("d_v must be non-negative");
  if (!(d_ref > 0.0)) fail("d_ref must be positive");
  if (!(epsilon > 0.0)) fail("epsilon must be positive");
  if (max_iters < 1) fail("max_iters must be >= 1");
  if (phase_constraint.kind == PhaseConstraint::Kind::Discrete && phase_constraint.bits < 1)
    fail("discrete phase constraint needs at least one bit");
}

namespace {

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

void read_dbw(const json& j, const char* key, double& watts) {
  if (auto it = j.find(key); it != j.end()) watts = db_to_linear(it->get<double>());
}

}  // namespace

SystemConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");

  SystemConfig cfg;
  try {
    read(j, "m", cfg.M);
    read(j, "n", cfg.N);
    read_dbw(j, "p1", cfg.P1);
    read_dbw(j, "p2", cfg.P2);
    read_dbw(j, "sigma1_sq", cfg.sigma1_sq);
    read_dbw(j, "sigma2_sq", cfg.sigma2_sq);
    read(j, "d_s1s2", cfg.d_s1s2);
    read(j, "d_s1i_h", cfg.d_s1i_h);
    read(j, "d_v", cfg.d_v);
    read(j, "pl_ref_db", cfg.pl_ref_db);
    read(j, "d_ref", cfg.d_ref);
    read(j, "ple_s1i", cfg.ple_s1i);
    read(j, "ple_is2", cfg.ple_is2);
    read(j, "ple_s2i", cfg.ple_s2i);
    read(j, "ple_is1", cfg.ple_is1);
    read(j, "ple_direct", cfg.ple_direct);
    read(j, "li_pl_db", cfg.li_pl_db);
    read(j, "rician_k_db", cfg.rician_k_db);
    read(j, "epsilon", cfg.epsilon);
    read(j, "max_iters", cfg.max_iters);
    read(j, "seed", cfg.seed);
    if (auto it = j.find("phase_constraint"); it != j.end()) {
      const auto name = it->get<std::string>();
      if (name == "discrete") {
        // Bit count carried separately.
        if (!j.contains("phase_bits")) throw std::invalid_argument("config: 'discrete' needs 'phase_bits'");
        cfg.phase_constraint = PhaseConstraint::discrete(j.at("phase_bits").get<int>());
      } else {
        cfg.phase_constraint = parse_phase_constraint(name);
      }
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

SystemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

std::string dump_config(const SystemConfig& cfg) {
  json j;
  j["m"] = cfg.M;
  j["n"] = cfg.N;
  j["p1"] = linear_to_db(cfg.P1);
  j["p2"] = linear_to_db(cfg.P2);
  j["sigma1_sq"] = linear_to_db(cfg.sigma1_sq);
  j["sigma2_sq"] = linear_to_db(cfg.sigma2_sq);
  j["d_s1s2"] = cfg.d_s1s2;
  j["d_s1i_h"] = cfg.d_s1i_h;
  j["d_v"] = cfg.d_v;
  j["pl_ref_db"] = cfg.pl_ref_db;
  j["d_ref"] = cfg.d_ref;
  j["ple_s1i"] = cfg.ple_s1i;
  j["ple_is2"] = cfg.ple_is2;
  j["ple_s2i"] = cfg.ple_s2i;
  j["ple_is1"] = cfg.ple_is1;
  j["ple_direct"] = cfg.ple_direct;
  j["li_pl_db"] = cfg.li_pl_db;
  j["rician_k_db"] = cfg.rician_k_db;
  if (cfg.phase_constraint.kind == PhaseConstraint::Kind::Discrete) {
    j["phase_constraint"] = "discrete";
    j["phase_bits"] = cfg.phase_constraint.bits;
  } else {
    j["phase_constraint"] = cfg.phase_constraint.kind == PhaseConstraint::Kind::UnitModulus
                                ? "unit_modulus"
                                : "amplitude_bounded";
  }
  j["epsilon"] = cfg.epsilon;
  j["max_iters"] = cfg.max_iters;
  j["seed"] = cfg.seed;
  return j.dump(2);
}

}  // namespace irsfd
