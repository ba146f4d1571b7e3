// Copyright 2026 The qredist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>

#include "qredist/state_io.hpp"

namespace qredist {

/// One CLI invocation. Fields a subcommand does not read are ignored.
///
/// State sources: a state file path, "gen:<name>" (see generate_state; the
/// dims come from `dims`), or "diag:p0,p1,..." for a diagonal density
/// operator on one system named q0.
struct ExperimentConfig {
  std::string subcommand;
  std::string state;
  std::string dims;
  std::string partition;
  std::string perturbed;
  std::string ensemble;
  std::string c_system = "C";
  std::string mode = "appendix";
  std::string check;
  std::string derive;

  std::optional<std::size_t> n;
  std::optional<double> delta;
  std::optional<double> eps;
  std::size_t kappa = 1;
  std::size_t bhat = 1;
  std::size_t s_dim = 1;
  std::size_t trials = 100;
  std::size_t k_dim = 2, q_dim = 1, l_dim = 2;
  double q_rate = 0, kappa_rate = 0;
  std::size_t max_dim = 32, max_kappa = 4, max_d = 8;
  bool ghz = false;

  std::optional<std::uint64_t> seed;
  std::string format = "json";  ///< json, csv or text
  std::string output;           ///< empty writes to stdout
  std::size_t threads = 1;

  /// True when the run draws random numbers and therefore needs a seed.
  bool stochastic() const;
  /// Throws ValidationError for unknown subcommands, formats, zero
  /// dimensions and a missing seed on a stochastic run.
  void validate() const;
  nlohmann::json to_json() const;
};

struct RunRecord {
  ExperimentConfig config;
  std::string version;
  double wall_clock_seconds = 0;
  nlohmann::json result;
  int exit_code = 0;  ///< 0, or 3 when an audited bound failed

  nlohmann::json to_json() const;
};

/// Library build version (git describe of the source tree).
std::string version();

/// Loads or generates the state named by `source`.
AnyState load_source(const std::string& source, const std::string& dims, Rng* rng);
/// The pure state behind `state`; a density operator must have rank one.
PureState require_pure(const AnyState& state);

/// Validates, dispatches to the owning module and collects the payload.
/// Input errors surface as ValidationError.
RunRecord run(const ExperimentConfig& config);

std::string render(const RunRecord& record, const std::string& format);
/// Leaf values of `j` as "path,value" rows with dotted paths.
std::string flatten_csv(const nlohmann::json& j);
/// Writes to `path` + ".tmp" and renames over `path`.
void write_atomically(const std::string& path, const std::string& content);

}  // namespace qredist
