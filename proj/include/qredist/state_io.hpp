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

// JSON state files:
//   pure:    {"systems": [{"name": "A", "dim": 2}, ...], "amplitudes": [[re, im], ...]}
//   density: {"systems": [...], "matrix": [[re, im], ...]}   (row-major)

#include <json.hpp>
#include <string>
#include <variant>

#include "qredist/qcore.hpp"

namespace qredist {

using AnyState = std::variant<PureState, DensityOperator>;

nlohmann::json to_json(const PureState& psi);
nlohmann::json to_json(const DensityOperator& rho);
nlohmann::json to_json(const AnyState& state);

AnyState state_from_json(const nlohmann::json& j);
AnyState load_state(const std::string& path);
void save_state(const std::string& path, const AnyState& state);

/// Density operator of either alternative.
DensityOperator as_density(const AnyState& state);

}  // namespace qredist
