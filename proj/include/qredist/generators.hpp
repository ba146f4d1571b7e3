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

#include <string>
#include <vector>

#include "qredist/entropy.hpp"

namespace qredist::gen {

// Fixture states. Systems are named q0, q1, ... unless dims carry names.

/// (|00> + |11>) / sqrt 2 on q0 q1.
PureState bell();
/// (|0...0> + |1...1>) / sqrt 2 on n qubits.
PureState ghz(std::size_t n);
inline PureState ghz4() { return ghz(4); }
/// sum_i |ii> / sqrt d on q0 q1.
PureState maxent(std::size_t d);
/// Tensor of the factors, systems renamed q0, q1, ... in order.
PureState product(const std::vector<PureState>& factors);
/// Haar-random pure state on the given systems.
PureState random(const std::vector<SystemLabel>& systems, Rng& rng);

/// "C=16,E=2" keeps the names; "2,2,2" names the systems q0, q1, q2.
std::vector<SystemLabel> parse_dims(const std::string& text);

/// Generators: bell, ghz4, ghz (dims give the qubit count), maxent (one dim),
/// product (random single-system factors), random. The last two need `rng`.
PureState generate_state(const std::string& name, const std::vector<SystemLabel>& dims, Rng* rng);
bool needs_rng(const std::string& name);

/// "A=0,C=1,B=2+3,R=4": each group lists system indices or names joined by
/// '+'; omitted groups are empty.
Partition parse_partition(const std::string& text, const Space& space);

}  // namespace qredist::gen
