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

#include "qredist/entropy.hpp"
#include "qredist/resources.hpp"

namespace qredist::resources {

inline const std::string kICRB = "I(C;RB)";
inline const std::string kICA = "I(C;A)";
inline const std::string kICB = "I(C;B)";

/// Entropic atoms of the corner derivation, evaluated on psi and snapped.
Valuation corner_atoms(const PureState& psi, const Partition& p);

/// psi^{AC|B} + a/2 [q->q] + b/2 [qq] >~ psi^{A|CB} + c [q->qq] with
/// a = I(C;RB), b = I(C;A), c = I(C;B).
Inequality piggyback_premise(const Rate& i_c_rb, const Rate& i_c_a, const Rate& i_c_b);

struct CornerAssembly {
  Derivation derivation;
  std::size_t aux_step = 0;   ///< composite before cancellation
  Rate q;                     ///< net [q->q] rate, left minus right
  Rate e;                     ///< net [qq] rate, left minus right
  Rate q_expected;            ///< I(C;RB)/2 - I(C;B)/2
  Rate e_expected;            ///< I(C;A)/2 - I(C;B)/2
  bool sublinear_communication = false;
  bool sublinear_entanglement = false;
  Rational q_value{0};
  Rational e_value{0};

  bool matches_corner() const { return q == q_expected && e == e_expected; }
};

/// Premise -> coherent-channel identity (scaled, padded) -> compose ->
/// cancel [q->q] -> cancel [qq]. With `symbolic` the three mutual
/// informations stay atoms and `values` only settles the cancellation
/// branches; otherwise the rates are the exact values from the start, and
/// every one of them must be positive.
CornerAssembly assemble_corner(const Valuation& values, bool symbolic = true);

}  // namespace qredist::resources
