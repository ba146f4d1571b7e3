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

#include "qredist/protocol.hpp"
#include "qredist/typical.hpp"

namespace qredist {

struct IidOptions {
  std::size_t n = 1;
  double delta = 0.1;
  double q_rate = 0;      ///< target |S| = 2^{floor(n Q)}
  double kappa_rate = 0;  ///< target kappa = 2^{floor(n R)}
  std::size_t state_cap = std::size_t{1} << 14;
  std::size_t projector_cap = TypicalProjector::kDefaultCap;
};

struct IidReport {
  std::size_t n = 0;
  double delta = 0;
  std::size_t typical_c_dim = 0;  ///< |C_delta|
  std::size_t s_dim = 0;
  std::size_t b_hat_dim = 0;
  std::size_t kappa = 0;

  double abort_prob = 0;  ///< 1 - Tr Pi_C psi_C^{(x) n}
  double eps_compressed = 0;  ///< ||Psi - psi^{(x) n}||_1
  double eps_phi = 0;         ///< ||phi - psi^{(x) n}||_1 (A, C, BR projections)
  double eps_chi = 0;         ///< ||chi - psi^{(x) n}||_1 (AR, B, C projections)
  double eps = 0;             ///< max of the three

  double q_rate_realized = 0;  ///< (1/n) log2 |S|
  double e_in = 0;             ///< (1/n) log2 (|C_delta| / |S|)
  double e_in_reference = 0;   ///< (1/2) I(C;A) - delta + 1/n

  RedistOutcome one_shot;
  double final_fidelity = 0;  ///< F(Gamma (x) psi^{(x) n}, Omega)
  double fidelity_bound = 0;  ///< 1 - eps - 3 sqrt(eta)
  bool abort_within_eps() const { return abort_prob <= eps + tol::ent; }
};

/// The n-copy experiment: Schumacher-compress C^n onto its typical subspace,
/// build the two auxiliary states from typical projections, and run the
/// one-shot construction on the restricted state.
IidReport run_iid_experiment(const PureState& psi, const Partition& p, const IidOptions& opt,
                             const Rng& rng);

/// Divisor of `t` closest to `target` in log scale; ties go to the larger one.
std::size_t nearest_divisor(std::size_t t, double target);

}  // namespace qredist
