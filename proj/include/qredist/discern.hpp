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
#include <vector>

#include "qredist/qcore.hpp"

namespace qredist {

/// Pretty good measurement Lambda_k = Lambda^{-1/2} Pi_k Lambda^{-1/2} with
/// Lambda = sum_k Pi_k, completed by the abstain element I - supp(Lambda).
struct PGM {
  Space space;
  std::vector<Matrix> povm;
  std::vector<Matrix> projectors;
  Matrix lambda;
  Matrix failure;

  std::size_t size() const { return povm.size(); }
  /// ||sum_k Lambda_k + failure - I||_max.
  double completeness_residual() const;
};

/// Projects onto the support of each state.
PGM build_pgm(const std::vector<DensityOperator>& states);
PGM build_pgm_from_projectors(const Space& space, std::vector<Matrix> projectors);

/// Tr (I - Lambda_k) rho; abstention counts as a miss.
double pgm_miss_prob(const PGM& pgm, std::size_t k, const DensityOperator& rho);
/// Same for an operator without trace contract (e.g. a subnormalized marginal).
double pgm_miss_prob(const PGM& pgm, std::size_t k, const Operator& rho);

/// Smallest eigenvalue of [2(I - Pi) + 4(Lambda - Pi)] - [I - Lambda^{-1/2} Pi Lambda^{-1/2}].
/// Throws ValidationError unless 0 <= Pi <= I and Pi <= Lambda within tol::psd.
double check_hayashi(const Matrix& pi, const Matrix& lambda);

struct CoherifierResult {
  IsometryMap isometry;  ///< D -> D (x) K with K last
  std::vector<Complex> phases;
  std::vector<double> overlaps;  ///< <k|<psi| L |psi'_k>, real after phase fixing
  double mean_overlap = 0;
  double miss_prob = 0;  ///< P = 1 - (1/kappa) sum_k Tr psi_k Lambda_k
  double fidelity = 0;   ///< F = (1/kappa) sum_k |<psi_k|psi'_k>|^2

  /// Per-k terms of the proof chain.
  std::vector<double> hit_prob;  ///< Tr psi_k Lambda_k
  std::vector<double> distance;  ///< ||psi_k - psi'_k||_1

  double bound() const;  ///< 1 - 2 (P + sqrt(1 - F))
  /// overlap >= overlap^2 >= (Tr psi_k Lambda_k)^2 - ||psi_k - psi'_k||_1 for
  /// every k, within tol::ent.
  bool chain_holds() const;
  bool bound_holds() const { return mean_overlap >= bound() - tol::ent; }
};

/// L = sum_k (alpha_k U_k^dag sqrt(Lambda_k)) (x) |k>, with phases making each
/// overlap with psi_k' = target k real and nonnegative. `psi` lives on D (x) E
/// with D the systems `d`; `targets` may be subnormalized.
CoherifierResult coherify(const PureState& psi, const Labels& d, const std::vector<Matrix>& unitaries,
                          const std::vector<Ket>& targets, const PGM& pgm,
                          const std::string& k_name = "K");

/// Random (Pi, Lambda) pairs with Pi a projector and Lambda = Pi + G G^dag u,
/// dimensions 2..max_dim; trial t draws from rng.split(t).
struct HayashiSummary {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t max_dim = 0;
  double min_slack = 0;
  std::size_t argmin_dim = 0;
};

HayashiSummary hayashi_random_audit(std::size_t trials, std::size_t max_dim, const Rng& rng);

/// Random coherification instances: kappa in 1..max_kappa, |D| in
/// 2..max_d, |E| in {1, 2}, Haar U_k and targets perturbed from U_k psi and
/// scaled down by up to 10%.
struct CoherifySummary {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t bound_violations = 0;
  std::size_t chain_violations = 0;
  double min_margin = 0;  ///< min over trials of mean_overlap - bound()
  double mean_overlap_min = 0;
};

CoherifySummary coherify_random_audit(std::size_t trials, std::size_t max_kappa, std::size_t max_d,
                                      const Rng& rng);

}  // namespace qredist
