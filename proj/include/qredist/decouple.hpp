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
#include <optional>
#include <string>

#include "qredist/qcore.hpp"

namespace qredist {

/// Mixed-radix relabeling C -> S (x) Bhat: basis index i goes to
/// (i / |Bhat|, i % |Bhat|). Output systems are named "S" and "Bhat".
IsometryMap reshape_split(const SystemLabel& c, std::size_t s_dim);

/// ||phi_U^{Bhat E} - pi^{Bhat} (x) rho^E||_1 where phi_U = W U rho U^dag W^dag
/// and E is every system of `rho` other than `c`.
double decouple_residual(const DensityOperator& rho, const std::string& c, const Matrix& u,
                         const IsometryMap& w);

struct DecoupleSpec {
  DensityOperator psi;
  DensityOperator phi;  ///< within eps of psi; carries the norms of the bound
  std::string c = "C";
  std::size_t s_dim = 1;
  double eps = 0;
  std::optional<Matrix> w;  ///< explicit C -> S (x) Bhat unitary; mixed radix if unset

  /// Same space, s_dim divides |C|, trace distance within eps.
  void validate() const;
  IsometryMap split() const;
};

enum class DecoupleMode {
  appendix,  ///< E ||phi_U - pi (x) phi^E||_1^2 against the unrooted bound
  robust,    ///< residual of the averaged psi_U against 2 eps + sqrt(bound)
};

struct DecoupleReport {
  DecoupleMode mode = DecoupleMode::appendix;
  double lhs_estimate = 0;
  double lhs_stderr = 0;
  double bound = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;

  std::size_t c_dim = 0, s_dim = 0, b_hat_dim = 0;
  std::size_t rank_e = 0;     ///< ||phi^E||_0
  double two_norm_sq = 0;     ///< ||phi^{CE}||_2^2
  double appendix_bound = 0;  ///< |C| rank_e two_norm_sq / |S|^2

  /// Robust mode only: mean over samples of the per-U residual of psi and
  /// its standard error. Convexity requires lhs_estimate <= mean_residual.
  double mean_residual = 0;
  double mean_residual_stderr = 0;
  bool convexity_holds = true;

  /// The estimate exceeds the bound by more than three standard errors.
  bool violated() const { return lhs_estimate - 3 * lhs_stderr > bound; }
};

/// Monte-Carlo check with `trials` Haar samples; sample t draws from
/// rng.split(t) so the result does not depend on evaluation order.
DecoupleReport verify_decoupling(const DecoupleSpec& spec, std::size_t trials, const Rng& rng,
                                 DecoupleMode mode);

}  // namespace qredist
