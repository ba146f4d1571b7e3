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

#include <optional>
#include <string>
#include <vector>

#include "qredist/discern.hpp"
#include "qredist/entropy.hpp"

namespace qredist {

/// Fuses the partition groups into systems named A, C, B, R (in that order);
/// empty groups become dimension-one systems.
PureState canonicalize(const PureState& psi, const Partition& p);

/// One inequality of a proof chain, evaluated numerically: lhs <= rhs.
struct Check {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  bool ok = false;
};

Check make_check(std::string name, double lhs, double rhs, double tol = tol::ent);

struct RedistInstance {
  PureState psi;  ///< on A, C, B, R
  PureState phi;  ///< decoupling reference, within eps of psi
  PureState chi;  ///< discrimination reference, within eps of psi
  std::size_t b_hat_dim = 1;
  std::size_t kappa = 1;
  double eps = 0;
  bool ghz_check = false;

  /// Instance with phi = chi = psi and eps = 0.
  static RedistInstance exact(const PureState& psi, std::size_t b_hat_dim, std::size_t kappa);

  void validate() const;
  std::size_t c_dim() const { return psi.space().at("C").dim; }
  std::size_t s_dim() const { return c_dim() / b_hat_dim; }
};

/// Terms of the error parameter
///   eta = 6 sqrt(eps) + 4 (|C| ||phi^{BR}||_0 ||phi^{CBR}||_2^2 / |S|^2)^{1/4}
///         + 4 kappa ||chi^{CB}||_0 ||chi^B||_inf / |C|.
struct EtaBreakdown {
  double decoupling_ratio = 0;  ///< |C| ||phi^{BR}||_0 ||phi^{CBR}||_2^2 / |S|^2
  double rank_phi_br = 0;
  double two_norm_sq_phi_cbr = 0;
  double rank_chi_cb = 0;
  double inf_norm_chi_b = 0;

  double eps_term = 0;
  double decoupling_term = 0;
  double discrimination_term = 0;
  double eta = 0;

  double lemma3_bound = 0;  ///< 2 eps + sqrt(ratio), bounds 1 - E F_ave
  double ef_bound = 0;      ///< sqrt(2 eps) + ratio^{1/4}, bounds E sqrt(1 - F_ave)
  double chain_eta = 0;     ///< 4 ef_bound + eps + discrimination_term
};

EtaBreakdown compute_eta(const RedistInstance& inst);

/// Coherent-channel check with a maximally entangled R' K_in attached.
struct GhzReport {
  double ghz_overlap = 0;        ///< <Gamma|<psi|Omega>
  double ghz_fidelity = 0;       ///< F(Gamma, Omega^{R' K_in K})
  double global_distance = 0;    ///< ||Omega^{ACBR} - psi||_1
  double global_fidelity = 0;    ///< |<Gamma, psi|Omega>|^2
  double omega_norm = 0;
  std::vector<Check> checks;
};

struct RedistOutcome {
  std::size_t c_dim = 0, s_dim = 0, b_hat_dim = 0, kappa = 0;
  double eps = 0;

  std::vector<IsometryMap> encoders;  ///< Ahat A C -> A S
  IsometryMap decoder;                ///< S Bhat B -> C B K

  std::vector<double> decoupling_fidelity;  ///< F_k = |<psi_k|psi'_k>|^2
  std::vector<double> miss_prob;            ///< P_k = Tr (I - Lambda_k) psi'^{CB}_k
  std::vector<double> overlaps;             ///< <k|<psi| W V_k |Phi>|psi>
  double achieved_mean_overlap = 0;
  double coherifier_mean_overlap = 0;  ///< same quantity through the coherification route

  double f_ave = 0;
  double p_ave = 0;        ///< with the received states psi'_k
  double p_lemma = 0;      ///< 1 - (1/kappa) sum_k Tr psi_k Lambda_k
  double d_ave = 0;
  double max_encoder_residual = 0;  ///< max_k ||V_k^dag V_k - I||

  EtaBreakdown eta;
  std::vector<Check> checks;
  std::optional<GhzReport> ghz;

  double one_shot_bound() const { return 1 - 2 * eta.eta; }
  /// The one-shot guarantee is only asserted when eta < 1/2.
  bool bound_applies() const { return eta.eta < 0.5; }
  bool bound_holds() const {
    return !bound_applies() || achieved_mean_overlap >= one_shot_bound() - tol::ent;
  }
};

/// Runs the one-shot construction; unitary k is drawn from rng.split(k).
RedistOutcome run_one_shot(const RedistInstance& inst, const Rng& rng);

}  // namespace qredist
