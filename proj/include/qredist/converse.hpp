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

#include <vector>

#include "qredist/protocol.hpp"

namespace qredist::converse {

using KrausList = std::vector<Matrix>;

/// Simulation of id_K by id_Q assisted by Psi on L L', in Schmidt form.
/// Encoder Kraus operators are |Q| x |K||L| with input index k |L| + l;
/// decoder ones are |K| x |Q||L| with input index q |L| + l.
struct AssistedSimulation {
  std::size_t k_dim = 1;
  std::size_t q_dim = 1;
  std::size_t l_dim = 1;
  KrausList encoder;
  KrausList decoder;
  RealVector lambda;  ///< Schmidt weights (squared coefficients), sum 1

  void validate() const;

  /// Rotates the L and L' bases of the given channels so that `psi` (on
  /// L (x) L', |L| = |L'|) becomes sum_l sqrt(lambda_l) |l>|l>.
  static AssistedSimulation from_pure_assistance(std::size_t k_dim, std::size_t q_dim, KrausList encoder,
                                                 KrausList decoder, const Ket& psi);
};

/// N_ij = sum_l sqrt(lambda_l) D_jl E_il.
KrausList compose_assisted(const AssistedSimulation& sim);

/// (1 / |K|^2) sum |Tr N_i|^2.
double entanglement_fidelity(const KrausList& n, std::size_t k_dim);
/// <Phi| (id (x) N)(Phi) |Phi> built from the Choi state.
double entanglement_fidelity_choi(const KrausList& n, std::size_t k_dim);

/// ||sum_i N_i^dag N_i - I||_max.
double trace_preservation_residual(const KrausList& n);

struct FidelityAudit {
  double entanglement_fidelity = 0;
  double fidelity_choi = 0;
  double bound = 0;  ///< |Q| / |K|
  double trace_sum = 0;  ///< sum_ij |Tr N_ij|^2
  double cs_bound = 0;   ///< |Q| |K|
  double block_sum = 0;  ///< sum_l lambda_l sum_ij |Tr D_jl E_il|^2
  double block_cs_rhs = 0;  ///< |Q| sum_l lambda_l sum_ij Tr E_il^dag D_jl^dag D_jl E_il
  double encoder_block_residual = 0;
  double decoder_block_residual = 0;
  double composite_tp_residual = 0;
  std::vector<Check> checks;

  bool ok() const;
};

FidelityAudit audit(const AssistedSimulation& sim);

struct RandomSimulationOptions {
  std::size_t l_dim = 2;
  std::size_t extra_env = 1;  ///< extra Stinespring environment beyond the minimum
  bool maximally_entangled = false;
};

/// Channels from Haar Stinespring isometries; Schmidt weights uniform on the
/// simplex unless `maximally_entangled`.
AssistedSimulation random_assisted(std::size_t k_dim, std::size_t q_dim, const RandomSimulationOptions& opt,
                                   Rng& rng);
/// Stinespring channel dim_in -> dim_out with `env` Kraus operators.
KrausList random_channel(std::size_t dim_in, std::size_t dim_out, std::size_t env, Rng& rng);

struct ConverseSummary {
  std::size_t k_dim = 0;
  std::size_t q_dim = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double bound = 0;
  double max_fidelity = 0;
  double max_excess = 0;  ///< max F - |Q|/|K|
  double max_path_gap = 0;
  double max_trace_sum_ratio = 0;  ///< max sum|Tr N|^2 / (|Q||K|)
  double max_block_residual = 0;
  std::size_t violations = 0;
};

/// Trial t uses rng.split(t); assistance alternates between a maximally
/// entangled and a random Schmidt spectrum.
ConverseSummary random_audit(std::size_t k_dim, std::size_t q_dim, std::size_t trials, const Rng& rng,
                             std::size_t l_dim = 2);

struct SsaReport {
  double i_cr_given_b = 0;
  double i_cr_given_a = 0;
  double duality_gap = 0;      ///< |I(C;R|A) - I(C;R|B)|
  double forwardable_gap = 0;  ///< I(C;RB)/2 - I(C;B)/2
  std::size_t n = 0;
  double delta = 0;
  double log2_q = 0;   ///< floor(n I(C;RB)/2 + n delta)
  double log2_k = 0;   ///< floor(n I(C;B)/2)
  double fidelity_bound = 0;  ///< min(1, |Q| / |K|) at this n
  double exponent = 0;        ///< I(C;R|B)/2 + delta; negative would force the bound to 0
  bool saturated = false;
  std::vector<Check> checks;
};

SsaReport ssa_operational_audit(const PureState& psi, const Partition& p, std::size_t n = 16,
                                double delta = 0.01);

struct SsaSummary {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double min_cmi = 0;
  double max_duality_gap = 0;
  std::size_t violations = 0;
};

/// Random pure states on A C B R with the given dimensions.
SsaSummary ssa_random_audit(const std::vector<std::size_t>& dims, std::size_t trials, const Rng& rng);

}  // namespace qredist::converse
