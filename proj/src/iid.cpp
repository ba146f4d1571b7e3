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

#include "qredist/iid.hpp"

#include <cmath>

namespace qredist {

std::size_t nearest_divisor(std::size_t t, double target) {
  if (t == 0) throw ValidationError("cannot split an empty typical subspace");
  std::size_t best = 1;
  double best_gap = std::abs(std::log2(target));
  for (std::size_t d = 1; d <= t; ++d) {
    if (t % d) continue;
    const double gap = std::abs(std::log2(double(d)) - std::log2(target));
    if (gap <= best_gap + 1e-12) {
      best = d;
      best_gap = gap;
    }
  }
  return best;
}

namespace {

std::string copy_name(const std::string& base, std::size_t i) { return base + std::to_string(i + 1); }

std::vector<Labels> copies(std::size_t n, std::initializer_list<const char*> parties) {
  std::vector<Labels> out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const char* p : parties) out[i].push_back(copy_name(p, i));
  return out;
}

Labels all_copies(std::size_t n, const char* base) {
  Labels out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(copy_name(base, i));
  return out;
}

DensityOperator single_marginal(const PureState& psi, const Labels& keep) {
  return partial_trace(psi, keep);
}

// Fuses the n copies of each party into one system and orders A, C, B, R.
PureState fuse(const Ket& k, std::size_t n, const std::string& c_name) {
  Ket out = merge(k, all_copies(n, "A"), "A");
  out = merge(out, all_copies(n, "B"), "B");
  out = merge(out, all_copies(n, "R"), "R");
  out = rename(out, c_name, "C");
  return PureState::normalize(out.permuted({"A", "C", "B", "R"}));
}

}  // namespace

IidReport run_iid_experiment(const PureState& psi_in, const Partition& p, const IidOptions& opt,
                             const Rng& rng) {
  if (opt.n == 0) throw ValidationError("n must be at least 1");
  const PureState psi = canonicalize(psi_in, p);
  const std::size_t n = opt.n;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > opt.state_cap / psi.space().dim())
      throw ValidationError("n-copy state exceeds the dimension cap of " + std::to_string(opt.state_cap));
    total *= psi.space().dim();
  }

  Ket power;
  for (std::size_t i = 0; i < n; ++i) {
    Ket copy = psi;
    for (const char* s : {"A", "C", "B", "R"}) copy = rename(copy, s, copy_name(s, i));
    power = i == 0 ? copy : tensor(power, copy);
  }
  const PureState iid(power);

  const TypicalProjector pi_c(single_marginal(psi, {"C"}), n, opt.delta, opt.projector_cap);
  const TypicalProjector pi_a(single_marginal(psi, {"A"}), n, opt.delta, opt.projector_cap);
  const TypicalProjector pi_br(single_marginal(psi, {"B", "R"}), n, opt.delta, opt.projector_cap);
  const TypicalProjector pi_ar(single_marginal(psi, {"A", "R"}), n, opt.delta, opt.projector_cap);
  const TypicalProjector pi_b(single_marginal(psi, {"B"}), n, opt.delta, opt.projector_cap);
  if (pi_c.empty()) throw ValidationError("typical subspace of C^n is empty; increase delta");

  const auto c_copies = copies(n, {"C"});
  const Ket compressed = pi_c.project(iid, c_copies);
  Ket phi = pi_br.project(pi_a.project(compressed, copies(n, {"A"})), copies(n, {"B", "R"}));
  Ket chi = pi_b.project(pi_ar.project(compressed, copies(n, {"A", "R"})), copies(n, {"B"}));
  if (phi.norm() == 0 || chi.norm() == 0)
    throw ValidationError("typical projections annihilate the state; increase delta");

  IidReport rep;
  rep.n = n;
  rep.delta = opt.delta;
  rep.abort_prob = 1 - compressed.amplitudes().squaredNorm();
  rep.eps_compressed = trace_distance(iid, PureState::normalize(compressed));
  rep.eps_phi = trace_distance(iid, PureState::normalize(phi));
  rep.eps_chi = trace_distance(iid, PureState::normalize(chi));
  rep.eps = std::max({rep.eps_compressed, rep.eps_phi, rep.eps_chi});

  const std::string cd = "Cd";
  const PureState big_psi = fuse(pi_c.restrict(compressed, c_copies, cd), n, cd);
  const PureState big_phi = fuse(pi_c.restrict(phi, c_copies, cd), n, cd);
  const PureState big_chi = fuse(pi_c.restrict(chi, c_copies, cd), n, cd);

  rep.typical_c_dim = pi_c.trace();
  rep.s_dim = nearest_divisor(rep.typical_c_dim, std::exp2(std::floor(double(n) * opt.q_rate)));
  rep.b_hat_dim = rep.typical_c_dim / rep.s_dim;
  rep.kappa = std::size_t(std::exp2(std::floor(double(n) * opt.kappa_rate)));

  RedistInstance inst;
  inst.psi = big_psi;
  inst.phi = big_phi;
  inst.chi = big_chi;
  inst.b_hat_dim = rep.b_hat_dim;
  inst.kappa = rep.kappa;
  inst.eps = std::max(trace_distance(big_psi, big_phi), trace_distance(big_psi, big_chi));
  inst.ghz_check = true;
  rep.one_shot = run_one_shot(inst, rng);

  rep.q_rate_realized = std::log2(double(rep.s_dim)) / double(n);
  rep.e_in = std::log2(double(rep.b_hat_dim)) / double(n);
  rep.e_in_reference = 0.5 * mutual_info(psi, {"C"}, {"A"}) - opt.delta + 1.0 / double(n);
  // <Gamma|<psi^{(x) n}|Omega> = sqrt(1 - abort) <Gamma|<Psi|Omega> since Omega
  // lies in the typical subspace.
  rep.final_fidelity = (1 - rep.abort_prob) * rep.one_shot.ghz->global_fidelity;
  rep.fidelity_bound = 1 - rep.eps - 3 * std::sqrt(rep.one_shot.eta.eta);
  return rep;
}

}  // namespace qredist
