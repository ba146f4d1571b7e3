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

#include "qredist/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "qredist/decouple.hpp"

namespace qredist {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

double rank_of(const Ket& psi, const Labels& keep) {
  return double(linalg::numerical_rank(marginal_spectrum(psi, keep)));
}

Matrix identity(std::size_t n) {
  return Matrix::Identity(Eigen::Index(n), Eigen::Index(n));
}

}  // namespace

PureState canonicalize(const PureState& psi, const Partition& p) {
  p.validate(psi.space());
  Ket k = psi;
  const Labels names = psi.space().names();
  for (std::size_t i = 0; i < names.size(); ++i) k = rename(k, names[i], "\x01" + std::to_string(i));
  auto tmp = [&](const Labels& group) {
    Labels out;
    for (const auto& n : group) out.push_back("\x01" + std::to_string(psi.space().index_of(n)));
    return out;
  };
  k = merge(k, tmp(p.A), "A");
  k = merge(k, tmp(p.C), "C");
  k = merge(k, tmp(p.B), "B");
  k = merge(k, tmp(p.R), "R");
  return PureState(k.permuted({"A", "C", "B", "R"}));
}

Check make_check(std::string name, double lhs, double rhs, double tol) {
  return Check{std::move(name), lhs, rhs, lhs <= rhs + tol};
}

RedistInstance RedistInstance::exact(const PureState& psi, std::size_t b_hat_dim, std::size_t kappa) {
  RedistInstance inst;
  inst.psi = psi;
  inst.phi = psi;
  inst.chi = psi;
  inst.b_hat_dim = b_hat_dim;
  inst.kappa = kappa;
  return inst;
}

void RedistInstance::validate() const {
  require(psi.space().names() == Labels({"A", "C", "B", "R"}),
          "instance state must be on systems A, C, B, R");
  require(phi.space() == psi.space() && chi.space() == psi.space(),
          "reference states must share the instance space");
  require(kappa >= 1, "kappa must be at least 1");
  require(b_hat_dim >= 1 && c_dim() % b_hat_dim == 0,
          "|Bhat| = " + std::to_string(b_hat_dim) + " does not divide |C| = " + std::to_string(c_dim()));
  require(eps >= 0, "eps must be nonnegative");
  const double dphi = trace_distance(psi, phi);
  const double dchi = trace_distance(psi, chi);
  require(dphi <= eps + tol::norm, "||psi - phi||_1 = " + std::to_string(dphi) + " exceeds eps");
  require(dchi <= eps + tol::norm, "||psi - chi||_1 = " + std::to_string(dchi) + " exceeds eps");
}

EtaBreakdown compute_eta(const RedistInstance& inst) {
  EtaBreakdown e;
  const double c = double(inst.c_dim());
  const double s = double(inst.s_dim());
  e.rank_phi_br = rank_of(inst.phi, {"B", "R"});
  // phi is pure, so the CBR marginal has the spectrum of A.
  e.two_norm_sq_phi_cbr = schatten_of_spectrum(marginal_spectrum(inst.phi, {"A"}), Schatten::two_norm_sq);
  e.rank_chi_cb = rank_of(inst.chi, {"C", "B"});
  e.inf_norm_chi_b = schatten_of_spectrum(marginal_spectrum(inst.chi, {"B"}), Schatten::inf_norm);

  e.decoupling_ratio = c * e.rank_phi_br * e.two_norm_sq_phi_cbr / (s * s);
  e.eps_term = 6 * std::sqrt(inst.eps);
  e.decoupling_term = 4 * std::pow(e.decoupling_ratio, 0.25);
  e.discrimination_term = 4 * double(inst.kappa) * e.rank_chi_cb * e.inf_norm_chi_b / c;
  e.eta = e.eps_term + e.decoupling_term + e.discrimination_term;

  e.lemma3_bound = 2 * inst.eps + std::sqrt(e.decoupling_ratio);
  e.ef_bound = std::sqrt(2 * inst.eps) + std::pow(e.decoupling_ratio, 0.25);
  e.chain_eta = 4 * e.ef_bound + inst.eps + e.discrimination_term;
  return e;
}

namespace {

GhzReport ghz_check(const RedistInstance& inst, const RedistOutcome& out) {
  const std::size_t kappa = inst.kappa;
  const std::size_t bh = inst.b_hat_dim;
  const PureState phi_ab = max_entangled({"Ahat", bh}, {"Bhat", bh});
  const PureState phi_rk = max_entangled({"Rp", kappa}, {"Kin", kappa});
  const Ket start = tensor(tensor(Ket(phi_rk), Ket(phi_ab)), Ket(inst.psi));

  // Sum_k |k><k|^{Kin} (x) V_k on Kin Ahat A C -> Kin A S.
  const Eigen::Index in_d = Eigen::Index(bh * inst.psi.space().dim_of({"A", "C"}));
  const Eigen::Index out_d = out.encoders.front().matrix.rows();
  Matrix controlled = Matrix::Zero(Eigen::Index(kappa) * out_d, Eigen::Index(kappa) * in_d);
  for (std::size_t k = 0; k < kappa; ++k)
    controlled.block(Eigen::Index(k) * out_d, Eigen::Index(k) * in_d, out_d, in_d) = out.encoders[k].matrix;
  const Space kin{{"Kin", kappa}};
  const Ket sent = apply(controlled, start, {"Kin", "Ahat", "A", "C"},
                         kin.concat(out.encoders.front().out));
  const Ket omega = apply(out.decoder, sent);

  Vector g = Vector::Zero(Eigen::Index(kappa * kappa * kappa));
  for (std::size_t k = 0; k < kappa; ++k)
    g(Eigen::Index((k * kappa + k) * kappa + k)) = 1 / std::sqrt(double(kappa));
  const Ket gamma(Space{{"Rp", kappa}, {"Kin", kappa}, {"K", kappa}}, g);

  GhzReport r;
  r.omega_norm = omega.norm();
  const Complex ov = inner(tensor(gamma, Ket(inst.psi)), omega);
  r.ghz_overlap = ov.real();
  r.global_fidelity = std::norm(ov);
  const Operator om_g = partial_trace(omega, {"Rp", "Kin", "K"});
  r.ghz_fidelity = (g.adjoint() * om_g.matrix * g)(0).real();
  r.global_distance = marginal_distance_to_pure(omega, inst.psi);

  const double eta = out.eta.eta;
  r.checks.push_back(make_check("ghz_overlap_matches_mean_overlap",
                                std::abs(r.ghz_overlap - out.achieved_mean_overlap), tol::uhl, 0));
  if (eta < 0.5) {
    r.checks.push_back(make_check("ghz_overlap_ge_1_minus_2eta", 1 - 2 * eta, r.ghz_overlap));
    r.checks.push_back(make_check("ghz_fidelity_ge_1_minus_4eta", 1 - 4 * eta, r.ghz_fidelity));
    r.checks.push_back(make_check("global_distance_le_2sqrt_eta", r.global_distance, 2 * std::sqrt(eta)));
  }
  r.checks.push_back(make_check(
      "combined_fidelity_lemma",
      1 - r.global_distance - 3 * (1 - r.ghz_fidelity), r.global_fidelity));
  return r;
}

}  // namespace

RedistOutcome run_one_shot(const RedistInstance& inst, const Rng& rng) {
  inst.validate();
  RedistOutcome out;
  out.c_dim = inst.c_dim();
  out.s_dim = inst.s_dim();
  out.b_hat_dim = inst.b_hat_dim;
  out.kappa = inst.kappa;
  out.eps = inst.eps;
  out.eta = compute_eta(inst);

  const std::size_t kappa = inst.kappa;
  const Space c_space{{"C", out.c_dim}};
  const Space cb_space = inst.psi.space().select({"C", "B"});
  const std::size_t b_dim = inst.psi.space().at("B").dim;
  const IsometryMap w = reshape_split({"C", out.c_dim}, out.s_dim);
  const IsometryMap w_dag = w.adjoint();

  const PureState phi_ab = max_entangled({"Ahat", inst.b_hat_dim}, {"Bhat", inst.b_hat_dim});
  const Ket shared = tensor(Ket(phi_ab), Ket(inst.psi));
  const Matrix pi_chi = linalg::support_projector(partial_trace(inst.chi, {"C", "B"}).matrix());
  const Operator chi_cb = partial_trace(inst.chi, {"C", "B"}).op();

  std::vector<Matrix> u_cb;
  std::vector<Ket> received;  // psi'_k on C A B R
  std::vector<Ket> sent;      // V_k^dag |Phi>|psi> on A S Bhat B R
  std::vector<Matrix> projectors;
  for (std::size_t k = 0; k < kappa; ++k) {
    Rng r = rng.split(k);
    const Matrix u = haar_unitary(out.c_dim, r);
    const Ket psi_k = apply(w, apply(u, inst.psi, {"C"}, c_space));
    const UhlmannResult uh = max_overlap_isometry(psi_k, {"A", "S"}, shared, {"Ahat", "A", "C"});
    out.max_encoder_residual = std::max(out.max_encoder_residual, uh.isometry.isometry_residual());
    out.encoders.push_back(uh.isometry.adjoint());
    sent.push_back(apply(out.encoders.back(), shared));
    received.push_back(apply(w_dag, sent.back()));
    u_cb.push_back(linalg::kron(u, identity(b_dim)));
    projectors.push_back(u_cb.back() * pi_chi * u_cb.back().adjoint());
  }
  const PGM pgm = build_pgm_from_projectors(cb_space, projectors);
  const CoherifierResult coh = coherify(inst.psi, {"C", "B"}, u_cb, received, pgm, "K");

  out.decoder = IsometryMap(w.out.concat(Space{{"B", b_dim}}), coh.isometry.out,
                            coh.isometry.matrix * linalg::kron(w_dag.matrix, identity(b_dim)));

  // Verbatim evaluation of (1/kappa) sum_k <k|<psi| W V_k |Phi>|psi>.
  const Space k_space{{"K", kappa}};
  double sum = 0;
  double d_sum = 0, pchi_sum = 0, hayashi_sum = 0;
  bool distance_steps_ok = true;
  for (std::size_t k = 0; k < kappa; ++k) {
    const Ket final_state = apply(out.decoder, sent[k]);
    const Complex o = inner(tensor(Ket(inst.psi), Ket(basis_state(k_space, k))), final_state);
    out.overlaps.push_back(o.real());
    sum += o.real();

    const Ket psi_k = apply(u_cb[k], inst.psi, {"C", "B"}, cb_space);
    const double f_k = std::norm(inner(psi_k, received[k]));
    out.decoupling_fidelity.push_back(f_k);
    out.f_ave += f_k;
    const double p_k = pgm_miss_prob(pgm, k, partial_trace(received[k], {"C", "B"}));
    out.miss_prob.push_back(p_k);
    out.p_ave += p_k;
    const double d_k = 2 * std::sqrt(std::max(0.0, 1 - f_k)) + inst.eps;
    d_sum += d_k;

    const Operator chi_k{cb_space, u_cb[k] * chi_cb.matrix * u_cb[k].adjoint()};
    const double pchi_k = pgm_miss_prob(pgm, k, chi_k);
    pchi_sum += pchi_k;
    if (std::abs(p_k - pchi_k) > d_k + tol::ent) distance_steps_ok = false;
    double h = 2 * (1 - (projectors[k] * chi_k.matrix).trace().real());
    for (std::size_t j = 0; j < kappa; ++j)
      if (j != k) h += 4 * (projectors[j] * chi_k.matrix).trace().real();
    hayashi_sum += h;
  }
  const double n = double(kappa);
  out.achieved_mean_overlap = sum / n;
  out.coherifier_mean_overlap = coh.mean_overlap;
  out.f_ave /= n;
  out.p_ave /= n;
  out.p_lemma = coh.miss_prob;
  out.d_ave = d_sum / n;

  const double root_f = std::sqrt(std::max(0.0, 1 - out.f_ave));
  auto& c = out.checks;
  c.push_back(make_check("coherifier_route_agrees",
                         std::abs(out.achieved_mean_overlap - out.coherifier_mean_overlap), tol::uhl, 0));
  c.push_back(make_check("encoder_isometry", out.max_encoder_residual, 1e-9, 0));
  c.push_back(make_check("d_ave_concavity", out.d_ave, inst.eps + 2 * root_f));
  c.push_back(make_check("p_k_distance_steps", distance_steps_ok ? 0 : 1, 0, 0));
  c.push_back(make_check("p_ave_le_d_ave_plus_chi_miss", out.p_ave, out.d_ave + pchi_sum / n));
  c.push_back(make_check("chi_miss_le_hayashi_sum", pchi_sum / n, hayashi_sum / n));
  c.push_back(make_check("lemma5_bound", 1 - 2 * (out.p_lemma + root_f), out.achieved_mean_overlap));
  c.push_back(make_check("lemma5_with_received_states", 1 - 2 * (out.p_ave + root_f),
                         out.achieved_mean_overlap));
  c.push_back(make_check("lemma5_chain", coh.chain_holds() ? 0 : 1, 0, 0));
  if (out.bound_applies())
    c.push_back(make_check("one_shot_bound", out.one_shot_bound(), out.achieved_mean_overlap));

  if (inst.ghz_check) out.ghz = ghz_check(inst, out);
  return out;
}

}  // namespace qredist
