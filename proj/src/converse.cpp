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

#include "qredist/converse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qredist::converse {

namespace {

using Index = Eigen::Index;

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

// Columns {k |L| + l : k} of an operator on X (x) L.
Matrix block(const Matrix& op, std::size_t l, std::size_t x_dim, std::size_t l_dim) {
  Matrix out(op.rows(), Index(x_dim));
  for (std::size_t k = 0; k < x_dim; ++k) out.col(Index(k)) = op.col(Index(k * l_dim + l));
  return out;
}

// max_{l,l'} || sum_i B_il^dag B_il' - delta_{ll'} I ||_max
double block_residual(const KrausList& ops, std::size_t x_dim, std::size_t l_dim) {
  double worst = 0;
  for (std::size_t l = 0; l < l_dim; ++l)
    for (std::size_t m = 0; m < l_dim; ++m) {
      Matrix s = Matrix::Zero(Index(x_dim), Index(x_dim));
      for (const auto& op : ops) s += block(op, l, x_dim, l_dim).adjoint() * block(op, m, x_dim, l_dim);
      if (l == m) s -= Matrix::Identity(Index(x_dim), Index(x_dim));
      worst = std::max(worst, s.cwiseAbs().maxCoeff());
    }
  return worst;
}

// Rotates the L factor of every operator on X (x) L by `u`.
KrausList rotate_l(const KrausList& ops, std::size_t x_dim, const Matrix& u) {
  const Matrix full = linalg::kron(Matrix::Identity(Index(x_dim), Index(x_dim)), u);
  KrausList out;
  out.reserve(ops.size());
  for (const auto& op : ops) out.push_back(op * full);
  return out;
}

}  // namespace

void AssistedSimulation::validate() const {
  require(k_dim >= 1 && q_dim >= 1 && l_dim >= 1, "dimensions must be positive");
  require(!encoder.empty() && !decoder.empty(), "encoder and decoder need Kraus operators");
  for (const auto& e : encoder)
    require(std::size_t(e.rows()) == q_dim && std::size_t(e.cols()) == k_dim * l_dim,
            "encoder Kraus operators must be |Q| x |K||L|");
  for (const auto& d : decoder)
    require(std::size_t(d.rows()) == k_dim && std::size_t(d.cols()) == q_dim * l_dim,
            "decoder Kraus operators must be |K| x |Q||L|");
  require(trace_preservation_residual(encoder) <= tol::iso, "encoder is not trace preserving");
  require(trace_preservation_residual(decoder) <= tol::iso, "decoder is not trace preserving");
  require(std::size_t(lambda.size()) == l_dim, "need one Schmidt weight per assistance level");
  require(lambda.minCoeff() >= -tol::norm, "Schmidt weights must be nonnegative");
  require(std::abs(lambda.sum() - 1) <= tol::norm, "Schmidt weights must sum to 1");
}

AssistedSimulation AssistedSimulation::from_pure_assistance(std::size_t k_dim, std::size_t q_dim,
                                                            KrausList encoder, KrausList decoder,
                                                            const Ket& psi) {
  require(psi.space().size() == 2, "assistance state must live on two systems L, L'");
  const auto& sys = psi.space().systems();
  require(sys[0].dim == sys[1].dim, "assistance systems must have equal dimension");
  require(std::abs(psi.norm() - 1) <= tol::norm, "assistance state must be normalized");
  const Matrix m = psi.matricize({sys[0].name});
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  AssistedSimulation sim;
  sim.k_dim = k_dim;
  sim.q_dim = q_dim;
  sim.l_dim = sys[0].dim;
  sim.lambda = svd.singularValues().cwiseAbs2();
  sim.encoder = rotate_l(encoder, k_dim, svd.matrixU());
  sim.decoder = rotate_l(decoder, q_dim, svd.matrixV().conjugate());
  sim.validate();
  return sim;
}

KrausList compose_assisted(const AssistedSimulation& sim) {
  sim.validate();
  KrausList n;
  n.reserve(sim.encoder.size() * sim.decoder.size());
  for (const auto& e : sim.encoder)
    for (const auto& d : sim.decoder) {
      Matrix nij = Matrix::Zero(Index(sim.k_dim), Index(sim.k_dim));
      for (std::size_t l = 0; l < sim.l_dim; ++l)
        nij += std::sqrt(std::max(sim.lambda(Index(l)), 0.0)) * block(d, l, sim.q_dim, sim.l_dim) *
               block(e, l, sim.k_dim, sim.l_dim);
      n.push_back(std::move(nij));
    }
  return n;
}

double entanglement_fidelity(const KrausList& n, std::size_t k_dim) {
  double s = 0;
  for (const auto& op : n) {
    require(op.rows() == op.cols() && std::size_t(op.rows()) == k_dim, "Kraus operators must be |K| x |K|");
    s += std::norm(op.trace());
  }
  return s / double(k_dim * k_dim);
}

double entanglement_fidelity_choi(const KrausList& n, std::size_t k_dim) {
  const Index k = Index(k_dim);
  Vector phi = Vector::Zero(k * k);
  for (Index i = 0; i < k; ++i) phi(i * k + i) = 1 / std::sqrt(double(k_dim));
  Matrix choi = Matrix::Zero(k * k, k * k);
  for (const auto& op : n) {
    require(op.rows() == op.cols() && op.rows() == k, "Kraus operators must be |K| x |K|");
    const Vector v = linalg::kron(Matrix::Identity(k, k), op) * phi;
    choi += v * v.adjoint();
  }
  return (phi.adjoint() * choi * phi)(0).real();
}

double trace_preservation_residual(const KrausList& n) {
  if (n.empty()) return 1;
  Matrix s = Matrix::Zero(n.front().cols(), n.front().cols());
  for (const auto& op : n) s += op.adjoint() * op;
  return (s - Matrix::Identity(s.rows(), s.cols())).cwiseAbs().maxCoeff();
}

bool FidelityAudit::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
}

FidelityAudit audit(const AssistedSimulation& sim) {
  const KrausList n = compose_assisted(sim);
  FidelityAudit a;
  const double qk = double(sim.q_dim * sim.k_dim);
  a.entanglement_fidelity = entanglement_fidelity(n, sim.k_dim);
  a.fidelity_choi = entanglement_fidelity_choi(n, sim.k_dim);
  a.bound = double(sim.q_dim) / double(sim.k_dim);
  for (const auto& op : n) a.trace_sum += std::norm(op.trace());
  a.cs_bound = qk;
  for (std::size_t l = 0; l < sim.l_dim; ++l) {
    const double lam = std::max(sim.lambda(Index(l)), 0.0);
    for (const auto& e : sim.encoder) {
      const Matrix el = block(e, l, sim.k_dim, sim.l_dim);
      for (const auto& d : sim.decoder) {
        const Matrix de = block(d, l, sim.q_dim, sim.l_dim) * el;
        a.block_sum += lam * std::norm(de.trace());
        a.block_cs_rhs += lam * double(sim.q_dim) * de.squaredNorm();
      }
    }
  }
  a.encoder_block_residual = block_residual(sim.encoder, sim.k_dim, sim.l_dim);
  a.decoder_block_residual = block_residual(sim.decoder, sim.q_dim, sim.l_dim);
  a.composite_tp_residual = trace_preservation_residual(n);

  a.checks.push_back(make_check("fidelity_paths_agree", std::abs(a.entanglement_fidelity - a.fidelity_choi), 0,
                                tol::norm));
  a.checks.push_back(make_check("entanglement_fidelity_le_q_over_k", a.entanglement_fidelity, a.bound));
  a.checks.push_back(make_check("trace_sum_le_qk", a.trace_sum, a.cs_bound));
  a.checks.push_back(make_check("block_cauchy_schwarz", a.block_sum, a.block_cs_rhs));
  a.checks.push_back(make_check("block_rhs_equals_qk", std::abs(a.block_cs_rhs - qk), 0));
  a.checks.push_back(make_check("encoder_block_identities", a.encoder_block_residual, 0, tol::iso));
  a.checks.push_back(make_check("decoder_block_identities", a.decoder_block_residual, 0, tol::iso));
  a.checks.push_back(make_check("composite_trace_preserving", a.composite_tp_residual, 0, tol::iso));
  return a;
}

KrausList random_channel(std::size_t dim_in, std::size_t dim_out, std::size_t env, Rng& rng) {
  require(dim_out * env >= dim_in, "Stinespring dilation too small for an isometry");
  const Matrix v = haar_unitary(dim_out * env, rng).leftCols(Index(dim_in));
  KrausList out(env, Matrix(Index(dim_out), Index(dim_in)));
  for (std::size_t q = 0; q < dim_out; ++q)
    for (std::size_t i = 0; i < env; ++i) out[i].row(Index(q)) = v.row(Index(q * env + i));
  return out;
}

AssistedSimulation random_assisted(std::size_t k_dim, std::size_t q_dim, const RandomSimulationOptions& opt,
                                   Rng& rng) {
  AssistedSimulation sim;
  sim.k_dim = k_dim;
  sim.q_dim = q_dim;
  sim.l_dim = opt.l_dim;
  const std::size_t kl = k_dim * opt.l_dim, ql = q_dim * opt.l_dim;
  sim.encoder = random_channel(kl, q_dim, (kl + q_dim - 1) / q_dim + opt.extra_env, rng);
  sim.decoder = random_channel(ql, k_dim, (ql + k_dim - 1) / k_dim + opt.extra_env, rng);
  sim.lambda = RealVector::Constant(Index(opt.l_dim), 1.0 / double(opt.l_dim));
  if (!opt.maximally_entangled) {
    // Uniform on the simplex: normalized exponentials.
    for (Index l = 0; l < sim.lambda.size(); ++l) sim.lambda(l) = -std::log(1 - rng.uniform());
    sim.lambda /= sim.lambda.sum();
  }
  sim.validate();
  return sim;
}

ConverseSummary random_audit(std::size_t k_dim, std::size_t q_dim, std::size_t trials, const Rng& rng,
                             std::size_t l_dim) {
  ConverseSummary s;
  s.k_dim = k_dim;
  s.q_dim = q_dim;
  s.trials = trials;
  s.seed = rng.seed();
  s.bound = double(q_dim) / double(k_dim);
  s.max_excess = -s.bound;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng r = rng.split(t);
    RandomSimulationOptions opt;
    opt.l_dim = l_dim;
    opt.extra_env = t % 3;
    opt.maximally_entangled = t % 2 == 0;
    const FidelityAudit a = audit(random_assisted(k_dim, q_dim, opt, r));
    s.max_fidelity = std::max(s.max_fidelity, a.entanglement_fidelity);
    s.max_excess = std::max(s.max_excess, a.entanglement_fidelity - a.bound);
    s.max_path_gap = std::max(s.max_path_gap, std::abs(a.entanglement_fidelity - a.fidelity_choi));
    s.max_trace_sum_ratio = std::max(s.max_trace_sum_ratio, a.trace_sum / a.cs_bound);
    s.max_block_residual =
        std::max({s.max_block_residual, a.encoder_block_residual, a.decoder_block_residual});
    if (!a.ok()) ++s.violations;
  }
  return s;
}

SsaReport ssa_operational_audit(const PureState& psi_in, const Partition& p, std::size_t n, double delta) {
  require(n >= 1, "n must be at least 1");
  require(delta >= 0, "delta must be nonnegative");
  const PureState psi = canonicalize(psi_in, p);
  const Labels a{"A"}, c{"C"}, b{"B"}, r{"R"};
  SsaReport s;
  s.n = n;
  s.delta = delta;
  s.i_cr_given_b = cond_mutual_info(psi, c, r, b);
  s.i_cr_given_a = cond_mutual_info(psi, c, r, a);
  s.duality_gap = std::abs(s.i_cr_given_a - s.i_cr_given_b);
  const double i_c_rb = mutual_info(psi, c, Labels{"R", "B"});
  const double i_c_b = mutual_info(psi, c, b);
  s.forwardable_gap = 0.5 * (i_c_rb - i_c_b);
  // The slack keeps exact integers such as 8 * 1.0 from flooring to 7.
  s.log2_q = std::floor(0.5 * double(n) * i_c_rb + double(n) * delta + 1e-9);
  s.log2_k = std::floor(0.5 * double(n) * i_c_b + 1e-9);
  s.fidelity_bound = std::min(1.0, std::exp2(s.log2_q - s.log2_k));
  s.exponent = 0.5 * s.i_cr_given_b + delta;
  s.saturated = std::abs(s.i_cr_given_b) <= tol::ent;
  s.checks.push_back(make_check("ssa_nonnegative", -s.i_cr_given_b, 0));
  s.checks.push_back(make_check("pure_state_duality", s.duality_gap, 0));
  s.checks.push_back(make_check("forwardable_gap_is_half_cmi", std::abs(s.forwardable_gap - 0.5 * s.i_cr_given_b), 0));
  return s;
}

SsaSummary ssa_random_audit(const std::vector<std::size_t>& dims, std::size_t trials, const Rng& rng) {
  require(dims.size() == 4, "need dimensions for A, C, B, R");
  const Space space{{"A", dims[0]}, {"C", dims[1]}, {"B", dims[2]}, {"R", dims[3]}};
  const Partition p{{"A"}, {"C"}, {"B"}, {"R"}};
  SsaSummary s;
  s.trials = trials;
  s.seed = rng.seed();
  s.min_cmi = trials ? std::numeric_limits<double>::infinity() : 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng r = rng.split(t);
    const SsaReport rep = ssa_operational_audit(random_pure_state(space, r), p);
    s.min_cmi = std::min(s.min_cmi, rep.i_cr_given_b);
    s.max_duality_gap = std::max(s.max_duality_gap, rep.duality_gap);
    if (!std::all_of(rep.checks.begin(), rep.checks.end(), [](const Check& c) { return c.ok; })) ++s.violations;
  }
  return s;
}

}  // namespace qredist::converse
