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

#include <gtest/gtest.h>

#include <cmath>

#include "qredist/converse.hpp"
#include "qredist/linalg.hpp"

using namespace qredist;
using namespace qredist::converse;

namespace {

using Index = Eigen::Index;

Matrix ket_bra(std::size_t dim, std::size_t a, std::size_t b) {
  Matrix m = Matrix::Zero(Index(dim), Index(dim));
  m(Index(a), Index(b)) = 1;
  return m;
}

// The simulated channel applied literally: E (x) id_{L'} on rho (x) Psi, then D.
Matrix run_literally(const KrausList& enc, const KrausList& dec, const Vector& psi_ll, std::size_t l_dim,
                     const Matrix& rho) {
  const Matrix in = linalg::kron(rho, Matrix(psi_ll * psi_ll.adjoint()));
  const Matrix id_l = Matrix::Identity(Index(l_dim), Index(l_dim));
  Matrix out = Matrix::Zero(dec.front().rows(), dec.front().rows());
  for (const auto& e : enc) {
    const Matrix el = linalg::kron(e, id_l);
    for (const auto& d : dec) {
      const Matrix k = d * el;
      out += k * in * k.adjoint();
    }
  }
  return out;
}

Matrix apply_kraus(const KrausList& n, const Matrix& rho) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& op : n) out += op * rho * op.adjoint();
  return out;
}

}  // namespace

TEST(EntanglementFidelity, IdentityChannelIsOne) {
  for (std::size_t k : {1u, 2u, 5u}) {
    const KrausList id{Matrix::Identity(Index(k), Index(k))};
    EXPECT_NEAR(entanglement_fidelity(id, k), 1.0, 1e-12);
    EXPECT_NEAR(entanglement_fidelity_choi(id, k), 1.0, 1e-12);
  }
}

TEST(EntanglementFidelity, CompletelyDepolarizingIsOneOverKSquared) {
  for (std::size_t k : {2u, 3u, 4u}) {
    KrausList n;
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) n.push_back(ket_bra(k, a, b) / std::sqrt(double(k)));
    EXPECT_LT(trace_preservation_residual(n), 1e-12);
    EXPECT_NEAR(entanglement_fidelity(n, k), 1.0 / double(k * k), 1e-12);
    EXPECT_NEAR(entanglement_fidelity_choi(n, k), 1.0 / double(k * k), 1e-12);
  }
}

TEST(EntanglementFidelity, PathsAgreeOnRandomChannels) {
  Rng rng(4);
  for (std::size_t k = 1; k <= 8; ++k)
    for (std::size_t env : {1u, 3u}) {
      const KrausList n = random_channel(k, k, env, rng);
      EXPECT_NEAR(entanglement_fidelity(n, k), entanglement_fidelity_choi(n, k), 1e-10) << k;
      const double f = entanglement_fidelity(n, k);
      EXPECT_GE(f, -1e-12);
      EXPECT_LE(f, 1 + 1e-12);
    }
}

TEST(EntanglementFidelity, RejectsNonSquareBlocks) {
  EXPECT_THROW(entanglement_fidelity({Matrix::Zero(2, 3)}, 2), ValidationError);
  EXPECT_THROW(entanglement_fidelity_choi({Matrix::Zero(3, 3)}, 2), ValidationError);
}

TEST(RandomChannel, IsTracePreserving) {
  Rng rng(2);
  const KrausList n = random_channel(6, 2, 3, rng);
  ASSERT_EQ(n.size(), 3u);
  EXPECT_EQ(n.front().rows(), 2);
  EXPECT_EQ(n.front().cols(), 6);
  EXPECT_LT(trace_preservation_residual(n), 1e-10);
  EXPECT_THROW(random_channel(7, 2, 3, rng), ValidationError);
}

TEST(ComposeAssisted, IdentityCodingWithProductAssistanceIsIdentity) {
  const std::size_t k = 3, l = 2;
  AssistedSimulation sim;
  sim.k_dim = sim.q_dim = k;
  sim.l_dim = l;
  // Trace out L (resp. L') and pass the rest through.
  for (std::size_t m = 0; m < l; ++m) {
    Matrix bra = Matrix::Zero(1, Index(l));
    bra(0, Index(m)) = 1;
    sim.encoder.push_back(linalg::kron(Matrix(Matrix::Identity(Index(k), Index(k))), bra));
    sim.decoder.push_back(linalg::kron(Matrix(Matrix::Identity(Index(k), Index(k))), bra));
  }
  sim.lambda = RealVector::Zero(Index(l));
  sim.lambda(0) = 1;
  const KrausList n = compose_assisted(sim);
  Rng rng(1);
  const Matrix rho = random_density(Space{{"K", k}}, 3, rng).matrix();
  EXPECT_LT((apply_kraus(n, rho) - rho).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(entanglement_fidelity(n, k), 1.0, 1e-12);
  EXPECT_TRUE(audit(sim).ok());
}

TEST(ComposeAssisted, TrivialChannelGivesOneOverKSquared) {
  const std::size_t k = 4, l = 2;
  AssistedSimulation sim;
  sim.k_dim = k;
  sim.q_dim = 1;
  sim.l_dim = l;
  for (std::size_t i = 0; i < k * l; ++i) {
    Matrix bra = Matrix::Zero(1, Index(k * l));
    bra(0, Index(i)) = 1;
    sim.encoder.push_back(bra);
  }
  for (std::size_t j = 0; j < l; ++j) {
    Matrix d = Matrix::Zero(Index(k), Index(l));
    d(0, Index(j)) = 1;  // always output |0>
    sim.decoder.push_back(d);
  }
  sim.lambda = RealVector::Constant(Index(l), 0.5);
  const FidelityAudit a = audit(sim);
  EXPECT_NEAR(a.entanglement_fidelity, 1.0 / 16, 1e-12);
  EXPECT_LE(a.entanglement_fidelity, a.bound);
  EXPECT_TRUE(a.ok());
}

TEST(ComposeAssisted, MatchesTheLiteralCircuit) {
  Rng rng(6);
  for (int t = 0; t < 6; ++t) {
    RandomSimulationOptions opt;
    opt.l_dim = 2 + std::size_t(t % 2);
    opt.maximally_entangled = t % 3 == 0;
    const AssistedSimulation sim = random_assisted(3, 2, opt, rng);
    Vector psi = Vector::Zero(Index(opt.l_dim * opt.l_dim));
    for (std::size_t l = 0; l < opt.l_dim; ++l) psi(Index(l * opt.l_dim + l)) = std::sqrt(sim.lambda(Index(l)));
    const Matrix rho = random_density(Space{{"K", 3}}, 2, rng).matrix();
    const Matrix want = run_literally(sim.encoder, sim.decoder, psi, opt.l_dim, rho);
    EXPECT_LT((apply_kraus(compose_assisted(sim), rho) - want).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ComposeAssisted, SchmidtRotationOfArbitraryAssistance) {
  Rng rng(8);
  const std::size_t k = 2, q = 2, l = 3;
  const KrausList enc = random_channel(k * l, q, 3, rng);
  const KrausList dec = random_channel(q * l, k, 3, rng);
  const PureState psi = random_pure_state(Space{{"L", l}, {"Lp", l}}, rng);
  const AssistedSimulation sim = AssistedSimulation::from_pure_assistance(k, q, enc, dec, psi);
  EXPECT_NEAR(sim.lambda.sum(), 1.0, 1e-12);
  const Matrix rho = random_density(Space{{"K", k}}, 2, rng).matrix();
  const Matrix want = run_literally(enc, dec, psi.amplitudes(), l, rho);
  EXPECT_LT((apply_kraus(compose_assisted(sim), rho) - want).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE(audit(sim).ok());
}

TEST(ComposeAssisted, RejectsBadShapes) {
  Rng rng(3);
  AssistedSimulation sim = random_assisted(2, 2, {}, rng);
  sim.l_dim = 3;
  EXPECT_THROW(compose_assisted(sim), ValidationError);
  sim = random_assisted(2, 2, {}, rng);
  sim.lambda(0) += 0.1;
  EXPECT_THROW(compose_assisted(sim), ValidationError);
  sim = random_assisted(2, 2, {}, rng);
  sim.encoder.front() *= 2;
  EXPECT_THROW(compose_assisted(sim), ValidationError);
}

TEST(Audit, RandomizedLemmaCheck) {
  for (auto [k, q] : {std::pair<std::size_t, std::size_t>{4, 2}, {2, 1}, {4, 1}, {3, 2}}) {
    const ConverseSummary s = random_audit(k, q, 120, Rng(10 + k * q));
    EXPECT_EQ(s.violations, 0u) << k << "," << q;
    EXPECT_LE(s.max_excess, 1e-9);
    EXPECT_LT(s.max_path_gap, 1e-10);
    EXPECT_LE(s.max_trace_sum_ratio, 1 + 1e-9);
    EXPECT_LT(s.max_block_residual, 1e-10);
  }
}

TEST(Audit, BlockFormIsNotTheTraceSum) {
  // sum_ij |Tr N_ij|^2 and sum_l lambda_l sum_ij |Tr D_jl E_il|^2 differ by
  // cross terms in general; both stay below |Q||K|.
  Rng rng(1);
  bool differs = false;
  for (int t = 0; t < 10; ++t) {
    const FidelityAudit a = audit(random_assisted(4, 2, {}, rng));
    differs = differs || std::abs(a.trace_sum - a.block_sum) > 1e-6;
    EXPECT_LE(a.block_sum, a.block_cs_rhs + 1e-9);
    EXPECT_NEAR(a.block_cs_rhs, 8.0, 1e-9);
  }
  EXPECT_TRUE(differs);
}

TEST(Audit, DeterministicGivenSeed) {
  const ConverseSummary a = random_audit(4, 2, 20, Rng(5));
  const ConverseSummary b = random_audit(4, 2, 20, Rng(5));
  EXPECT_EQ(a.max_fidelity, b.max_fidelity);
  EXPECT_EQ(a.max_path_gap, b.max_path_gap);
}

TEST(Ssa, ProductStateHasZeroGap) {
  const Space s{{"A", 2}, {"C", 2}, {"B", 2}, {"R", 2}};
  const Partition p{{"A"}, {"C"}, {"B"}, {"R"}};
  const SsaReport r = ssa_operational_audit(basis_state(s, 0), p, 100, 0.05);
  EXPECT_NEAR(r.i_cr_given_b, 0, 1e-12);
  EXPECT_NEAR(r.forwardable_gap, 0, 1e-12);
  EXPECT_EQ(r.log2_q, 5);
  EXPECT_EQ(r.log2_k, 0);
  EXPECT_EQ(r.fidelity_bound, 1);
  EXPECT_TRUE(r.saturated);
}

TEST(Ssa, GhzSaturates) {
  Vector v = Vector::Zero(16);
  v(0) = v(15) = 1 / std::sqrt(2.0);
  const PureState ghz(Space{{"A", 2}, {"C", 2}, {"B", 2}, {"R", 2}}, v);
  const SsaReport r = ssa_operational_audit(ghz, Partition{{"A"}, {"C"}, {"B"}, {"R"}}, 8, 0.1);
  EXPECT_NEAR(r.i_cr_given_b, 0, 1e-10);
  EXPECT_TRUE(r.saturated);
  // I(C;RB) = I(C;B) = 1: |Q| = 2^{floor(4 + 0.8)}, |K| = 2^4.
  EXPECT_EQ(r.log2_q, 4);
  EXPECT_EQ(r.log2_k, 4);
  for (const auto& c : r.checks) EXPECT_TRUE(c.ok) << c.name;
}

TEST(Ssa, BellToReferenceIsNotSaturated) {
  Vector v = Vector::Zero(4);
  v(0) = v(3) = 1 / std::sqrt(2.0);
  const PureState bell(Space{{"C", 2}, {"R", 2}}, v);
  const SsaReport r = ssa_operational_audit(bell, Partition{{}, {"C"}, {}, {"R"}});
  EXPECT_NEAR(r.i_cr_given_b, 2, 1e-10);
  EXPECT_NEAR(r.forwardable_gap, 1, 1e-10);
  EXPECT_FALSE(r.saturated);
  EXPECT_GT(r.exponent, 0);
}

TEST(Ssa, RandomAuditHasNoViolations) {
  const SsaSummary s = ssa_random_audit({2, 2, 2, 2}, 200, Rng(1));
  EXPECT_EQ(s.violations, 0u);
  EXPECT_GE(s.min_cmi, -1e-9);
  EXPECT_LE(s.max_duality_gap, 1e-9);
  const SsaSummary mixed = ssa_random_audit({1, 3, 2, 4}, 50, Rng(2));
  EXPECT_EQ(mixed.violations, 0u);
  EXPECT_THROW(ssa_random_audit({2, 2, 2}, 1, Rng(1)), ValidationError);
}
