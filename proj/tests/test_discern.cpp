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

#include "oracle.hpp"
#include "qredist/discern.hpp"

using namespace qredist;

namespace {

Matrix random_projector(std::size_t dim, std::size_t rank, Rng& rng) {
  const Matrix u = haar_unitary(dim, rng);
  const Matrix v = u.leftCols(Eigen::Index(rank));
  return v * v.adjoint();
}

Matrix oracle_pinv_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  Eigen::VectorXd v = es.eigenvalues();
  const double top = v.maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = v(i) > 1e-9 * top ? 1 / std::sqrt(v(i)) : 0;
  return es.eigenvectors() * v.asDiagonal() * es.eigenvectors().adjoint();
}

// Cyclic shift |j> -> |j + k mod n>.
Matrix shift(std::size_t n, std::size_t k) {
  Matrix m = Matrix::Zero(Eigen::Index(n), Eigen::Index(n));
  for (std::size_t j = 0; j < n; ++j) m(Eigen::Index((j + k) % n), Eigen::Index(j)) = 1;
  return m;
}

}  // namespace

TEST(BuildPgm, SingleStateMeasurementIsItsSupport) {
  Rng rng(1);
  const DensityOperator rho = random_density(Space{{"D", 4}}, 2, rng);
  const PGM pgm = build_pgm({rho});
  EXPECT_LT((pgm.povm[0] - pgm.projectors[0]).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(pgm_miss_prob(pgm, 0, rho), 0.0, 1e-10);
  EXPECT_LT(pgm.completeness_residual(), 1e-10);
}

TEST(BuildPgm, OrthogonalStatesAreDiscriminatedPerfectly) {
  const Space s{{"D", 3}};
  const PGM pgm = build_pgm({projector(basis_state(s, 0)), projector(basis_state(s, 2))});
  EXPECT_NEAR(pgm_miss_prob(pgm, 0, projector(basis_state(s, 0))), 0.0, 1e-12);
  EXPECT_NEAR(pgm_miss_prob(pgm, 1, projector(basis_state(s, 2))), 0.0, 1e-12);
  EXPECT_NEAR(pgm.failure(1, 1).real(), 1.0, 1e-12);
  EXPECT_LT(pgm.completeness_residual(), 1e-10);
}

TEST(BuildPgm, IdenticalPairSplitsEvenly) {
  Rng rng(2);
  const DensityOperator rho = random_density(Space{{"D", 4}}, 2, rng);
  const PGM pgm = build_pgm({rho, rho});
  EXPECT_LT((pgm.povm[0] - pgm.projectors[0] / 2.0).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(pgm_miss_prob(pgm, 0, rho), 0.5, 1e-10);
  EXPECT_NEAR(pgm_miss_prob(pgm, 1, rho), 0.5, 1e-10);
}

TEST(BuildPgm, RandomEnsembleMatchesDirectTraceOracle) {
  Rng rng(3);
  const Space s{{"D", 6}};
  std::vector<DensityOperator> states;
  for (int k = 0; k < 3; ++k) states.push_back(random_density(s, 2, rng));
  const PGM pgm = build_pgm(states);
  Matrix lam = Matrix::Zero(6, 6);
  std::vector<Matrix> pis;
  for (const auto& st : states) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(st.matrix());
    const Matrix v = es.eigenvectors().rightCols(2);
    pis.push_back(v * v.adjoint());
    lam += pis.back();
  }
  const Matrix sq = oracle_pinv_sqrt(lam);
  for (int k = 0; k < 3; ++k) {
    const Matrix lk = sq * pis[std::size_t(k)] * sq;
    const double want = 1 - (lk * states[std::size_t(k)].matrix()).trace().real();
    EXPECT_NEAR(pgm_miss_prob(pgm, std::size_t(k), states[std::size_t(k)]), want, 1e-10);
    const RealVector ev = linalg::hermitian_eigenvalues(pgm.povm[std::size_t(k)]);
    EXPECT_GE(ev(0), -tol::psd);
  }
  EXPECT_LT(pgm.completeness_residual(), 1e-10);
  EXPECT_THROW(pgm_miss_prob(pgm, 3, states[0]), ValidationError);
}

TEST(Hayashi, IdentityAndRankOneCases) {
  const Matrix id = Matrix::Identity(3, 3);
  EXPECT_NEAR(check_hayashi(id, id), 0.0, 1e-12);
  Matrix p = Matrix::Zero(3, 3);
  p(1, 1) = 1;
  EXPECT_GE(check_hayashi(p, p), -1e-12);
}

TEST(Hayashi, RandomHypothesisSatisfyingPairs) {
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    const std::size_t dim = 2 + rng.engine()() % 15;
    const std::size_t rank = 1 + rng.engine()() % dim;
    const Matrix pi = random_projector(dim, rank, rng);
    const Matrix g = linalg::ginibre<double>(dim, 1 + rng.engine()() % dim, rng);
    const Matrix lambda = pi + g * g.adjoint() * rng.uniform();
    EXPECT_GE(check_hayashi(pi, lambda), -1e-9);
  }
}

TEST(Hayashi, RejectsHypothesisViolations) {
  Matrix pi = Matrix::Identity(2, 2);
  Matrix lambda = Matrix::Identity(2, 2) * 0.5;
  EXPECT_THROW(check_hayashi(pi, lambda), ValidationError);
  EXPECT_THROW(check_hayashi(pi * 1.5, pi * 2.0), ValidationError);
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = -0.1;
  EXPECT_THROW(check_hayashi(neg, pi), ValidationError);
}

TEST(Coherify, OrthogonalSupportsGiveUnitOverlap) {
  // psi^D = |0><0| on a 4-dimensional D; shifts move it to orthogonal supports.
  Rng rng(5);
  const PureState e = random_pure_state(Space{{"E", 2}}, rng);
  const PureState psi = tensor(basis_state(Space{{"D", 4}}, 0), e);
  std::vector<Matrix> us;
  std::vector<Ket> targets;
  std::vector<DensityOperator> states;
  for (std::size_t k = 0; k < 4; ++k) {
    us.push_back(shift(4, k));
    const Ket t = apply(us.back(), psi, {"D"}, Space{{"D", 4}});
    targets.push_back(t);
    states.push_back(partial_trace(PureState(t), {"D"}));
  }
  const CoherifierResult r = coherify(psi, {"D"}, us, targets, build_pgm(states));
  EXPECT_NEAR(r.miss_prob, 0.0, 1e-10);
  EXPECT_NEAR(r.fidelity, 1.0, 1e-10);
  EXPECT_NEAR(r.mean_overlap, 1.0, 1e-10);
  EXPECT_TRUE(r.chain_holds());
  EXPECT_LT(r.isometry.isometry_residual(), 1e-10);
}

TEST(Coherify, SingleOutcomeIsRootedPovmUpToPhase) {
  Rng rng(6);
  const PureState psi = random_pure_state(Space{{"D", 3}, {"E", 3}}, rng);
  const Matrix u = haar_unitary(3, rng);
  const Ket target = perturb(PureState(apply(u, psi, {"D"}, Space{{"D", 3}})), 0.2, rng);
  const PGM pgm = build_pgm({partial_trace(PureState(target), {"D"})});
  const CoherifierResult r = coherify(psi, {"D"}, {u}, {target}, pgm);
  const Matrix want = u.adjoint() * linalg::psd_sqrt(pgm.povm[0]) * r.phases[0];
  EXPECT_LT((r.isometry.matrix - want).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(std::abs(r.phases[0]), 1.0, 1e-15);
  EXPECT_TRUE(r.bound_holds());
}

TEST(Coherify, RandomInstancesSatisfyTheBoundAndChain) {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const PureState psi = random_pure_state(Space{{"D", 8}, {"E", 2}}, rng);
    std::vector<Matrix> us;
    std::vector<Ket> targets;
    std::vector<DensityOperator> states;
    for (int k = 0; k < 4; ++k) {
      us.push_back(haar_unitary(8, rng));
      const PureState psi_k(apply(us.back(), psi, {"D"}, Space{{"D", 8}}));
      const PureState near = perturb(psi_k, 0.3 * rng.uniform(), rng);
      targets.push_back(Ket(near.space(), near.amplitudes() * std::sqrt(0.9 + 0.1 * rng.uniform())));
      states.push_back(partial_trace(psi_k, {"D"}));
    }
    const CoherifierResult r = coherify(psi, {"D"}, us, targets, build_pgm(states));
    EXPECT_TRUE(r.bound_holds()) << r.mean_overlap << " vs " << r.bound();
    EXPECT_TRUE(r.chain_holds());
    for (std::size_t k = 0; k < 4; ++k) {
      EXPECT_GE(r.overlaps[k], -1e-12);
      EXPECT_NEAR(std::abs(r.phases[k]), 1.0, 1e-12);
    }
    // L^dag L = sum_k Lambda_k <= I.
    const RealVector ev = linalg::hermitian_eigenvalues(Matrix(r.isometry.matrix.adjoint() * r.isometry.matrix));
    EXPECT_LE(ev(ev.size() - 1), 1 + 1e-10);
  }
}

TEST(Coherify, RejectsCountMismatch) {
  Rng rng(8);
  const PureState psi = random_pure_state(Space{{"D", 2}, {"E", 2}}, rng);
  const PGM pgm = build_pgm({partial_trace(psi, {"D"})});
  EXPECT_THROW(coherify(psi, {"D"}, {}, {psi}, pgm), ValidationError);
}

TEST(RandomAudits, HayashiAndCoherifyHaveNoViolations) {
  const HayashiSummary h = hayashi_random_audit(60, 12, Rng(3));
  EXPECT_GE(h.min_slack, -1e-9);
  EXPECT_EQ(h.trials, 60u);
  const CoherifySummary c = coherify_random_audit(30, 4, 8, Rng(4));
  EXPECT_EQ(c.bound_violations, 0u);
  EXPECT_EQ(c.chain_violations, 0u);
  EXPECT_GE(c.min_margin, -1e-9);
  const CoherifySummary again = coherify_random_audit(30, 4, 8, Rng(4));
  EXPECT_EQ(c.min_margin, again.min_margin);
}
