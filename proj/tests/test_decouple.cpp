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
#include "qredist/decouple.hpp"

using namespace qredist;

namespace {

DensityOperator random_ce(std::size_t c, std::size_t e, std::size_t rank, Rng& rng) {
  return random_density(Space{{"C", c}, {"E", e}}, rank, rng);
}

DecoupleSpec exact_spec(const DensityOperator& rho, std::size_t s_dim) {
  DecoupleSpec s{rho, rho};
  s.s_dim = s_dim;
  return s;
}

}  // namespace

TEST(ReshapeSplit, MixedRadixLabels) {
  const IsometryMap w = reshape_split({"C", 6}, 3);
  EXPECT_EQ(w.out.at("S").dim, 3u);
  EXPECT_EQ(w.out.at("Bhat").dim, 2u);
  EXPECT_LT(w.isometry_residual(), 1e-15);
  // Basis |i> lands on |i / 2>_S |i % 2>_Bhat.
  for (std::size_t i = 0; i < 6; ++i) {
    const Ket out = apply(w, basis_state(Space{{"C", 6}}, i));
    const auto d = oracle::digits(i, {3, 2});
    EXPECT_NEAR(std::abs(out.amplitudes()(Eigen::Index(oracle::flat(d, {3, 2})))), 1.0, 1e-15);
  }
  EXPECT_EQ(reshape_split({"C", 4}, 4).out.at("Bhat").dim, 1u);
  EXPECT_THROW(reshape_split({"C", 6}, 4), ValidationError);
}

TEST(DecoupleResidual, TrivialBhatIsExactlyZero) {
  Rng rng(1);
  const DensityOperator rho = random_ce(4, 2, 3, rng);
  EXPECT_NEAR(decouple_residual(rho, "C", haar_unitary(4, rng), reshape_split({"C", 4}, 4)), 0.0,
              1e-12);
}

TEST(DecoupleResidual, MaximallyMixedCIsAlreadyDecoupled) {
  Rng rng(2);
  const DensityOperator rho = tensor(maximally_mixed(Space{{"C", 4}}), random_density(Space{{"E", 3}}, 2, rng));
  for (int t = 0; t < 3; ++t)
    EXPECT_NEAR(decouple_residual(rho, "C", haar_unitary(4, rng), reshape_split({"C", 4}, 2)), 0.0,
                1e-12);
}

TEST(DecoupleResidual, MatchesExplicitMatrixOracle) {
  Rng rng(3);
  for (int t = 0; t < 5; ++t) {
    const DensityOperator rho = random_ce(6, 2, 4, rng);
    const Matrix u = haar_unitary(6, rng);
    const Matrix big = linalg::kron(u, Matrix::Identity(2, 2));
    const Matrix out = big * rho.matrix() * big.adjoint();
    const Matrix got_marg = oracle::reduce(out, {3, 2, 2}, {1, 2});
    const Matrix rho_e = oracle::reduce(rho.matrix(), {6, 2}, {1});
    const Matrix want_target = linalg::kron(Matrix::Identity(2, 2) / 2.0, rho_e);
    const double want = oracle::trace_norm(got_marg - want_target);
    EXPECT_NEAR(decouple_residual(rho, "C", u, reshape_split({"C", 6}, 3)), want, 1e-12);
  }
}

TEST(DecoupleResidual, WorksWithoutEnvironment) {
  Rng rng(4);
  const DensityOperator rho = random_density(Space{{"C", 4}}, 4, rng);
  EXPECT_GE(decouple_residual(rho, "C", haar_unitary(4, rng), reshape_split({"C", 4}, 2)), 0.0);
}

TEST(VerifyDecoupling, PureProductExampleBound) {
  Rng rng(5);
  const DensityOperator rho = projector(random_pure_state(Space{{"C", 16}}, rng));
  const DecoupleReport r = verify_decoupling(exact_spec(rho, 8), 200, Rng(5), DecoupleMode::robust);
  EXPECT_NEAR(r.bound, 0.5, 1e-12);
  EXPECT_LT(r.lhs_estimate + 3 * r.lhs_stderr, r.bound);
  EXPECT_LT(r.mean_residual + 3 * r.mean_residual_stderr, r.bound);
  EXPECT_TRUE(r.convexity_holds);
}

TEST(VerifyDecoupling, AppendixBoundHoldsOnRandomStates) {
  Rng rng(6);
  for (std::size_t s : {2u, 4u, 8u}) {
    const DensityOperator rho = random_ce(8, 2, 2, rng);
    const DecoupleReport r = verify_decoupling(exact_spec(rho, s), 300, rng.split(s), DecoupleMode::appendix);
    EXPECT_FALSE(r.violated()) << "s=" << s << " est=" << r.lhs_estimate << " bound=" << r.bound;
    EXPECT_EQ(r.rank_e, 2u);
  }
}

TEST(VerifyDecoupling, RobustReducesToRootedAppendixBoundAtZeroEps) {
  Rng rng(7);
  const DensityOperator rho = random_ce(8, 2, 3, rng);
  const DecoupleReport a = verify_decoupling(exact_spec(rho, 4), 20, Rng(1), DecoupleMode::appendix);
  const DecoupleReport b = verify_decoupling(exact_spec(rho, 4), 20, Rng(1), DecoupleMode::robust);
  EXPECT_NEAR(b.bound, std::sqrt(a.bound), 1e-15);
}

TEST(VerifyDecoupling, PerturbationAddsTwiceEps) {
  Rng rng(8);
  const PureState psi = random_pure_state(Space{{"C", 8}, {"E", 2}}, rng);
  const PureState phi = perturb(psi, 0.05, rng);
  DecoupleSpec spec{projector(psi), projector(phi)};
  spec.s_dim = 4;
  spec.eps = 0.05;
  const DecoupleReport r = verify_decoupling(spec, 10, Rng(2), DecoupleMode::robust);
  EXPECT_NEAR(r.bound - std::sqrt(r.appendix_bound), 0.1, 1e-12);
  spec.eps = 0.01;
  EXPECT_THROW(spec.validate(), ValidationError);
}

TEST(VerifyDecoupling, DeterministicAndOrderIndependent) {
  Rng rng(9);
  const DensityOperator rho = random_ce(4, 2, 2, rng);
  const auto a = verify_decoupling(exact_spec(rho, 2), 30, Rng(77), DecoupleMode::appendix);
  const auto b = verify_decoupling(exact_spec(rho, 2), 30, Rng(77), DecoupleMode::appendix);
  EXPECT_EQ(a.lhs_estimate, b.lhs_estimate);
  EXPECT_EQ(a.lhs_stderr, b.lhs_stderr);
}

TEST(VerifyDecoupling, LargerSNeverRaisesTheBound) {
  Rng rng(10);
  const DensityOperator rho = random_ce(16, 2, 2, rng);
  double prev = 1e300, prev_est = 1e300, prev_err = 0;
  for (std::size_t s : {1u, 2u, 4u, 8u, 16u}) {
    const auto r = verify_decoupling(exact_spec(rho, s), 100, rng.split(s), DecoupleMode::appendix);
    EXPECT_LE(r.bound, prev);
    EXPECT_LE(r.lhs_estimate, prev_est + 3 * (r.lhs_stderr + prev_err) + 1e-12);
    prev = r.bound;
    prev_est = r.lhs_estimate;
    prev_err = r.lhs_stderr;
  }
}

TEST(VerifyDecoupling, ExplicitSplitMustBeUnitary) {
  Rng rng(11);
  DecoupleSpec spec = exact_spec(random_ce(4, 2, 2, rng), 2);
  spec.w = Matrix::Identity(4, 4) * 2.0;
  EXPECT_THROW(spec.validate(), ValidationError);
  spec.w = haar_unitary(4, rng);
  EXPECT_NO_THROW(spec.validate());
  EXPECT_THROW(verify_decoupling(spec, 0, rng, DecoupleMode::robust), ValidationError);
}
