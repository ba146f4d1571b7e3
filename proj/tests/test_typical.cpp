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
#include "qredist/typical.hpp"

using namespace qredist;

namespace {

DensityOperator diag2(double p0) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = p0;
  m(1, 1) = 1 - p0;
  return DensityOperator(Space{{"A", 2}}, m);
}

struct Binomial {
  double trace = 0;
  double captured = 0;
};

// Strings with k symbols of probability q = 1 - p0 have log-probability
// (n - k) log p0 + k log q; all C(n, k) of them share it.
Binomial binomial_oracle(double p0, std::size_t n, double delta) {
  const double q = 1 - p0;
  const double h = -p0 * std::log2(p0) - q * std::log2(q);
  Binomial b;
  double choose = 1;
  for (std::size_t k = 0; k <= n; ++k) {
    if (k > 0) choose = choose * double(n - k + 1) / double(k);
    const double lp = double(n - k) * std::log2(p0) + double(k) * std::log2(q);
    if (std::abs(-lp / double(n) - h) <= delta) {
      b.trace += choose;
      b.captured += choose * std::pow(p0, double(n - k)) * std::pow(q, double(k));
    }
  }
  return b;
}

std::vector<Labels> copies(const std::string& base, std::size_t n) {
  std::vector<Labels> c;
  for (std::size_t i = 1; i <= n; ++i) c.push_back({base + std::to_string(i)});
  return c;
}

}  // namespace

TEST(TypicalProjector, MaximallyMixedKeepsEverything) {
  for (std::size_t n : {1u, 3u, 5u}) {
    const TypicalProjector pi(maximally_mixed(Space{{"A", 2}}), n, 0.0);
    EXPECT_EQ(pi.trace(), std::size_t{1} << n);
    EXPECT_NEAR(pi.captured(), 1.0, 1e-12);
    const auto d = Eigen::Index(std::size_t{1} << n);
    EXPECT_LT((pi.matrix() - Matrix::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(TypicalProjector, PureStateIsRankOne) {
  const TypicalProjector pi(diag2(1.0), 4, 0.0);
  EXPECT_EQ(pi.trace(), 1u);
  EXPECT_NEAR(pi.captured(), 1.0, 1e-15);
  EXPECT_NEAR(pi.entropy(), 0.0, 0.0);
}

TEST(TypicalProjector, BinomialOracle) {
  for (std::size_t n : {4u, 8u, 10u, 12u})
    for (double delta : {0.1, 0.15, 0.2, 0.5}) {
      const TypicalProjector pi(diag2(0.9), n, delta);
      const Binomial b = binomial_oracle(0.9, n, delta);
      EXPECT_EQ(double(pi.trace()), b.trace) << n << " " << delta;
      EXPECT_NEAR(pi.captured(), b.captured, 1e-12) << n << " " << delta;
    }
}

TEST(TypicalProjector, MatrixIsAnIdempotentProjector) {
  Rng rng(1);
  const DensityOperator rho = random_density(Space{{"A", 3}}, 3, rng);
  const TypicalProjector pi(rho, 3, 0.3);
  const Matrix p = pi.matrix();
  EXPECT_LT((p * p - p).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(p.trace().real(), double(pi.trace()), 1e-10);
  // Commutes with rho^{(x) 3}.
  const Matrix r3 = linalg::kron(linalg::kron(rho.matrix(), rho.matrix()), rho.matrix());
  EXPECT_LT((p * r3 - r3 * p).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR((p * r3).trace().real(), pi.captured(), 1e-10);
}

TEST(TypicalProjector, ProjectMatchesFullMatrix) {
  Rng rng(2);
  const DensityOperator rho = random_density(Space{{"A", 2}}, 2, rng);
  const TypicalProjector pi(rho, 3, 0.2);
  const PureState psi = random_pure_state(Space{{"A1", 2}, {"X", 3}, {"A2", 2}, {"A3", 2}}, rng);
  const Ket got = pi.project(psi, copies("A", 3));
  EXPECT_EQ(got.space(), psi.space());
  // Oracle: reorder to A1 A2 A3 X, apply P (x) I, reorder back.
  const Ket perm = psi.permuted({"A1", "A2", "A3", "X"});
  const Vector want = linalg::kron(pi.matrix(), Matrix::Identity(3, 3)) * perm.amplitudes();
  EXPECT_LT((got.permuted({"A1", "A2", "A3", "X"}).amplitudes() - want).norm(), 1e-12);
  const Ket res = pi.restrict(psi, copies("A", 3), "T");
  EXPECT_EQ(res.space().at("T").dim, pi.trace());
  EXPECT_NEAR(res.norm(), got.norm(), 1e-12);
}

TEST(TypicalProjector, GroupedCopies) {
  Rng rng(3);
  const PureState one = random_pure_state(Space{{"B", 2}, {"R", 2}}, rng);
  const TypicalProjector pi(projector(one), 2, 10.0);
  const PureState psi = random_pure_state(Space{{"B1", 2}, {"R1", 2}, {"B2", 2}, {"R2", 2}}, rng);
  const Ket got = pi.project(psi, {{"B1", "R1"}, {"B2", "R2"}});
  // Pure single-copy state: the projector is |one><one|^{(x) 2}.
  const Vector o = one.amplitudes();
  const Complex amp = (linalg::kron(o, o).adjoint() * psi.amplitudes())(0);
  EXPECT_NEAR(got.norm(), std::abs(amp), 1e-12);
}

TEST(TypicalProjector, CapAndArguments) {
  EXPECT_THROW(TypicalProjector(diag2(0.9), 13, 0.1), ValidationError);
  EXPECT_NO_THROW(TypicalProjector(diag2(0.9), 12, 0.1));
  EXPECT_THROW(TypicalProjector(diag2(0.9), 0, 0.1), ValidationError);
  EXPECT_THROW(TypicalProjector(diag2(0.9), 4, -0.1), ValidationError);
}

TEST(TypicalityAudit, MaximallyMixedMeetsBoundsWithEquality) {
  const TypicalityAudit a = typicality_bounds_audit(maximally_mixed(Space{{"A", 2}}), 4, 0.0);
  EXPECT_DOUBLE_EQ(a.trace, 16.0);
  EXPECT_DOUBLE_EQ(a.lower, 16.0);
  EXPECT_TRUE(a.all_ok());
}

TEST(TypicalityAudit, PureState) {
  const TypicalityAudit a = typicality_bounds_audit(diag2(1.0), 6, 0.1);
  EXPECT_DOUBLE_EQ(a.inf_norm, 1.0);
  EXPECT_DOUBLE_EQ(a.entropy, 0.0);
  EXPECT_TRUE(a.all_ok());
}

TEST(TypicalityAudit, BiasedCoinAgainstBinomialTail) {
  const TypicalityAudit a = typicality_bounds_audit(diag2(0.9), 10, 0.15);
  const Binomial b = binomial_oracle(0.9, 10, 0.15);
  EXPECT_NEAR(a.captured, b.captured, 1e-12);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_NEAR(a.rank, a.trace, 0.0);
}
