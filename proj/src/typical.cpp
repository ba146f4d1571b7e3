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

#include "qredist/typical.hpp"

#include <cmath>

#include "qredist/entropy.hpp"

namespace qredist {

namespace {

constexpr double kBandSlack = 1e-12;

}  // namespace

TypicalProjector::TypicalProjector(const DensityOperator& rho, std::size_t n, double delta,
                                   std::size_t cap)
    : n_(n), delta_(delta) {
  if (n == 0) throw ValidationError("typical projector needs n >= 1");
  if (delta < 0) throw ValidationError("delta must be nonnegative");
  const std::size_t d = rho.space().dim();
  for (std::size_t i = 0; i < n; ++i) {
    if (dim_ > cap / d) throw ValidationError("typical projector dimension exceeds the cap of " +
                                              std::to_string(cap));
    dim_ *= d;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  eigvecs_ = es.eigenvectors();
  eigvals_ = es.eigenvalues().cwiseMax(0.0);
  entropy_ = entropy_of_spectrum(eigvals_);

  std::vector<std::size_t> digit(n, 0);
  for (std::size_t flat = 0; flat < dim_; ++flat) {
    double p = 1;
    for (auto x : digit) p *= eigvals_(Eigen::Index(x));
    if (p > 0) {
      double log_p = 0;
      for (auto x : digit) log_p += std::log2(eigvals_(Eigen::Index(x)));
      if (std::abs(-log_p / double(n) - entropy_) <= delta + kBandSlack) {
        kept_.push_back(flat);
        weights_.push_back(p);
        captured_ += p;
      }
    }
    for (std::size_t i = n; i-- > 0;) {
      if (++digit[i] < d) break;
      digit[i] = 0;
    }
  }
}

Matrix TypicalProjector::matrix() const {
  Matrix v = Matrix::Ones(1, 1);
  for (std::size_t i = 0; i < n_; ++i) v = linalg::kron(v, eigvecs_);
  Matrix cols(v.rows(), Eigen::Index(kept_.size()));
  for (std::size_t j = 0; j < kept_.size(); ++j) cols.col(Eigen::Index(j)) = v.col(Eigen::Index(kept_[j]));
  return cols * cols.adjoint();
}

Labels TypicalProjector::flatten(const Ket& ket, const std::vector<Labels>& copies) const {
  if (copies.size() != n_)
    throw ValidationError("expected " + std::to_string(n_) + " copies, got " +
                          std::to_string(copies.size()));
  Labels all;
  for (const auto& g : copies) {
    if (ket.space().dim_of(g) != single_dim())
      throw ValidationError("copy group does not match the single-copy dimension");
    all.insert(all.end(), g.begin(), g.end());
  }
  return all;
}

Ket TypicalProjector::to_eigenbasis(const Ket& ket, const std::vector<Labels>& copies,
                                    bool inverse) const {
  const Labels order = ket.space().names();
  const Matrix m = inverse ? Matrix(eigvecs_) : Matrix(eigvecs_.adjoint());
  Ket out = ket;
  for (const auto& g : copies) out = apply(m, out, g, ket.space().select(g)).permuted(order);
  return out;
}

Ket TypicalProjector::project(const Ket& ket, const std::vector<Labels>& copies) const {
  const Labels all = flatten(ket, copies);
  const Ket e = to_eigenbasis(ket, copies, false);
  Matrix m = e.matricize(all);
  Matrix masked = Matrix::Zero(m.rows(), m.cols());
  for (auto k : kept_) masked.row(Eigen::Index(k)) = m.row(Eigen::Index(k));
  const Labels rest = ket.space().complement(all);
  const Ket back = Ket::from_matrix(ket.space().select(all), ket.space().select(rest), masked);
  return to_eigenbasis(back, copies, true).permuted(ket.space().names());
}

Ket TypicalProjector::restrict(const Ket& ket, const std::vector<Labels>& copies,
                               const std::string& name) const {
  if (empty()) throw ValidationError("typical subspace is empty");
  const Labels all = flatten(ket, copies);
  const Ket e = to_eigenbasis(ket, copies, false);
  const Matrix m = e.matricize(all);
  Matrix kept(Eigen::Index(kept_.size()), m.cols());
  for (std::size_t j = 0; j < kept_.size(); ++j) kept.row(Eigen::Index(j)) = m.row(Eigen::Index(kept_[j]));
  const Labels rest = ket.space().complement(all);
  return Ket::from_matrix(Space{{name, kept_.size()}}, ket.space().select(rest), kept);
}

TypicalityAudit typicality_bounds_audit(const DensityOperator& rho, std::size_t n, double delta,
                                        std::size_t cap) {
  const TypicalProjector pi(rho, n, delta, cap);
  TypicalityAudit a;
  a.n = n;
  a.delta = delta;
  a.entropy = pi.entropy();
  a.captured = pi.captured();
  a.trace = double(pi.trace());
  a.lower = std::exp2(double(n) * (a.entropy - delta));
  a.upper = std::exp2(double(n) * (a.entropy + delta));
  // Pi commutes with rho^{(x) n}, so the projected state is diagonal with the
  // kept weights.
  for (double w : pi.kept_weights()) {
    const double q = w / a.captured;
    a.rank += 1;
    a.two_norm_sq += q * q;
    a.inf_norm = std::max(a.inf_norm, q);
  }
  const double tol_rel = 1e-12;
  auto within = [&](double x, double lo, double hi) {
    return x >= lo * (1 - tol_rel) && x <= hi * (1 + tol_rel);
  };
  a.trace_ok = !pi.empty() && within(a.trace, a.lower, a.upper);
  a.rank_ok = !pi.empty() && within(a.rank, a.lower, a.upper);
  a.two_norm_ok = !pi.empty() && within(a.two_norm_sq, 1 / a.upper, 1 / a.lower);
  a.inf_norm_ok = !pi.empty() && within(a.inf_norm, 1 / a.upper, 1 / a.lower);
  return a;
}

}  // namespace qredist
