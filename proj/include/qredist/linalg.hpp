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

// Scalar-generic dense helpers. Everything here accepts Eigen expressions and
// returns plain objects; Hermitian inputs are assumed where noted.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>

#include "qredist/common.hpp"

namespace qredist::linalg {

template <typename Derived>
using Plain = typename Derived::PlainObject;

template <typename Derived>
using RealOf = typename Eigen::NumTraits<typename Derived::Scalar>::Real;

template <typename Derived>
using RealVectorOf = Eigen::Matrix<RealOf<Derived>, Eigen::Dynamic, 1>;

template <typename A, typename B>
Eigen::Matrix<typename A::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  Eigen::Matrix<typename A::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(
      a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// ||M - M^dagger||_max.
template <typename Derived>
RealOf<Derived> hermiticity_residual(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() == 0) return 0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Eigenvalues of a Hermitian matrix, ascending.
template <typename Derived>
RealVectorOf<Derived> hermitian_eigenvalues(const Eigen::MatrixBase<Derived>& m) {
  Eigen::SelfAdjointEigenSolver<Plain<Derived>> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// f applied to the spectrum of a Hermitian matrix. Eigenvalues in
/// [-tol::psd, 0] are clamped to zero first.
template <typename Derived, typename F>
Plain<Derived> spectral_map(const Eigen::MatrixBase<Derived>& m, F&& f) {
  Eigen::SelfAdjointEigenSolver<Plain<Derived>> es(m);
  RealVectorOf<Derived> v = es.eigenvalues();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) < 0 && v(i) >= -tol::psd) v(i) = 0;
    v(i) = f(v(i));
  }
  return es.eigenvectors() * v.asDiagonal() * es.eigenvectors().adjoint();
}

template <typename Derived>
Plain<Derived> psd_sqrt(const Eigen::MatrixBase<Derived>& m) {
  return spectral_map(m, [](auto x) { return x > 0 ? std::sqrt(x) : decltype(x)(0); });
}

/// Pseudo-inverse square root on the support, where the support is the span of
/// eigenvectors with eigenvalue above `rel_cutoff * lambda_max`.
template <typename Derived>
Plain<Derived> pinv_sqrt(const Eigen::MatrixBase<Derived>& m,
                         RealOf<Derived> rel_cutoff = tol::rank) {
  Eigen::SelfAdjointEigenSolver<Plain<Derived>> es(m);
  RealVectorOf<Derived> v = es.eigenvalues();
  const auto cut = rel_cutoff * std::max<RealOf<Derived>>(v.maxCoeff(), 0);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = (v(i) > cut && v(i) > 0) ? 1 / std::sqrt(v(i)) : 0;
  return es.eigenvectors() * v.asDiagonal() * es.eigenvectors().adjoint();
}

template <typename Derived>
Plain<Derived> support_projector(const Eigen::MatrixBase<Derived>& m,
                                 RealOf<Derived> rel_cutoff = tol::rank) {
  Eigen::SelfAdjointEigenSolver<Plain<Derived>> es(m);
  RealVectorOf<Derived> v = es.eigenvalues();
  const auto cut = rel_cutoff * std::max<RealOf<Derived>>(v.maxCoeff(), 0);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = (v(i) > cut && v(i) > 0) ? 1 : 0;
  return es.eigenvectors() * v.asDiagonal() * es.eigenvectors().adjoint();
}

/// Number of eigenvalues above `rel_cutoff * lambda_max`.
template <typename Vec>
Eigen::Index numerical_rank(const Eigen::MatrixBase<Vec>& spectrum,
                            typename Vec::Scalar rel_cutoff = tol::rank) {
  if (spectrum.size() == 0) return 0;
  const auto top = spectrum.maxCoeff();
  if (top <= 0) return 0;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < spectrum.size(); ++i)
    if (spectrum(i) > rel_cutoff * top) ++r;
  return r;
}

/// Schatten-1 norm of a Hermitian matrix.
template <typename Derived>
RealOf<Derived> hermitian_trace_norm(const Eigen::MatrixBase<Derived>& m) {
  return hermitian_eigenvalues(m).cwiseAbs().sum();
}

/// Schatten-1 norm of an arbitrary matrix (sum of singular values).
template <typename Derived>
RealOf<Derived> trace_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Plain<Derived>> svd(m);
  return svd.singularValues().sum();
}

/// ||M^dagger M - I||_max.
template <typename Derived>
RealOf<Derived> isometry_residual(const Eigen::MatrixBase<Derived>& m) {
  const Plain<Derived> g = m.adjoint() * m;
  return (g - Plain<Derived>::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

/// ||(M^dagger M)^2 - M^dagger M||_max; zero exactly for partial isometries.
template <typename Derived>
RealOf<Derived> partial_isometry_residual(const Eigen::MatrixBase<Derived>& m) {
  const Plain<Derived> g = m.adjoint() * m;
  return (g * g - g).cwiseAbs().maxCoeff();
}

/// Complex Gaussian matrix with E|z|^2 = 1.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> ginibre(
    Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> z(rows, cols);
  const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i)
      z(i, j) = std::complex<Scalar>(s * Scalar(rng.normal()), s * Scalar(rng.normal()));
  return z;
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal folded back into Q.
template <typename Scalar = double>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> haar_unitary(
    Eigen::Index dim, Rng& rng) {
  using M = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
  const M z = ginibre<Scalar>(dim, dim, rng);
  Eigen::HouseholderQR<M> qr(z);
  M q = qr.householderQ();
  const M r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto d = r(i, i);
    const Scalar a = std::abs(d);
    q.col(i) *= a > 0 ? d / a : std::complex<Scalar>(1);
  }
  return q;
}

}  // namespace qredist::linalg
