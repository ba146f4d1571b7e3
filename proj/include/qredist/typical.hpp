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

#include <cstdint>
#include <vector>

#include "qredist/qcore.hpp"

namespace qredist {

/// Entropy-typical projector of rho^{(x) n}: the span of product eigenvectors
/// whose eigenvalue product p satisfies |-(1/n) log2 p - H(rho)| <= delta.
/// Stored as the single-copy eigenbasis plus the kept multi-indices, so the
/// projector is applied copy by copy and never formed unless asked for.
class TypicalProjector {
 public:
  static constexpr std::size_t kDefaultCap = std::size_t{1} << 12;

  TypicalProjector(const DensityOperator& rho, std::size_t n, double delta,
                   std::size_t cap = kDefaultCap);

  std::size_t n() const { return n_; }
  double delta() const { return delta_; }
  double entropy() const { return entropy_; }
  std::size_t single_dim() const { return std::size_t(eigvals_.size()); }
  std::size_t dim() const { return dim_; }
  /// Tr Pi, the number of kept product eigenvectors.
  std::size_t trace() const { return kept_.size(); }
  bool empty() const { return kept_.empty(); }
  /// Tr Pi rho^{(x) n}.
  double captured() const { return captured_; }

  /// Flat multi-indices (first copy most significant) into the eigenbasis.
  const std::vector<std::size_t>& kept() const { return kept_; }
  const Matrix& eigenvectors() const { return eigvecs_; }
  const RealVector& eigenvalues() const { return eigvals_; }
  /// Eigenvalue product of each kept index, in the order of kept().
  const std::vector<double>& kept_weights() const { return weights_; }

  /// Full dim x dim projector in the computational basis.
  Matrix matrix() const;

  /// Applies Pi to the copies of `ket`; copy i is the group `copies[i]`,
  /// whose joint dimension must equal the single-copy dimension.
  Ket project(const Ket& ket, const std::vector<Labels>& copies) const;
  /// Pi followed by the isometric identification of the typical subspace with
  /// a single system `name` of dimension trace(), placed first.
  Ket restrict(const Ket& ket, const std::vector<Labels>& copies, const std::string& name) const;

 private:
  Ket to_eigenbasis(const Ket& ket, const std::vector<Labels>& copies, bool inverse) const;
  Labels flatten(const Ket& ket, const std::vector<Labels>& copies) const;

  std::size_t n_;
  double delta_;
  double entropy_ = 0;
  std::size_t dim_ = 1;
  Matrix eigvecs_;
  RealVector eigvals_;
  std::vector<std::size_t> kept_;
  std::vector<double> weights_;
  double captured_ = 0;
};

/// Schatten-norm and trace margins of the normalized projected state
/// Pi rho^{(x) n} Pi / Tr(Pi rho^{(x) n}).
struct TypicalityAudit {
  std::size_t n = 0;
  double delta = 0;
  double entropy = 0;
  double captured = 0;
  double trace = 0;
  double rank = 0;         ///< ||.||_0
  double two_norm_sq = 0;  ///< ||.||_2^2
  double inf_norm = 0;     ///< ||.||_inf
  double lower = 0;        ///< 2^{n(H - delta)}
  double upper = 0;        ///< 2^{n(H + delta)}

  bool trace_ok = false;
  bool rank_ok = false;
  bool two_norm_ok = false;
  bool inf_norm_ok = false;
  bool all_ok() const { return trace_ok && rank_ok && two_norm_ok && inf_norm_ok; }
};

TypicalityAudit typicality_bounds_audit(const DensityOperator& rho, std::size_t n, double delta,
                                        std::size_t cap = TypicalProjector::kDefaultCap);

}  // namespace qredist
