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

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "qredist/common.hpp"
#include "qredist/linalg.hpp"

namespace qredist {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Labels = std::vector<std::string>;

struct SystemLabel {
  std::string name;
  std::size_t dim = 1;

  friend bool operator==(const SystemLabel&, const SystemLabel&) = default;
};

/// Ordered tensor product of named subsystems. The first system is the most
/// significant digit of the flat (row-major) basis index.
class Space {
 public:
  Space() = default;
  Space(std::initializer_list<SystemLabel> systems);
  explicit Space(std::vector<SystemLabel> systems);

  const std::vector<SystemLabel>& systems() const { return systems_; }
  std::size_t size() const { return systems_.size(); }
  bool empty() const { return systems_.empty(); }
  std::size_t dim() const;

  bool contains(const std::string& name) const;
  std::size_t index_of(const std::string& name) const;
  const SystemLabel& at(const std::string& name) const;
  Labels names() const;

  /// Sub-space with the named systems, in the order given.
  Space select(const Labels& names) const;
  /// Names not in `names`, in this space's order.
  Labels complement(const Labels& names) const;
  std::size_t dim_of(const Labels& names) const;

  Space concat(const Space& other) const;

  friend bool operator==(const Space&, const Space&) = default;

 private:
  std::vector<SystemLabel> systems_;
};

/// `result[new_flat] = old_flat` for the reordering of `space` into `order`.
std::vector<Eigen::Index> permutation_map(const Space& space, const Labels& order);

/// Labeled vector with no normalization contract; subnormalized intermediate
/// states of the protocol live here.
class Ket {
 public:
  Ket() = default;
  Ket(Space space, Vector amplitudes);

  const Space& space() const { return space_; }
  const Vector& amplitudes() const { return amplitudes_; }
  double norm() const { return amplitudes_.norm(); }

  Ket permuted(const Labels& order) const;
  /// rows x rest, rest taken in this space's order.
  Matrix matricize(const Labels& rows) const;
  static Ket from_matrix(const Space& rows, const Space& rest, const Matrix& m);

 protected:
  Space space_;
  Vector amplitudes_;
};

/// Unit vector over labeled subsystems.
class PureState : public Ket {
 public:
  PureState() = default;
  PureState(Space space, Vector amplitudes);
  explicit PureState(Ket ket);

  /// Rescales to unit norm; throws on a zero vector.
  static PureState normalize(const Ket& ket);
};

/// Operator on a labeled space without positivity or trace contract.
struct Operator {
  Space space;
  Matrix matrix;
};

/// Hermitian, positive semidefinite, unit-trace operator on a labeled space.
class DensityOperator {
 public:
  DensityOperator() = default;
  DensityOperator(Space space, Matrix matrix);
  explicit DensityOperator(Operator op);

  const Space& space() const { return op_.space; }
  const Matrix& matrix() const { return op_.matrix; }
  const Operator& op() const { return op_; }

 private:
  Operator op_;
};

/// Linear map between labeled spaces, expected to be a partial isometry.
struct IsometryMap {
  Space in;
  Space out;
  Matrix matrix;

  IsometryMap() = default;
  IsometryMap(Space in, Space out, Matrix matrix);

  IsometryMap adjoint() const;
  double partial_isometry_residual() const;
  double isometry_residual() const;
};

// -- construction ----------------------------------------------------------

PureState basis_state(const Space& space, std::size_t index);
PureState max_entangled(const SystemLabel& a, const SystemLabel& b);
DensityOperator maximally_mixed(const Space& space);
DensityOperator projector(const PureState& psi);

/// Inserts a dimension-one system at the end; no-op if already present.
Ket with_trivial(const Ket& ket, const std::string& name);
/// Fuses `group` into one system called `name` placed where the first member
/// was. An empty group appends a trivial system.
Ket merge(const Ket& ket, const Labels& group, const std::string& name);
/// Renames one system.
Ket rename(const Ket& ket, const std::string& from, const std::string& to);

// -- composition -----------------------------------------------------------

Ket tensor(const Ket& a, const Ket& b);
PureState tensor(const PureState& a, const PureState& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

/// Applies `op` (out x in) to the systems `in`; the result lists `out` first,
/// followed by the untouched systems in their original order.
Ket apply(const Matrix& op, const Ket& ket, const Labels& in, const Space& out);
Ket apply(const IsometryMap& map, const Ket& ket);

Operator permuted(const Operator& op, const Labels& order);
/// (M (x) I) rho (M (x) I)^dagger with the same output ordering as `apply`.
Operator conjugate(const Operator& rho, const Matrix& m, const Labels& in, const Space& out);

/// <a|b>; `b` is reordered to `a`'s system order when the sets coincide.
Complex inner(const Ket& a, const Ket& b);

// -- marginals -------------------------------------------------------------

Operator partial_trace(const Operator& rho, const Labels& keep);
DensityOperator partial_trace(const DensityOperator& rho, const Labels& keep);
Operator partial_trace(const Ket& ket, const Labels& keep);
DensityOperator partial_trace(const PureState& psi, const Labels& keep);

/// Nonzero-padded spectrum of the marginal on `keep`, descending. Computed
/// from the Schmidt decomposition so the larger side is never formed.
RealVector marginal_spectrum(const Ket& ket, const Labels& keep);

/// Purification on `space (x) ref`.
PureState purify(const DensityOperator& rho, const SystemLabel& ref);

// -- distances and norms ---------------------------------------------------

/// F(rho, sigma) = ||sqrt(rho) sqrt(sigma)||_1^2.
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);
double fidelity(const PureState& phi, const DensityOperator& sigma);
double fidelity(const PureState& a, const PureState& b);

/// Unnormalized ||rho - sigma||_1 (orthogonal pure states are at distance 2).
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);
double trace_distance(const Operator& rho, const Operator& sigma);
/// Closed form for pure states, allowing subnormalized vectors.
double trace_distance(const Ket& a, const Ket& b);
/// ||Tr_rest |joint><joint| - |psi><psi| ||_1, with psi's systems kept. Works on
/// the Schmidt span, so the cost scales with the discarded dimension.
double marginal_distance_to_pure(const Ket& joint, const Ket& psi);

enum class Schatten { rank0, two_norm_sq, inf_norm };

double schatten(const Matrix& hermitian, Schatten which);
double schatten(const DensityOperator& rho, Schatten which);
double schatten_of_spectrum(const RealVector& spectrum, Schatten which);

// -- sampling --------------------------------------------------------------

Matrix haar_unitary(std::size_t dim, Rng& rng);
PureState random_pure_state(const Space& space, Rng& rng);
/// Marginal of a Haar-random purification with an ancilla of dimension `rank`.
DensityOperator random_density(const Space& space, std::size_t rank, Rng& rng);
/// A pure state at trace distance exactly `eps` from `psi` (eps <= 2).
PureState perturb(const PureState& psi, double eps, Rng& rng);

// -- Uhlmann ---------------------------------------------------------------

struct UhlmannResult {
  IsometryMap isometry;  ///< X -> Y
  double overlap = 0;    ///< |<tgt| (V (x) I_E) |src>|
};

/// Partial isometry V: X -> Y maximizing |<tgt|(V (x) I_E)|src>| where `src`
/// lives on X (x) E and `tgt` on Y (x) E; E is whatever remains of each.
UhlmannResult max_overlap_isometry(const Ket& src, const Labels& x, const Ket& tgt,
                                   const Labels& y);

}  // namespace qredist
