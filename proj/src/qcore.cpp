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

#include "qredist/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

namespace qredist {

namespace {

using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace

// -- Space -----------------------------------------------------------------

Space::Space(std::initializer_list<SystemLabel> systems)
    : Space(std::vector<SystemLabel>(systems)) {}

Space::Space(std::vector<SystemLabel> systems) : systems_(std::move(systems)) {
  std::set<std::string> seen;
  for (const auto& s : systems_) {
    require(s.dim >= 1, "system '" + s.name + "' has dimension 0");
    require(seen.insert(s.name).second, "duplicate system label '" + s.name + "'");
  }
}

std::size_t Space::dim() const {
  std::size_t d = 1;
  for (const auto& s : systems_) d *= s.dim;
  return d;
}

bool Space::contains(const std::string& name) const {
  return std::any_of(systems_.begin(), systems_.end(),
                     [&](const SystemLabel& s) { return s.name == name; });
}

std::size_t Space::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < systems_.size(); ++i)
    if (systems_[i].name == name) return i;
  throw ValidationError("unknown system label '" + name + "'");
}

const SystemLabel& Space::at(const std::string& name) const {
  return systems_[index_of(name)];
}

Labels Space::names() const {
  Labels out;
  out.reserve(systems_.size());
  for (const auto& s : systems_) out.push_back(s.name);
  return out;
}

Space Space::select(const Labels& names) const {
  std::vector<SystemLabel> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(at(n));
  return Space(std::move(out));
}

Labels Space::complement(const Labels& names) const {
  for (const auto& n : names) index_of(n);
  Labels out;
  for (const auto& s : systems_)
    if (std::find(names.begin(), names.end(), s.name) == names.end()) out.push_back(s.name);
  return out;
}

std::size_t Space::dim_of(const Labels& names) const { return select(names).dim(); }

Space Space::concat(const Space& other) const {
  std::vector<SystemLabel> all = systems_;
  all.insert(all.end(), other.systems_.begin(), other.systems_.end());
  return Space(std::move(all));
}

std::vector<Eigen::Index> permutation_map(const Space& space, const Labels& order) {
  require(order.size() == space.size(), "reordering must name every system");
  const std::size_t m = space.size();
  std::vector<std::size_t> old_stride(m, 1);
  for (std::size_t i = m; i-- > 1;) old_stride[i - 1] = old_stride[i] * space.systems()[i].dim;

  std::vector<std::size_t> src(m), dims(m);
  std::set<std::string> seen;
  for (std::size_t j = 0; j < m; ++j) {
    require(seen.insert(order[j]).second, "reordering repeats '" + order[j] + "'");
    src[j] = space.index_of(order[j]);
    dims[j] = space.systems()[src[j]].dim;
  }

  const std::size_t total = space.dim();
  std::vector<Eigen::Index> map(total);
  std::vector<std::size_t> digit(m, 0);
  std::size_t old = 0;
  for (std::size_t flat = 0; flat < total; ++flat) {
    map[flat] = static_cast<Eigen::Index>(old);
    for (std::size_t j = m; j-- > 0;) {
      ++digit[j];
      old += old_stride[src[j]];
      if (digit[j] < dims[j]) break;
      old -= digit[j] * old_stride[src[j]];
      digit[j] = 0;
    }
  }
  return map;
}

// -- Ket / PureState -------------------------------------------------------

Ket::Ket(Space space, Vector amplitudes)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
  require(static_cast<std::size_t>(amplitudes_.size()) == space_.dim(),
          "amplitude count does not match the product of system dimensions");
}

Ket Ket::permuted(const Labels& order) const {
  if (order == space_.names()) return *this;
  const auto map = permutation_map(space_, order);
  Vector out(amplitudes_.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = amplitudes_(map[i]);
  return Ket(space_.select(order), std::move(out));
}

Matrix Ket::matricize(const Labels& rows) const {
  Labels order = rows;
  const Labels rest = space_.complement(rows);
  order.insert(order.end(), rest.begin(), rest.end());
  const Ket p = permuted(order);
  const auto dr = static_cast<Eigen::Index>(space_.dim_of(rows));
  const Eigen::Index dc = dr == 0 ? 0 : p.amplitudes_.size() / dr;
  return Eigen::Map<const RowMajor>(p.amplitudes_.data(), dr, dc);
}

Ket Ket::from_matrix(const Space& rows, const Space& rest, const Matrix& m) {
  require(static_cast<std::size_t>(m.rows()) == rows.dim() &&
              static_cast<std::size_t>(m.cols()) == rest.dim(),
          "matrix shape does not match the labeled spaces");
  Vector v(m.size());
  Eigen::Map<RowMajor>(v.data(), m.rows(), m.cols()) = m;
  return Ket(rows.concat(rest), std::move(v));
}

PureState::PureState(Space space, Vector amplitudes)
    : Ket(std::move(space), std::move(amplitudes)) {
  require(std::abs(amplitudes_.squaredNorm() - 1.0) <= tol::norm,
          "pure state is not normalized");
}

PureState::PureState(Ket ket) : PureState(ket.space(), ket.amplitudes()) {}

PureState PureState::normalize(const Ket& ket) {
  const double n = ket.norm();
  require(n > 0, "cannot normalize the zero vector");
  return PureState(ket.space(), ket.amplitudes() / n);
}

// -- DensityOperator / IsometryMap -----------------------------------------

DensityOperator::DensityOperator(Space space, Matrix matrix)
    : DensityOperator(Operator{std::move(space), std::move(matrix)}) {}

DensityOperator::DensityOperator(Operator op) : op_(std::move(op)) {
  const auto d = static_cast<Eigen::Index>(op_.space.dim());
  require(op_.matrix.rows() == d && op_.matrix.cols() == d,
          "density matrix shape does not match the labeled space");
  require(linalg::hermiticity_residual(op_.matrix) <= tol::herm,
          "density matrix is not Hermitian");
  require(std::abs(op_.matrix.trace().real() - 1.0) <= tol::norm,
          "density matrix does not have unit trace");
  const RealVector ev = linalg::hermitian_eigenvalues(op_.matrix);
  require(ev.size() == 0 || ev.minCoeff() >= -tol::psd,
          "density matrix has a negative eigenvalue " + std::to_string(ev.minCoeff()));
}

IsometryMap::IsometryMap(Space in_, Space out_, Matrix matrix_)
    : in(std::move(in_)), out(std::move(out_)), matrix(std::move(matrix_)) {
  require(static_cast<std::size_t>(matrix.rows()) == out.dim() &&
              static_cast<std::size_t>(matrix.cols()) == in.dim(),
          "isometry matrix shape does not match its spaces");
}

IsometryMap IsometryMap::adjoint() const { return IsometryMap(out, in, matrix.adjoint()); }

double IsometryMap::partial_isometry_residual() const {
  return linalg::partial_isometry_residual(matrix);
}

double IsometryMap::isometry_residual() const { return linalg::isometry_residual(matrix); }

// -- construction ----------------------------------------------------------

PureState basis_state(const Space& space, std::size_t index) {
  require(index < space.dim(), "basis index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(space.dim()));
  v(static_cast<Eigen::Index>(index)) = 1;
  return PureState(space, std::move(v));
}

PureState max_entangled(const SystemLabel& a, const SystemLabel& b) {
  require(a.dim == b.dim, "maximally entangled pair needs isomorphic systems");
  const auto d = static_cast<Eigen::Index>(a.dim);
  Vector v = Vector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(double(d));
  return PureState(Space{a, b}, std::move(v));
}

DensityOperator maximally_mixed(const Space& space) {
  const auto d = static_cast<Eigen::Index>(space.dim());
  return DensityOperator(space, Matrix::Identity(d, d) / double(d));
}

DensityOperator projector(const PureState& psi) {
  return DensityOperator(psi.space(), psi.amplitudes() * psi.amplitudes().adjoint());
}

Ket with_trivial(const Ket& ket, const std::string& name) {
  if (ket.space().contains(name)) return ket;
  return Ket(ket.space().concat(Space{{name, 1}}), ket.amplitudes());
}

Ket merge(const Ket& ket, const Labels& group, const std::string& name) {
  if (group.empty()) return with_trivial(ket, name);
  const auto& systems = ket.space().systems();
  const std::size_t first = ket.space().index_of(group.front());
  Labels order;
  std::vector<SystemLabel> fused;
  for (std::size_t i = 0; i < systems.size(); ++i) {
    const bool in_group =
        std::find(group.begin(), group.end(), systems[i].name) != group.end();
    if (i == first) {
      order.insert(order.end(), group.begin(), group.end());
      fused.push_back({name, ket.space().dim_of(group)});
    } else if (!in_group) {
      order.push_back(systems[i].name);
      fused.push_back(systems[i]);
    }
  }
  const Ket p = ket.permuted(order);
  return Ket(Space(std::move(fused)), p.amplitudes());
}

Ket rename(const Ket& ket, const std::string& from, const std::string& to) {
  auto systems = ket.space().systems();
  systems[ket.space().index_of(from)].name = to;
  return Ket(Space(std::move(systems)), ket.amplitudes());
}

// -- composition -----------------------------------------------------------

Ket tensor(const Ket& a, const Ket& b) {
  Space s = a.space().concat(b.space());
  Vector v(a.amplitudes().size() * b.amplitudes().size());
  for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i)
    v.segment(i * b.amplitudes().size(), b.amplitudes().size()) =
        a.amplitudes()(i) * b.amplitudes();
  return Ket(std::move(s), std::move(v));
}

PureState tensor(const PureState& a, const PureState& b) {
  return PureState(tensor(static_cast<const Ket&>(a), static_cast<const Ket&>(b)));
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator(a.space().concat(b.space()), linalg::kron(a.matrix(), b.matrix()));
}

Ket apply(const Matrix& op, const Ket& ket, const Labels& in, const Space& out) {
  const Matrix psi = ket.matricize(in);
  require(op.cols() == psi.rows() && static_cast<std::size_t>(op.rows()) == out.dim(),
          "operator shape does not match the systems it acts on");
  const Space rest = ket.space().select(ket.space().complement(in));
  return Ket::from_matrix(out, rest, op * psi);
}

Ket apply(const IsometryMap& map, const Ket& ket) {
  return apply(map.matrix, ket, map.in.names(), map.out);
}

Operator permuted(const Operator& op, const Labels& order) {
  if (order == op.space.names()) return op;
  const auto map = permutation_map(op.space, order);
  const auto d = op.matrix.rows();
  Matrix out(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) out(i, j) = op.matrix(map[i], map[j]);
  return Operator{op.space.select(order), std::move(out)};
}

Operator conjugate(const Operator& rho, const Matrix& m, const Labels& in, const Space& out) {
  Labels order = in;
  const Labels rest = rho.space.complement(in);
  order.insert(order.end(), rest.begin(), rest.end());
  const Operator p = permuted(rho, order);
  const auto d_rest = static_cast<Eigen::Index>(rho.space.dim_of(rest));
  require(m.cols() == static_cast<Eigen::Index>(rho.space.dim_of(in)) &&
              static_cast<std::size_t>(m.rows()) == out.dim(),
          "operator shape does not match the systems it acts on");
  const Matrix full = linalg::kron(m, Matrix::Identity(d_rest, d_rest));
  return Operator{out.concat(rho.space.select(rest)), full * p.matrix * full.adjoint()};
}

Complex inner(const Ket& a, const Ket& b) {
  if (a.space() == b.space()) return a.amplitudes().dot(b.amplitudes());
  const Ket bp = b.permuted(a.space().names());
  require(bp.space() == a.space(), "inner product between different spaces");
  return a.amplitudes().dot(bp.amplitudes());
}

// -- marginals -------------------------------------------------------------

Operator partial_trace(const Operator& rho, const Labels& keep) {
  Labels order = keep;
  const Labels rest = rho.space.complement(keep);
  order.insert(order.end(), rest.begin(), rest.end());
  const Operator p = permuted(rho, order);
  const auto dk = static_cast<Eigen::Index>(rho.space.dim_of(keep));
  const auto dr = static_cast<Eigen::Index>(rho.space.dim_of(rest));
  Matrix out = Matrix::Zero(dk, dk);
  for (Eigen::Index r = 0; r < dr; ++r)
    for (Eigen::Index j = 0; j < dk; ++j)
      for (Eigen::Index i = 0; i < dk; ++i) out(i, j) += p.matrix(i * dr + r, j * dr + r);
  return Operator{rho.space.select(keep), std::move(out)};
}

DensityOperator partial_trace(const DensityOperator& rho, const Labels& keep) {
  return DensityOperator(partial_trace(rho.op(), keep));
}

Operator partial_trace(const Ket& ket, const Labels& keep) {
  const Matrix psi = ket.matricize(keep);
  return Operator{ket.space().select(keep), psi * psi.adjoint()};
}

DensityOperator partial_trace(const PureState& psi, const Labels& keep) {
  return DensityOperator(partial_trace(static_cast<const Ket&>(psi), keep));
}

RealVector marginal_spectrum(const Ket& ket, const Labels& keep) {
  const Matrix psi = ket.matricize(keep);
  RealVector out = RealVector::Zero(psi.rows());
  if (psi.size() == 0) return out;
  Eigen::BDCSVD<Matrix> svd(psi);
  const RealVector s = svd.singularValues();
  out.head(s.size()) = s.cwiseAbs2();
  return out;
}

PureState purify(const DensityOperator& rho, const SystemLabel& ref) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  const RealVector ev = es.eigenvalues();
  const auto rank = linalg::numerical_rank(ev);
  if (static_cast<std::size_t>(rank) > ref.dim)
    throw ValidationError("reference dimension " + std::to_string(ref.dim) +
                          " is smaller than the rank " + std::to_string(rank));
  const auto d = ev.size();
  const auto dref = static_cast<Eigen::Index>(ref.dim);
  // Schmidt form sum_i sqrt(l_i) |v_i>|i>, largest eigenvalues first.
  Matrix amp = Matrix::Zero(d, dref);
  const Eigen::Index keep = std::min(d, dref);
  for (Eigen::Index i = 0; i < keep; ++i) {
    const Eigen::Index src = d - 1 - i;
    const double l = std::max(ev(src), 0.0);
    amp.col(i) = std::sqrt(l) * es.eigenvectors().col(src);
  }
  return PureState::normalize(Ket::from_matrix(rho.space(), Space{ref}, amp));
}

// -- distances and norms ---------------------------------------------------

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  require(rho.space() == sigma.space(), "fidelity between different spaces");
  // Restrict to the numerical support of rho so that rounding noise in its
  // null space is not amplified by the square roots:
  // sqrt(F) = Tr sqrt(D^{1/2} V^dag sigma V D^{1/2}) with rho = V D V^dag.
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  const RealVector& ev = es.eigenvalues();
  const double cut = tol::rank * std::max(ev.maxCoeff(), 0.0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > cut) keep.push_back(i);
  Matrix vd(ev.size(), Eigen::Index(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j)
    vd.col(Eigen::Index(j)) = es.eigenvectors().col(keep[j]) * std::sqrt(ev(keep[j]));
  const Matrix m = vd.adjoint() * sigma.matrix() * vd;
  const RealVector mu = linalg::hermitian_eigenvalues(Matrix((m + m.adjoint()) / 2));
  double root = 0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) root += std::sqrt(std::max(mu(i), 0.0));
  return std::clamp(root * root, 0.0, 1.0);
}

double fidelity(const PureState& phi, const DensityOperator& sigma) {
  require(phi.space() == sigma.space(), "fidelity between different spaces");
  const double f = phi.amplitudes().dot(sigma.matrix() * phi.amplitudes()).real();
  return std::clamp(f, 0.0, 1.0);
}

double fidelity(const PureState& a, const PureState& b) { return std::norm(inner(a, b)); }

double trace_distance(const Operator& rho, const Operator& sigma) {
  require(rho.space == sigma.space, "trace distance between different spaces");
  return linalg::hermitian_trace_norm(Matrix(rho.matrix - sigma.matrix));
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  return trace_distance(rho.op(), sigma.op());
}

double marginal_distance_to_pure(const Ket& joint, const Ket& psi) {
  const Labels names = psi.space().names();
  require(joint.space().select(names) == psi.space(), "joint state does not contain the pure state's systems");
  const Matrix m = joint.matricize(names);
  Matrix basis(m.rows(), m.cols() + 1);
  basis << m, psi.amplitudes();
  const Eigen::Index k = std::min(basis.rows(), basis.cols());
  const Matrix q = Eigen::HouseholderQR<Matrix>(basis).householderQ() * Matrix::Identity(basis.rows(), k);
  const Matrix a = q.adjoint() * m;
  const Vector b = q.adjoint() * psi.amplitudes();
  const Matrix diff = a * a.adjoint() - b * b.adjoint();
  return linalg::hermitian_trace_norm(diff);
}

double trace_distance(const Ket& a, const Ket& b) {
  // (na + nb)^2 - 4|<a|b>|^2 = (na - nb)^2 + 4 na ||b_perp||^2, where b_perp is
  // the part of b orthogonal to a; this form avoids cancellation near a = b.
  const double na = a.amplitudes().squaredNorm();
  const double nb = b.amplitudes().squaredNorm();
  if (na == 0) return nb;
  const Ket bb = b.space() == a.space() ? b : b.permuted(a.space().names());
  require(bb.space() == a.space(), "trace distance between different spaces");
  const Complex c = a.amplitudes().dot(bb.amplitudes());
  const double perp = (bb.amplitudes() - a.amplitudes() * (c / na)).squaredNorm();
  return std::sqrt((na - nb) * (na - nb) + 4 * na * perp);
}

double schatten_of_spectrum(const RealVector& spectrum, Schatten which) {
  if (spectrum.size() == 0) return 0;
  switch (which) {
    case Schatten::rank0:
      return double(linalg::numerical_rank(spectrum));
    case Schatten::two_norm_sq:
      return spectrum.squaredNorm();
    case Schatten::inf_norm:
      return spectrum.cwiseAbs().maxCoeff();
  }
  return 0;
}

double schatten(const Matrix& hermitian, Schatten which) {
  return schatten_of_spectrum(linalg::hermitian_eigenvalues(hermitian), which);
}

double schatten(const DensityOperator& rho, Schatten which) {
  return schatten(rho.matrix(), which);
}

// -- sampling --------------------------------------------------------------

Matrix haar_unitary(std::size_t dim, Rng& rng) {
  return linalg::haar_unitary<double>(static_cast<Eigen::Index>(dim), rng);
}

PureState random_pure_state(const Space& space, Rng& rng) {
  const Matrix z = linalg::ginibre<double>(static_cast<Eigen::Index>(space.dim()), 1, rng);
  return PureState::normalize(Ket(space, z.col(0)));
}

DensityOperator random_density(const Space& space, std::size_t rank, Rng& rng) {
  require(rank >= 1, "rank must be positive");
  std::string anc = "__anc";
  while (space.contains(anc)) anc += "_";
  const PureState big = random_pure_state(space.concat(Space{{anc, rank}}), rng);
  const Operator rho = partial_trace(static_cast<const Ket&>(big), space.names());
  // Re-symmetrize so the validating constructor sees an exactly Hermitian matrix.
  Matrix m = 0.5 * (rho.matrix + rho.matrix.adjoint());
  m /= m.trace().real();
  return DensityOperator(space, std::move(m));
}

PureState perturb(const PureState& psi, double eps, Rng& rng) {
  require(eps >= 0 && eps <= 2, "perturbation size must lie in [0, 2]");
  if (eps == 0) return psi;
  const Vector& a = psi.amplitudes();
  Vector g = linalg::ginibre<double>(a.size(), 1, rng).col(0);
  g -= a * a.dot(g);
  const double gn = g.norm();
  require(gn > 0, "cannot perturb a state in a one-dimensional space");
  g /= gn;
  const double theta = std::asin(eps / 2);
  return PureState(psi.space(), std::cos(theta) * a + std::sin(theta) * g);
}

// -- Uhlmann ---------------------------------------------------------------

UhlmannResult max_overlap_isometry(const Ket& src, const Labels& x, const Ket& tgt,
                                   const Labels& y) {
  const Labels src_rest = src.space().complement(x);
  const Labels tgt_rest = tgt.space().complement(y);
  require(std::set<std::string>(src_rest.begin(), src_rest.end()) ==
              std::set<std::string>(tgt_rest.begin(), tgt_rest.end()),
          "source and target must share the purified system");
  require(src.space().select(src_rest) == tgt.space().select(src_rest),
          "purified system dimensions differ");

  Labels tgt_order = y;
  tgt_order.insert(tgt_order.end(), src_rest.begin(), src_rest.end());
  const Matrix ps = src.matricize(x);
  const Matrix pt = tgt.permuted(tgt_order).matricize(y);

  Eigen::BDCSVD<Matrix> src_svd(ps);
  const auto src_rank = linalg::numerical_rank(src_svd.singularValues().cwiseAbs2().eval());
  if (static_cast<Eigen::Index>(pt.rows()) < src_rank)
    throw ValidationError("target dimension " + std::to_string(pt.rows()) +
                          " is below the source marginal rank " + std::to_string(src_rank));

  // <tgt|(V (x) I)|src> = Tr(V M) with M = Psi_src Psi_tgt^dagger.
  const Matrix m = ps * pt.adjoint();
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Index r = std::min(m.rows(), m.cols());
  const Matrix v = svd.matrixV().leftCols(r) * svd.matrixU().leftCols(r).adjoint();

  UhlmannResult out;
  out.isometry = IsometryMap(src.space().select(x), tgt.space().select(y), v);
  out.overlap = std::abs(inner(tgt, apply(out.isometry, src)));
  return out;
}

}  // namespace qredist
