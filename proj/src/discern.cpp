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

#include "qredist/discern.hpp"

#include <cmath>
#include <limits>

namespace qredist {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

Matrix identity(const Space& s) {
  const auto n = static_cast<Eigen::Index>(s.dim());
  return Matrix::Identity(n, n);
}

}  // namespace

double PGM::completeness_residual() const {
  Matrix sum = failure;
  for (const auto& m : povm) sum += m;
  return (sum - identity(space)).cwiseAbs().maxCoeff();
}

PGM build_pgm_from_projectors(const Space& space, std::vector<Matrix> projectors) {
  require(!projectors.empty(), "a measurement needs at least one element");
  const auto n = static_cast<Eigen::Index>(space.dim());
  PGM pgm;
  pgm.space = space;
  pgm.lambda = Matrix::Zero(n, n);
  for (const auto& p : projectors) {
    require(p.rows() == n && p.cols() == n, "projector does not act on the measurement space");
    pgm.lambda += p;
  }
  const Matrix s = linalg::pinv_sqrt(pgm.lambda);
  for (const auto& p : projectors) pgm.povm.push_back(s * p * s);
  pgm.failure = identity(space) - linalg::support_projector(pgm.lambda);
  pgm.projectors = std::move(projectors);
  return pgm;
}

PGM build_pgm(const std::vector<DensityOperator>& states) {
  require(!states.empty(), "a measurement needs at least one state");
  std::vector<Matrix> projectors;
  for (const auto& rho : states) {
    require(rho.space() == states.front().space(), "ensemble states live on different spaces");
    projectors.push_back(linalg::support_projector(rho.matrix()));
  }
  return build_pgm_from_projectors(states.front().space(), std::move(projectors));
}

double pgm_miss_prob(const PGM& pgm, std::size_t k, const Operator& rho) {
  require(k < pgm.size(), "measurement outcome " + std::to_string(k) + " out of range");
  require(rho.space == pgm.space, "test state does not live on the measurement space");
  return (rho.matrix.trace() - (pgm.povm[k] * rho.matrix).trace()).real();
}

double pgm_miss_prob(const PGM& pgm, std::size_t k, const DensityOperator& rho) {
  return pgm_miss_prob(pgm, k, rho.op());
}

double check_hayashi(const Matrix& pi, const Matrix& lambda) {
  require(pi.rows() == pi.cols() && lambda.rows() == pi.rows() && lambda.cols() == pi.cols(),
          "shape mismatch");
  require(linalg::hermiticity_residual(pi) <= tol::herm, "Pi is not Hermitian");
  require(linalg::hermiticity_residual(lambda) <= tol::herm, "Lambda is not Hermitian");
  const RealVector ep = linalg::hermitian_eigenvalues(pi);
  if (ep.size() > 0 && ep(0) < -tol::psd)
    throw ValidationError("hypothesis 0 <= Pi fails: eigenvalue " + std::to_string(ep(0)));
  if (ep.size() > 0 && ep(ep.size() - 1) > 1 + tol::psd)
    throw ValidationError("hypothesis Pi <= I fails: eigenvalue " + std::to_string(ep(ep.size() - 1)));
  const RealVector ed = linalg::hermitian_eigenvalues(Matrix(lambda - pi));
  if (ed.size() > 0 && ed(0) < -tol::psd)
    throw ValidationError("hypothesis Pi <= Lambda fails: eigenvalue " + std::to_string(ed(0)));

  const auto n = pi.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix s = linalg::pinv_sqrt(lambda);
  const Matrix rhs = 2 * (id - pi) + 4 * (lambda - pi);
  const Matrix lhs = id - s * pi * s;
  const Matrix slack = rhs - lhs;
  return linalg::hermitian_eigenvalues(Matrix((slack + slack.adjoint()) / 2))(0);
}

double CoherifierResult::bound() const {
  return 1 - 2 * (miss_prob + std::sqrt(std::max(0.0, 1 - fidelity)));
}

bool CoherifierResult::chain_holds() const {
  for (std::size_t k = 0; k < overlaps.size(); ++k) {
    const double o = overlaps[k];
    if (o < o * o - tol::ent) return false;
    if (o * o < hit_prob[k] * hit_prob[k] - distance[k] - tol::ent) return false;
  }
  return true;
}

CoherifierResult coherify(const PureState& psi, const Labels& d, const std::vector<Matrix>& unitaries,
                          const std::vector<Ket>& targets, const PGM& pgm, const std::string& k_name) {
  const std::size_t kappa = pgm.size();
  require(unitaries.size() == kappa && targets.size() == kappa,
          "coherify needs one unitary and one target per measurement outcome");
  const Space d_space = psi.space().select(d);
  require(d_space == pgm.space, "measurement does not act on the system D");
  require(!psi.space().contains(k_name), "register name " + k_name + " already in use");
  const auto nd = static_cast<Eigen::Index>(d_space.dim());
  const Space k_space{{k_name, kappa}};
  const Space out = d_space.concat(k_space);

  CoherifierResult res;
  std::vector<Matrix> blocks;  // U_k^dag sqrt(Lambda_k)
  for (std::size_t k = 0; k < kappa; ++k) {
    const Matrix& u = unitaries[k];
    require(u.rows() == nd && u.cols() == nd, "unitary does not act on D");
    const Ket& t = targets[k];
    require(t.space().size() == psi.space().size(), "target lives on a different space");
    blocks.push_back(u.adjoint() * linalg::psd_sqrt(pgm.povm[k]));

    const Ket psi_k = apply(u, psi, d, d_space);
    const Complex u_k = inner(psi, apply(blocks.back(), t, d, d_space));
    res.phases.push_back(std::abs(u_k) > 0 ? std::conj(u_k) / std::abs(u_k) : Complex(1));

    const Operator rho_k = partial_trace(psi_k, d);
    res.hit_prob.push_back((pgm.povm[k] * rho_k.matrix).trace().real());
    const Complex c = inner(psi_k, t);
    res.fidelity += std::norm(c);
    res.distance.push_back(trace_distance(psi_k, t));
  }

  // Row index of L is d * kappa + k: D most significant, K last.
  Matrix l = Matrix::Zero(nd * Eigen::Index(kappa), nd);
  for (std::size_t k = 0; k < kappa; ++k)
    for (Eigen::Index r = 0; r < nd; ++r)
      l.row(r * Eigen::Index(kappa) + Eigen::Index(k)) = res.phases[k] * blocks[k].row(r);
  res.isometry = IsometryMap(d_space, out, l);

  double sum = 0;
  for (std::size_t k = 0; k < kappa; ++k) {
    const Ket mapped = apply(res.isometry, targets[k]);
    const Complex o = inner(tensor(Ket(psi), Ket(basis_state(k_space, k))), mapped);
    res.overlaps.push_back(o.real());
    sum += o.real();
  }
  res.mean_overlap = sum / double(kappa);
  double hit = 0;
  for (double h : res.hit_prob) hit += h;
  res.miss_prob = 1 - hit / double(kappa);
  res.fidelity /= double(kappa);
  return res;
}

HayashiSummary hayashi_random_audit(std::size_t trials, std::size_t max_dim, const Rng& rng) {
  if (max_dim < 2) throw ValidationError("max_dim must be at least 2");
  HayashiSummary s;
  s.trials = trials;
  s.seed = rng.seed();
  s.max_dim = max_dim;
  s.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < trials; ++t) {
    Rng r = rng.split(t);
    const std::size_t dim = 2 + r.engine()() % (max_dim - 1);
    const std::size_t rank = 1 + r.engine()() % dim;
    const Matrix u = haar_unitary(dim, r).leftCols(Eigen::Index(rank));
    const Matrix pi = u * u.adjoint();
    const Matrix g = linalg::ginibre<double>(dim, 1 + r.engine()() % dim, r);
    const Matrix lambda = pi + g * g.adjoint() * r.uniform();
    const double slack = check_hayashi(pi, lambda);
    if (slack < s.min_slack) {
      s.min_slack = slack;
      s.argmin_dim = dim;
    }
  }
  if (trials == 0) s.min_slack = 0;
  return s;
}

CoherifySummary coherify_random_audit(std::size_t trials, std::size_t max_kappa, std::size_t max_d,
                                      const Rng& rng) {
  if (max_kappa < 1 || max_d < 2) throw ValidationError("need max_kappa >= 1 and max_d >= 2");
  CoherifySummary s;
  s.trials = trials;
  s.seed = rng.seed();
  s.min_margin = trials ? std::numeric_limits<double>::infinity() : 0;
  s.mean_overlap_min = trials ? std::numeric_limits<double>::infinity() : 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng r = rng.split(t);
    const std::size_t kappa = 1 + r.engine()() % max_kappa;
    const std::size_t d = 2 + r.engine()() % (max_d - 1);
    const std::size_t e = 1 + r.engine()() % 2;
    const Space dspace{{"D", d}};
    const PureState psi = random_pure_state(Space{{"D", d}, {"E", e}}, r);
    std::vector<Matrix> us;
    std::vector<Ket> targets;
    std::vector<DensityOperator> states;
    for (std::size_t k = 0; k < kappa; ++k) {
      us.push_back(haar_unitary(d, r));
      const PureState psi_k(apply(us.back(), psi, {"D"}, dspace));
      const PureState near = perturb(psi_k, 0.3 * r.uniform(), r);
      targets.emplace_back(near.space(), near.amplitudes() * std::sqrt(0.9 + 0.1 * r.uniform()));
      states.push_back(partial_trace(psi_k, {"D"}));
    }
    const CoherifierResult res = coherify(psi, {"D"}, us, targets, build_pgm(states));
    if (!res.bound_holds()) ++s.bound_violations;
    if (!res.chain_holds()) ++s.chain_violations;
    s.min_margin = std::min(s.min_margin, res.mean_overlap - res.bound());
    s.mean_overlap_min = std::min(s.mean_overlap_min, res.mean_overlap);
  }
  return s;
}

}  // namespace qredist
