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

#include "qredist/decouple.hpp"

#include <algorithm>
#include <cmath>

namespace qredist {

IsometryMap reshape_split(const SystemLabel& c, std::size_t s_dim) {
  if (s_dim == 0 || c.dim % s_dim != 0)
    throw ValidationError("|S| = " + std::to_string(s_dim) + " does not divide |" + c.name +
                          "| = " + std::to_string(c.dim));
  const auto n = static_cast<Eigen::Index>(c.dim);
  return IsometryMap(Space{c}, Space{{"S", s_dim}, {"Bhat", c.dim / s_dim}},
                     Matrix::Identity(n, n));
}

namespace {

Labels environment(const DensityOperator& rho, const std::string& c) {
  return rho.space().complement({c});
}

Operator averaged_target(const DensityOperator& rho, const std::string& c, std::size_t b_hat) {
  const Labels e = environment(rho, c);
  const auto nb = static_cast<Eigen::Index>(b_hat);
  Matrix rho_e = Matrix::Ones(1, 1);
  Space target_space{{"Bhat", b_hat}};
  if (!e.empty()) {
    const Operator m = partial_trace(rho.op(), e);
    rho_e = m.matrix;
    target_space = target_space.concat(m.space);
  }
  return Operator{target_space, linalg::kron(Matrix::Identity(nb, nb) / double(b_hat), rho_e)};
}

Operator bhat_e_marginal(const Operator& rho, const std::string& c, const Matrix& wu,
                         const IsometryMap& w) {
  const Operator out = conjugate(rho, wu, {c}, w.out);
  Labels keep{"Bhat"};
  for (const auto& n : rho.space.complement({c})) keep.push_back(n);
  return partial_trace(out, keep);
}

void check_split(const IsometryMap& w, const DensityOperator& rho, const std::string& c) {
  if (w.in.size() != 1 || w.in.dim() != rho.space().at(c).dim)
    throw ValidationError("split input does not match system " + c);
  if (!w.out.contains("S") || !w.out.contains("Bhat") || w.out.size() != 2)
    throw ValidationError("split output must be S (x) Bhat");
  if (w.isometry_residual() > tol::iso) throw ValidationError("split is not unitary");
}

}  // namespace

double decouple_residual(const DensityOperator& rho, const std::string& c, const Matrix& u,
                         const IsometryMap& w) {
  check_split(w, rho, c);
  const auto dc = static_cast<Eigen::Index>(rho.space().at(c).dim);
  if (u.rows() != dc || u.cols() != dc) throw ValidationError("unitary does not act on " + c);
  const Operator got = bhat_e_marginal(rho.op(), c, w.matrix * u, w);
  const Operator want = averaged_target(rho, c, w.out.at("Bhat").dim);
  return trace_distance(got, want);
}

void DecoupleSpec::validate() const {
  if (!(psi.space() == phi.space())) throw ValidationError("psi and phi live on different spaces");
  if (!psi.space().contains(c)) throw ValidationError("state has no system " + c);
  if (eps < 0) throw ValidationError("eps must be nonnegative");
  const double d = trace_distance(psi, phi);
  if (d > eps + tol::norm)
    throw ValidationError("||psi - phi||_1 = " + std::to_string(d) + " exceeds eps");
  check_split(split(), psi, c);
}

IsometryMap DecoupleSpec::split() const {
  IsometryMap r = reshape_split(psi.space().at(c), s_dim);
  if (w) {
    if (w->rows() != r.matrix.rows() || w->cols() != r.matrix.cols())
      throw ValidationError("explicit split has the wrong shape");
    r.matrix = *w;
  }
  return r;
}

DecoupleReport verify_decoupling(const DecoupleSpec& spec, std::size_t trials, const Rng& rng,
                                 DecoupleMode mode) {
  if (trials == 0) throw ValidationError("trials must be at least 1");
  spec.validate();
  const IsometryMap w = spec.split();
  const std::size_t dc = spec.psi.space().at(spec.c).dim;

  DecoupleReport rep;
  rep.mode = mode;
  rep.trials = trials;
  rep.seed = rng.seed();
  rep.c_dim = dc;
  rep.s_dim = spec.s_dim;
  rep.b_hat_dim = dc / spec.s_dim;
  const Labels e = environment(spec.phi, spec.c);
  rep.rank_e = e.empty() ? 1
                         : static_cast<std::size_t>(linalg::numerical_rank(
                               linalg::hermitian_eigenvalues(partial_trace(spec.phi.op(), e).matrix)));
  rep.two_norm_sq = schatten(spec.phi, Schatten::two_norm_sq);
  rep.appendix_bound =
      double(dc) * double(rep.rank_e) * rep.two_norm_sq / (double(spec.s_dim) * double(spec.s_dim));

  const double n = double(trials);
  if (mode == DecoupleMode::appendix) {
    double sum = 0, sum_sq = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      Rng r = rng.split(t);
      const double x = decouple_residual(spec.phi, spec.c, haar_unitary(dc, r), w);
      sum += x * x;
      sum_sq += x * x * x * x;
    }
    rep.lhs_estimate = sum / n;
    rep.lhs_stderr = trials > 1 ? std::sqrt(std::max(0.0, (sum_sq - sum * sum / n) / (n - 1)) / n) : 0;
    rep.bound = rep.appendix_bound;
    return rep;
  }

  // Robust form: the averaged marginal is accumulated in batches so the
  // residual of the full average gets a batch-means error estimate.
  const std::size_t batches = std::min<std::size_t>(10, trials);
  const Operator target = averaged_target(spec.psi, spec.c, rep.b_hat_dim);
  Matrix total = Matrix::Zero(target.matrix.rows(), target.matrix.cols());
  Space marginal_space;
  std::vector<double> batch_residual;
  double sum = 0, sum_sq = 0;
  std::size_t t = 0;
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t end = trials * (b + 1) / batches;
    Matrix acc = Matrix::Zero(target.matrix.rows(), target.matrix.cols());
    const std::size_t count = end - t;
    for (; t < end; ++t) {
      Rng r = rng.split(t);
      const Operator m = bhat_e_marginal(spec.psi.op(), spec.c, w.matrix * haar_unitary(dc, r), w);
      marginal_space = m.space;
      const double x = trace_distance(m, target);
      sum += x;
      sum_sq += x * x;
      acc += m.matrix;
    }
    total += acc;
    batch_residual.push_back(trace_distance(Operator{marginal_space, acc / double(count)}, target));
  }
  rep.lhs_estimate = trace_distance(Operator{marginal_space, total / n}, target);
  if (batches > 1) {
    double m = 0, v = 0;
    for (double x : batch_residual) m += x;
    m /= double(batches);
    for (double x : batch_residual) v += (x - m) * (x - m);
    rep.lhs_stderr = std::sqrt(v / double(batches - 1) / double(batches));
  }
  rep.mean_residual = sum / n;
  rep.mean_residual_stderr =
      trials > 1 ? std::sqrt(std::max(0.0, (sum_sq - sum * sum / n) / (n - 1)) / n) : 0;
  rep.convexity_holds = rep.lhs_estimate <= rep.mean_residual + tol::ent;
  rep.bound = 2 * spec.eps + std::sqrt(rep.appendix_bound);
  return rep;
}

}  // namespace qredist
