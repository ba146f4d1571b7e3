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

// Brute-force reference implementations used to cross-check the library.
// They work on explicit digit expansions of flat indices and never call into
// qredist beyond the plain data types.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline std::vector<std::size_t> digits(std::size_t flat, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> d(dims.size());
  for (std::size_t i = dims.size(); i-- > 0;) {
    d[i] = flat % dims[i];
    flat /= dims[i];
  }
  return d;
}

inline std::size_t flat(const std::vector<std::size_t>& d, const std::vector<std::size_t>& dims) {
  std::size_t f = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) f = f * dims[i] + d[i];
  return f;
}

inline std::size_t product(const std::vector<std::size_t>& dims) {
  std::size_t p = 1;
  for (auto d : dims) p *= d;
  return p;
}

/// Reduced operator on positions `keep` (in the given order) of |psi><psi|.
inline Matrix reduce(const Matrix& rho, const std::vector<std::size_t>& dims,
                     const std::vector<std::size_t>& keep) {
  std::vector<std::size_t> kd;
  for (auto k : keep) kd.push_back(dims[k]);
  const std::size_t n = product(dims), m = product(kd);
  Matrix out = Matrix::Zero(m, m);
  for (std::size_t i = 0; i < n; ++i) {
    const auto di = digits(i, dims);
    for (std::size_t j = 0; j < n; ++j) {
      const auto dj = digits(j, dims);
      bool traced_equal = true;
      for (std::size_t s = 0; s < dims.size() && traced_equal; ++s) {
        bool kept = false;
        for (auto k : keep) kept |= (k == s);
        if (!kept && di[s] != dj[s]) traced_equal = false;
      }
      if (!traced_equal) continue;
      std::vector<std::size_t> ri, rj;
      for (auto k : keep) {
        ri.push_back(di[k]);
        rj.push_back(dj[k]);
      }
      out(flat(ri, kd), flat(rj, kd)) += rho(i, j);
    }
  }
  return out;
}

inline double entropy(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  double h = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()(i);
    if (p > 1e-15) h -= p * std::log2(p);
  }
  return h;
}

inline Matrix sqrtm(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

inline double fidelity(const Matrix& a, const Matrix& b) {
  Eigen::JacobiSVD<Matrix> svd(sqrtm(a) * sqrtm(b));
  const double t = svd.singularValues().sum();
  return t * t;
}

inline double trace_norm(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  return es.eigenvalues().cwiseAbs().sum();
}

}  // namespace oracle
