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

#include "qredist/entropy.hpp"

#include <cmath>

namespace qredist {

double entropy_of_spectrum(const RealVector& spectrum) {
  double h = 0;
  for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
    const double p = spectrum(i);
    if (p < -tol::psd) throw ValidationError("spectrum has a negative eigenvalue");
    if (p > 0) h -= p * std::log2(p);
  }
  return h;
}

double entropy(const DensityOperator& rho) {
  return entropy_of_spectrum(linalg::hermitian_eigenvalues(rho.matrix()));
}

double entropy(const Ket& psi, const Labels& subset) {
  if (subset.empty() || subset.size() == psi.space().size()) {
    psi.space().complement(subset);  // validates the labels
    return 0;
  }
  return entropy_of_spectrum(marginal_spectrum(psi, subset));
}

double entropy(const DensityOperator& rho, const Labels& subset) {
  if (subset.empty()) return 0;
  return entropy_of_spectrum(
      linalg::hermitian_eigenvalues(partial_trace(rho.op(), subset).matrix));
}

namespace {

template <typename State>
std::map<Labels, double> all_subsets(const State& s) {
  const Labels names = s.space().names();
  const std::size_t m = names.size();
  std::map<Labels, double> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    Labels subset;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (std::size_t{1} << i)) subset.push_back(names[i]);
    const double h = entropy(s, subset);
    std::sort(subset.begin(), subset.end());
    out[subset] = h;
  }
  return out;
}

}  // namespace

EntropyReport::EntropyReport(const PureState& psi) : values_(all_subsets(psi)) {}
EntropyReport::EntropyReport(const DensityOperator& rho) : values_(all_subsets(rho)) {}

double EntropyReport::operator()(Labels subset) const {
  std::sort(subset.begin(), subset.end());
  const auto it = values_.find(subset);
  if (it == values_.end()) throw ValidationError("subset not in entropy report");
  return it->second;
}

void Partition::validate(const Space& space) const {
  detail::require_disjoint({&A, &C, &B, &R});
  std::size_t count = 0;
  for (const auto* g : {&A, &C, &B, &R})
    for (const auto& n : *g) {
      space.index_of(n);
      ++count;
    }
  if (count != space.size())
    throw ValidationError("partition does not cover every system of the state");
}

namespace {

template <typename State>
RateRegion region_of(const State& s, const Partition& p) {
  p.validate(s.space());
  RateRegion r;
  r.q_min = 0.5 * cond_mutual_info(s, p.R, p.C, p.B);
  r.sum_min = conditional_entropy(s, p.C, p.B);
  r.corner_q = r.q_min;
  r.corner_e = 0.5 * mutual_info(s, p.C, p.A) - 0.5 * mutual_info(s, p.C, p.B);
  return r;
}

}  // namespace

RateRegion rate_region(const PureState& psi, const Partition& p) { return region_of(psi, p); }

RateRegion rate_region(const DensityOperator& rho, const Partition& p) {
  const double purity = schatten(rho, Schatten::two_norm_sq);
  if (std::abs(purity - 1.0) > tol::norm)
    throw ValidationError("rate region needs a pure global state (purity " +
                          std::to_string(purity) + ")");
  return region_of(rho, p);
}

PotentialSet potentials(const PureState& psi, const Partition& p) {
  p.validate(psi.space());
  using detail::join;
  PotentialSet s;
  s.dynamic_initial = 0.5 * mutual_info(psi, p.R, join(p.A, p.C));
  s.dynamic_final = 0.5 * mutual_info(psi, p.R, p.A);
  s.static_initial = 0.5 * mutual_info(psi, join(p.A, p.C), p.B);
  s.static_final = 0.5 * mutual_info(psi, p.A, join(p.C, p.B));
  s.reverse_dynamic_initial = 0.5 * mutual_info(psi, p.R, join(p.C, p.B));
  s.reverse_dynamic_final = 0.5 * mutual_info(psi, p.R, p.B);
  s.reverse_static_initial = 0.5 * mutual_info(psi, join(p.C, p.B), p.A);
  s.reverse_static_final = 0.5 * mutual_info(psi, p.B, join(p.A, p.C));
  s.reference_entropy = entropy(psi, p.R);
  return s;
}

}  // namespace qredist
