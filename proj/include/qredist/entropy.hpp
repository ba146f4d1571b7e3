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

#include <algorithm>
#include <map>
#include <set>

#include "qredist/qcore.hpp"

namespace qredist {

/// -sum p log2 p over the clamped spectrum, with 0 log 0 = 0.
double entropy_of_spectrum(const RealVector& spectrum);

double entropy(const DensityOperator& rho);
/// Entropy of the marginal on `subset`; the empty subset has entropy 0.
double entropy(const Ket& psi, const Labels& subset);
double entropy(const DensityOperator& rho, const Labels& subset);

namespace detail {
inline Labels join(const Labels& a, const Labels& b) {
  Labels out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}
inline void require_disjoint(std::initializer_list<const Labels*> sets) {
  std::set<std::string> seen;
  for (const auto* s : sets)
    for (const auto& n : *s)
      if (!seen.insert(n).second)
        throw ValidationError("label '" + n + "' appears in more than one argument");
}
}  // namespace detail

/// H(A|B) = H(AB) - H(B).
template <typename State>
double conditional_entropy(const State& s, const Labels& a, const Labels& b) {
  detail::require_disjoint({&a, &b});
  return entropy(s, detail::join(a, b)) - entropy(s, b);
}

/// I(A;B) = H(A) + H(B) - H(AB).
template <typename State>
double mutual_info(const State& s, const Labels& a, const Labels& b) {
  detail::require_disjoint({&a, &b});
  return entropy(s, a) + entropy(s, b) - entropy(s, detail::join(a, b));
}

/// I(A;B|C) = H(AC) + H(BC) - H(ABC) - H(C).
template <typename State>
double cond_mutual_info(const State& s, const Labels& a, const Labels& b, const Labels& c) {
  detail::require_disjoint({&a, &b, &c});
  return entropy(s, detail::join(a, c)) + entropy(s, detail::join(b, c)) -
         entropy(s, detail::join(detail::join(a, b), c)) - entropy(s, c);
}

/// Entropies of every subset of the state's systems, keyed by the sorted
/// subset.
class EntropyReport {
 public:
  EntropyReport(const PureState& psi);
  EntropyReport(const DensityOperator& rho);

  double operator()(Labels subset) const;
  const std::map<Labels, double>& values() const { return values_; }

 private:
  std::map<Labels, double> values_;
};

/// Assignment of the state's systems to the four parties. Empty groups are
/// trivial (dimension-one) parties.
struct Partition {
  Labels A, C, B, R;

  /// Throws unless the four groups are disjoint and cover `space`.
  void validate(const Space& space) const;
};

struct RateRegion {
  double q_min = 0;     ///< (1/2) I(R;C|B)
  double sum_min = 0;   ///< H(C|B)
  double corner_q = 0;  ///< Q*
  double corner_e = 0;  ///< E* = (1/2) I(C;A) - (1/2) I(C;B)
};

RateRegion rate_region(const PureState& psi, const Partition& p);
/// Accepts a density operator only if it is pure within tol::norm.
RateRegion rate_region(const DensityOperator& rho, const Partition& p);

/// Correlation potentials of the transfer AC|B -> A|CB. The reverse set
/// describes the time-reversed transfer A|CB -> AC|B driven by Bob.
struct PotentialSet {
  double dynamic_initial = 0;  ///< (1/2) I(R;AC)
  double dynamic_final = 0;    ///< (1/2) I(R;A)
  double static_initial = 0;   ///< (1/2) I(AC;B)
  double static_final = 0;     ///< (1/2) I(A;CB)

  double reverse_dynamic_initial = 0;  ///< (1/2) I(R;CB)
  double reverse_dynamic_final = 0;    ///< (1/2) I(R;B)
  double reverse_static_initial = 0;   ///< (1/2) I(CB;A)
  double reverse_static_final = 0;     ///< (1/2) I(B;AC)

  double reference_entropy = 0;  ///< H(R)

  /// Correlation with R that leaves Alice: equals Q*.
  double qubit_cost() const { return dynamic_initial - dynamic_final; }
  /// Equals E*.
  double ebit_cost() const { return static_final - static_initial; }
  double reverse_qubit_cost() const { return reverse_dynamic_initial - reverse_dynamic_final; }
  double reverse_ebit_cost() const { return reverse_static_final - reverse_static_initial; }
};

PotentialSet potentials(const PureState& psi, const Partition& p);

}  // namespace qredist
