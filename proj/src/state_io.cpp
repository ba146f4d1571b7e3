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

#include "qredist/state_io.hpp"

#include <fstream>

namespace qredist {

namespace {

nlohmann::json systems_json(const Space& space) {
  auto arr = nlohmann::json::array();
  for (const auto& s : space.systems()) arr.push_back({{"name", s.name}, {"dim", s.dim}});
  return arr;
}

Space systems_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ValidationError("state file: 'systems' must be an array");
  std::vector<SystemLabel> out;
  for (const auto& s : j) {
    if (!s.contains("name") || !s.contains("dim"))
      throw ValidationError("state file: each system needs 'name' and 'dim'");
    const auto dim = s.at("dim").get<long long>();
    if (dim < 1) throw ValidationError("state file: system dimensions must be positive");
    out.push_back({s.at("name").get<std::string>(), static_cast<std::size_t>(dim)});
  }
  return Space(std::move(out));
}

template <typename Derived>
nlohmann::json complex_array(const Eigen::MatrixBase<Derived>& v) {
  auto arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back({v(i).real(), v(i).imag()});
  return arr;
}

Vector complex_vector(const nlohmann::json& j) {
  if (!j.is_array()) throw ValidationError("state file: expected an array of [re, im] pairs");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& p = j[i];
    if (!p.is_array() || p.size() != 2)
      throw ValidationError("state file: entry " + std::to_string(i) + " is not [re, im]");
    v(static_cast<Eigen::Index>(i)) = Complex(p[0].get<double>(), p[1].get<double>());
  }
  return v;
}

}  // namespace

nlohmann::json to_json(const PureState& psi) {
  return {{"systems", systems_json(psi.space())}, {"amplitudes", complex_array(psi.amplitudes())}};
}

nlohmann::json to_json(const DensityOperator& rho) {
  using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const RowMajor m = rho.matrix();
  return {{"systems", systems_json(rho.space())},
          {"matrix", complex_array(Eigen::Map<const Vector>(m.data(), m.size()))}};
}

nlohmann::json to_json(const AnyState& state) {
  return std::visit([](const auto& s) { return to_json(s); }, state);
}

AnyState state_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || !j.contains("systems"))
      throw ValidationError("state file: missing 'systems'");
    Space space = systems_from_json(j.at("systems"));
    if (j.contains("amplitudes")) return PureState(space, complex_vector(j.at("amplitudes")));
    if (j.contains("matrix")) {
      const Vector flat = complex_vector(j.at("matrix"));
      const auto d = static_cast<Eigen::Index>(space.dim());
      if (flat.size() != d * d) throw ValidationError("state file: matrix has wrong size");
      using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
      Matrix m = Eigen::Map<const RowMajor>(flat.data(), d, d);
      return DensityOperator(space, std::move(m));
    }
    throw ValidationError("state file: needs 'amplitudes' or 'matrix'");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("state file: ") + e.what());
  }
}

AnyState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read state file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("state file '" + path + "': " + e.what());
  }
  return state_from_json(j);
}

void save_state(const std::string& path, const AnyState& state) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write state file '" + path + "'");
  out << to_json(state).dump() << '\n';
}

DensityOperator as_density(const AnyState& state) {
  if (const auto* psi = std::get_if<PureState>(&state)) return projector(*psi);
  return std::get<DensityOperator>(state);
}

}  // namespace qredist
