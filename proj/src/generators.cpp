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

#include "qredist/generators.hpp"

#include <cmath>
#include <sstream>

namespace qredist::gen {

namespace {

std::string qname(std::size_t i) { return "q" + std::to_string(i); }

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

std::size_t parse_size(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    throw ValidationError("bad " + what + " '" + s + "'");
  }
  if (pos != s.size() || s.empty() || s[0] == '-') throw ValidationError("bad " + what + " '" + s + "'");
  return std::size_t(v);
}

Space qubits(std::size_t n) {
  std::vector<SystemLabel> sys;
  for (std::size_t i = 0; i < n; ++i) sys.push_back({qname(i), 2});
  return Space(sys);
}

}  // namespace

PureState bell() { return maxent(2); }

PureState ghz(std::size_t n) {
  if (n < 1) throw ValidationError("ghz needs at least one qubit");
  const Space s = qubits(n);
  Vector v = Vector::Zero(Eigen::Index(s.dim()));
  v(0) = v(v.size() - 1) = 1 / std::sqrt(2.0);
  return PureState(s, v);
}

PureState maxent(std::size_t d) {
  if (d < 1) throw ValidationError("maxent needs a positive dimension");
  return max_entangled({qname(0), d}, {qname(1), d});
}

PureState product(const std::vector<PureState>& factors) {
  if (factors.empty()) throw ValidationError("product needs at least one factor");
  std::size_t next = 0;
  Ket out;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    Ket k = factors[f];
    // Two passes so that a factor already using q-names cannot collide.
    for (const auto& name : k.space().names()) k = rename(k, name, "\x01" + name);
    for (const auto& name : k.space().names()) k = rename(k, name, qname(next++));
    out = f == 0 ? k : tensor(out, k);
  }
  return PureState(out);
}

PureState random(const std::vector<SystemLabel>& systems, Rng& rng) {
  if (systems.empty()) throw ValidationError("random state needs dimensions");
  return random_pure_state(Space(systems), rng);
}

std::vector<SystemLabel> parse_dims(const std::string& text) {
  std::vector<SystemLabel> out;
  if (trim(text).empty()) return out;
  const auto items = split(text, ',');
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string item = trim(items[i]);
    const auto eq = item.find('=');
    SystemLabel s;
    if (eq == std::string::npos) {
      s = {qname(i), parse_size(item, "dimension")};
    } else {
      s = {trim(item.substr(0, eq)), parse_size(trim(item.substr(eq + 1)), "dimension")};
      if (s.name.empty()) throw ValidationError("empty system name in '" + text + "'");
    }
    if (s.dim < 1) throw ValidationError("dimensions must be at least 1");
    out.push_back(s);
  }
  return out;
}

bool needs_rng(const std::string& name) { return name == "random" || name == "product"; }

PureState generate_state(const std::string& name, const std::vector<SystemLabel>& dims, Rng* rng) {
  if (needs_rng(name) && !rng) throw ValidationError("generator '" + name + "' needs a seed");
  if (name == "bell") return bell();
  if (name == "ghz4") return ghz4();
  if (name == "ghz") return ghz(dims.empty() ? 4 : dims.size());
  if (name == "maxent") {
    if (dims.size() != 1) throw ValidationError("maxent takes one dimension");
    return maxent(dims[0].dim);
  }
  if (name == "random") return random(dims, *rng);
  if (name == "product") {
    if (dims.empty()) throw ValidationError("product needs dimensions");
    std::vector<PureState> factors;
    for (const auto& d : dims) factors.push_back(random_pure_state(Space{d}, *rng));
    PureState p = product(factors);
    // Keep caller-supplied names.
    Ket k = p;
    for (std::size_t i = 0; i < dims.size(); ++i) k = rename(k, qname(i), "\x01" + dims[i].name);
    for (std::size_t i = 0; i < dims.size(); ++i) k = rename(k, "\x01" + dims[i].name, dims[i].name);
    return PureState(k);
  }
  throw ValidationError("unknown generator '" + name + "'");
}

Partition parse_partition(const std::string& text, const Space& space) {
  Partition p;
  for (const auto& raw : split(text, ',')) {
    const std::string item = trim(raw);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("partition entry '" + item + "' needs '='");
    const std::string party = trim(item.substr(0, eq));
    Labels* group = party == "A" ? &p.A : party == "C" ? &p.C : party == "B" ? &p.B : party == "R" ? &p.R : nullptr;
    if (!group) throw ValidationError("unknown party '" + party + "' (use A, C, B, R)");
    for (const auto& tok_raw : split(item.substr(eq + 1), '+')) {
      const std::string tok = trim(tok_raw);
      if (tok.empty()) throw ValidationError("empty system in partition entry '" + item + "'");
      if (space.contains(tok)) {
        group->push_back(tok);
        continue;
      }
      const std::size_t idx = parse_size(tok, "system index");
      if (idx >= space.size()) throw ValidationError("system index " + tok + " out of range");
      group->push_back(space.systems()[idx].name);
    }
  }
  p.validate(space);
  return p;
}

}  // namespace qredist::gen
