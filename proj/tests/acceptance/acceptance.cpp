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

// Acceptance runner: one PASS/FAIL line per criterion. `--only N` runs a
// single criterion; the exit status is nonzero if any selected one fails.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "../oracle.hpp"
#include "qredist/assemble.hpp"
#include "qredist/converse.hpp"
#include "qredist/decouple.hpp"
#include "qredist/discern.hpp"
#include "qredist/experiment.hpp"
#include "qredist/generators.hpp"
#include "qredist/protocol.hpp"
#include "qredist/typical.hpp"

using namespace qredist;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

PureState random_acbr(Rng& rng, std::size_t a, std::size_t c, std::size_t b, std::size_t r) {
  return random_pure_state(Space{{"A", a}, {"C", c}, {"B", b}, {"R", r}}, rng);
}

// Oracle conditional mutual information I(x;y|z) on positions of a pure state.
double oracle_cmi(const PureState& psi, std::size_t x, std::size_t y, std::size_t z) {
  const oracle::Matrix rho = psi.amplitudes() * psi.amplitudes().adjoint();
  std::vector<std::size_t> dims;
  for (const auto& s : psi.space().systems()) dims.push_back(s.dim);
  auto h = [&](std::vector<std::size_t> keep) { return oracle::entropy(oracle::reduce(rho, dims, keep)); };
  return h({x, z}) + h({y, z}) - h({x, y, z}) - h({z});
}

// 1. Strong subadditivity and pure-state duality on random 4-qubit states.
Outcome ssa() {
  const Rng master(20260101);
  const Partition p{{"A"}, {"C"}, {"B"}, {"R"}};
  double min_cmi = 1e300, max_gap = 0, max_oracle_gap = 0;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    Rng rng = master.split(t);
    const PureState psi = random_acbr(rng, 2, 2, 2, 2);
    const double b = cond_mutual_info(psi, p.C, p.R, p.B);
    const double a = cond_mutual_info(psi, p.C, p.R, p.A);
    min_cmi = std::min(min_cmi, b);
    max_gap = std::max(max_gap, std::abs(a - b));
    if (t < 100) max_oracle_gap = std::max(max_oracle_gap, std::abs(b - oracle_cmi(psi, 1, 3, 2)));
  }
  return {min_cmi >= -1e-9 && max_gap <= 1e-9 && max_oracle_gap <= 1e-9,
          fmt("min I(C;R|B) = %.3e (>= -1e-9), max |I(C;R|A) - I(C;R|B)| = %.3e (<= 1e-9), "
              "oracle gap %.1e over 100 states",
              min_cmi, max_gap, max_oracle_gap)};
}

// 2. Analytic corners of the rate region.
Outcome corners() {
  const PureState bell = gen::bell();
  struct Fixture {
    std::string name;
    PureState psi;
    Partition p;
    double q, e;
  };
  const std::vector<Fixture> fixtures = {
      {"Bell_CR", bell, {{}, {"q0"}, {}, {"q1"}}, 1, 0},
      {"Bell_CA", bell, {{"q1"}, {"q0"}, {}, {}}, 0, 1},
      {"Bell_CB", bell, {{}, {"q0"}, {"q1"}, {}}, 0, -1},
      {"GHZ4", gen::ghz4(), {{"q0"}, {"q1"}, {"q2"}, {"q3"}}, 0, 0},
  };
  bool ok = true;
  std::ostringstream os;
  for (const auto& f : fixtures) {
    const RateRegion r = rate_region(f.psi, f.p);
    const bool hit = std::abs(r.corner_q - f.q) <= 1e-9 && std::abs(r.corner_e - f.e) <= 1e-9;
    ok = ok && hit;
    os << f.name << fmt(" (%.12g, %.12g)%s ", r.corner_q, r.corner_e, hit ? "" : " MISS");
  }
  return {ok, os.str() + "(tol 1e-9)"};
}

// 3. Decoupling, mean squared residual against the unrooted bound.
Outcome decoupling() {
  const Rng master(31337);
  std::size_t runs = 0, violations = 0;
  double worst = -1e300;
  std::uint64_t stream = 0;
  for (std::size_t c : {8, 16}) {
    for (std::size_t s = 1; s <= c; ++s) {
      if (c % s) continue;
      for (std::size_t e = 1; e <= 4; ++e) {
        Rng rng = master.split(stream++);
        DecoupleSpec spec;
        spec.psi = projector(random_pure_state(Space{{"C", c}, {"E", e}}, rng));
        spec.phi = spec.psi;
        spec.s_dim = s;
        const DecoupleReport r = verify_decoupling(spec, 500, rng.split(1), DecoupleMode::appendix);
        ++runs;
        violations += r.violated();
        worst = std::max(worst, (r.lhs_estimate - 3 * r.lhs_stderr) / r.bound);
      }
    }
  }
  return {violations == 0,
          fmt("%zu runs (|C| in {8,16}, every |S| dividing |C|, |E| = 1..4), 500 trials each, "
              "%zu violations at 3 sigma, max (mean - 3 se) / bound = %.3f",
              runs, violations, worst)};
}

// 4. Hayashi-Nagaoka operator inequality.
Outcome hayashi() {
  const HayashiSummary s = hayashi_random_audit(1000, 32, Rng(4242));
  return {s.min_slack >= -1e-9,
          fmt("1000 pairs, dims <= 32: min lambda_min = %.3e (>= -1e-9) at dim %zu", s.min_slack,
              s.argmin_dim)};
}

// 5. Coherification overlap bound.
Outcome coherification() {
  const CoherifySummary s = coherify_random_audit(200, 4, 8, Rng(5151));
  return {s.bound_violations == 0,
          fmt("200 instances (kappa <= 4, |D| <= 8): %zu violations of overlap >= 1 - 2(P + sqrt(1 - F)), "
              "min margin %.3e; per-k chain violations %zu",
              s.bound_violations, s.min_margin, s.chain_violations)};
}

// 6. One-shot protocol bound and the kappa = 1, trivial-B case.
Outcome one_shot() {
  struct Case {
    std::size_t a, c, b, r, bhat, kappa;
  };
  const std::vector<Case> cases = {{2, 4, 2, 2, 2, 1}, {2, 4, 2, 2, 2, 2}, {2, 4, 2, 2, 4, 2},
                                   {2, 8, 2, 2, 2, 2}, {2, 8, 2, 2, 4, 4}, {1, 8, 2, 8, 4, 2},
                                   {4, 2, 2, 4, 1, 1}, {2, 4, 1, 4, 2, 1}, {1, 16, 2, 4, 8, 2}};
  const Rng master(6060);
  std::size_t runs = 0, applicable = 0, failures = 0;
  double min_eta = 1e300;
  std::uint64_t stream = 0;
  for (const auto& cs : cases) {
    for (int rep = 0; rep < 3; ++rep) {
      Rng rng = master.split(stream++);
      const PureState psi = random_acbr(rng, cs.a, cs.c, cs.b, cs.r);
      const RedistOutcome o = run_one_shot(RedistInstance::exact(psi, cs.bhat, cs.kappa), rng.split(1));
      ++runs;
      min_eta = std::min(min_eta, o.eta.eta);
      if (o.bound_applies()) {
        ++applicable;
        failures += !o.bound_holds();
      }
    }
  }

  // kappa = 1, trivial B: overlap^2 and F_1 against an independent fidelity.
  double fqrs_gap = 0;
  for (std::uint64_t t = 0; t < 5; ++t) {
    Rng rng = master.split(1000 + t);
    const PureState psi = random_acbr(rng, 2, 4, 1, 4);
    const std::uint64_t seed = 7000 + t;
    const RedistOutcome out = run_one_shot(RedistInstance::exact(psi, 2, 1), Rng(seed));
    Rng r = Rng(seed).split(0);
    const Matrix u = haar_unitary(4, r);
    const Ket psi_1 = apply(reshape_split({"C", 4}, 2), apply(u, psi, {"C"}, Space{{"C", 4}}));
    const double f1 = fidelity(partial_trace(PureState(psi_1), {"Bhat", "B", "R"}),
                               tensor(maximally_mixed(Space{{"Bhat", 2}}), partial_trace(psi, {"B", "R"})));
    fqrs_gap = std::max({fqrs_gap, std::abs(out.decoupling_fidelity[0] - f1),
                         std::abs(out.achieved_mean_overlap * out.achieved_mean_overlap - f1)});
  }
  return {failures == 0 && fqrs_gap <= 1e-9,
          fmt("%zu runs, %zu with eta < 1/2 (min eta %.3g), %zu below 1 - 2 eta; "
              "FQRS |overlap^2 - F_1| max %.2e (<= 1e-9)",
              runs, applicable, min_eta, failures, fqrs_gap)};
}

// 7. Typical projector of diag(0.9, 0.1) at delta = 0.15.
Outcome types() {
  const double p0 = 0.9, p1 = 0.1, delta = 0.15;
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = p0;
  m(1, 1) = p1;
  const DensityOperator rho(Space(std::vector<SystemLabel>{SystemLabel{"x", 2}}), m);
  const double h = -p0 * std::log2(p0) - p1 * std::log2(p1);

  bool ok = true;
  double prev = -1;
  std::ostringstream os;
  for (std::size_t n : {4, 8, 12}) {
    const TypicalProjector proj(rho, n, delta);
    // Exhaustive binomial oracle over the number k of minority outcomes.
    double oracle_captured = 0, oracle_trace = 0;
    for (std::size_t k = 0; k <= n; ++k) {
      const double rate = -((n - k) * std::log2(p0) + k * std::log2(p1)) / double(n);
      if (std::abs(rate - h) > delta) continue;
      const double binom = std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
      oracle_trace += binom;
      oracle_captured += binom * std::pow(p0, double(n - k)) * std::pow(p1, double(k));
    }
    const double lo = std::exp2(n * (h - delta)), hi = std::exp2(n * (h + delta));
    const double tr = double(proj.trace());
    const bool in_band = tr >= lo && tr <= hi;
    const bool matches = std::abs(proj.captured() - oracle_captured) <= 1e-12 && tr == oracle_trace;
    const bool monotone = proj.captured() >= prev;
    ok = ok && in_band && matches && monotone;
    os << fmt("n=%zu: Tr %g in [%.3f, %.3f] %s, captured %.5f (oracle gap %.1e)%s; ", n, tr, lo, hi,
              in_band ? "yes" : "NO", proj.captured(), std::abs(proj.captured() - oracle_captured),
              monotone ? "" : " DECREASES");
    prev = proj.captured();
  }
  return {ok, os.str()};
}

// 8. Entanglement-fidelity converse.
Outcome converse_audit() {
  bool ok = true;
  std::ostringstream os;
  const Rng master(8080);
  std::uint64_t stream = 0;
  for (auto [k, q] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 1}, {4, 2}, {4, 1}}) {
    const auto s = converse::random_audit(k, q, 500, master.split(stream++));
    const bool hit = s.max_excess <= 1e-9 && s.max_path_gap <= 1e-10;
    ok = ok && hit;
    os << fmt("(%zu,%zu): max F - |Q|/|K| = %.3g, path gap %.1e%s; ", k, q, s.max_excess, s.max_path_gap,
              hit ? "" : " FAIL");
  }
  return {ok, os.str() + "500 trials each"};
}

// 9. Mechanical corner derivation with exact fixtures and both degenerate orderings.
Outcome resource_replay() {
  using namespace resources;
  auto values = [](Rational icrb, Rational ica, Rational icb) {
    Valuation v;
    v.set_exact(kICRB, icrb);
    v.set_exact(kICA, ica);
    v.set_exact(kICB, icb);
    return v;
  };
  const std::vector<Rule> want_rules = {Rule::premise, Rule::axiom,  Rule::scale, Rule::add,
                                        Rule::compose, Rule::cancel, Rule::cancel};
  auto replays = [&](const CornerAssembly& c) {
    if (c.derivation.verify().has_value() || c.derivation.steps().size() != want_rules.size()) return false;
    for (std::size_t i = 0; i < want_rules.size(); ++i)
      if (c.derivation.step(i).rule != want_rules[i]) return false;
    return c.matches_corner();
  };

  bool ok = true;
  std::ostringstream os;
  for (bool symbolic : {false, true}) {
    const char* mode = symbolic ? "symbolic" : "exact";
    // Generic: both rates positive, no sublinear terms.
    const CornerAssembly g = assemble_corner(values(Rational(3, 2), 1, Rational(1, 2)), symbolic);
    const bool g_ok = replays(g) && g.q_value == Rational(1, 2) && g.e_value == Rational(1, 4) &&
                      !g.sublinear_communication && !g.sublinear_entanglement;
    // I(C;B) >= I(C;A): entanglement only at a sublinear rate.
    const CornerAssembly e = assemble_corner(values(2, Rational(1, 2), 1), symbolic);
    const bool e_ok = replays(e) && e.sublinear_entanglement && !e.sublinear_communication &&
                      e.e_value == Rational(-1, 4);
    // I(C;R|B) = 0: communication only at a sublinear rate.
    const CornerAssembly s = assemble_corner(values(1, 2, 1), symbolic);
    const bool s_ok = replays(s) && s.sublinear_communication && !s.sublinear_entanglement &&
                      sgn(s.q_value) == 0 && s.e_value == Rational(1, 2);
    ok = ok && g_ok && e_ok && s_ok;
    os << fmt("%s: generic %s, I(C;B)>=I(C;A) -> o[qq] %s, I(C;R|B)=0 -> o[q->q] %s; ", mode,
              g_ok ? "ok" : "FAIL", e_ok ? "ok" : "FAIL", s_ok ? "ok" : "FAIL");
  }
  return {ok, os.str()};
}

// 10. Determinism of every stochastic subcommand.
Outcome determinism() {
  std::vector<ExperimentConfig> configs;
  auto add = [&](std::string sc, auto&& tweak) {
    ExperimentConfig c;
    c.subcommand = std::move(sc);
    c.seed = 99;
    tweak(c);
    configs.push_back(c);
  };
  add("decouple", [](auto& c) { c.state = "gen:random"; c.dims = "C=8,E=2"; c.s_dim = 2; c.trials = 50; });
  add("pgm", [](auto& c) { c.trials = 20; });
  add("protocol", [](auto& c) { c.state = "gen:random"; c.dims = "A=2,C=4,B=2,R=2"; c.bhat = 2; c.kappa = 2; c.trials = 2; c.ghz = true; });
  add("converse", [](auto& c) { c.k_dim = 4; c.q_dim = 2; c.trials = 30; });
  add("ssa", [](auto& c) { c.trials = 50; });
  add("rates", [](auto& c) { c.state = "gen:product"; c.dims = "2,2,2,2"; });
  add("assemble", [](auto& c) { c.state = "gen:random"; c.dims = "2,2,2,2"; });

  std::size_t identical = 0;
  for (const auto& c : configs) {
    auto a = run(c).to_json(), b = run(c).to_json();
    a.erase("wall_clock_seconds");
    b.erase("wall_clock_seconds");
    identical += a.dump() == b.dump();
  }
  return {identical == configs.size(),
          fmt("%zu/%zu stochastic configurations byte-identical on re-run (excluding wall clock)", identical,
              configs.size())};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qredist acceptance criteria"};
  std::vector<int> only;
  app.add_option("--only", only, "criterion numbers to run (default: all)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "strong subadditivity", 10, ssa},
      {2, "rate-region corners", 1, corners},
      {3, "decoupling", 120, decoupling},
      {4, "Hayashi-Nagaoka", 60, hayashi},
      {5, "coherification", 60, coherification},
      {6, "one-shot protocol", 300, one_shot},
      {7, "method of types", 10, types},
      {8, "entanglement-fidelity converse", 120, converse_audit},
      {9, "resource-calculus replay", 1, resource_replay},
      {10, "determinism", 60, determinism},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = secs <= c.budget_seconds;
    const bool pass = o.pass && in_budget;
    failed += !pass;
    std::cout << "criterion " << c.id << " " << (pass ? "PASS" : "FAIL") << " [" << c.title << "] "
              << o.detail << fmt(" (%.2f s, budget %g s%s)", secs, c.budget_seconds, in_budget ? "" : ", OVER")
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
