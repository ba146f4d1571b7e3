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

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "qredist/experiment.hpp"

namespace {

using qredist::ExperimentConfig;

struct Raw {
  std::string seed, n, delta, eps;
};

std::uint64_t parse_seed(const std::string& text, const char* origin) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &pos, 0);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (text.empty() || pos != text.size() || text[0] == '-')
    throw qredist::ValidationError(std::string("invalid seed in ") + origin + ": '" + text + "'");
  return v;
}

void add_common(CLI::App* sub, ExperimentConfig& cfg, Raw& raw) {
  sub->add_option("--seed", raw.seed, "64-bit seed (falls back to QREDIST_SEED)");
  sub->add_option("--out,--format", cfg.format, "json, csv or text")->capture_default_str();
  sub->add_option("-o,--output", cfg.output, "output file (written atomically); stdout if unset");
  sub->add_option("--threads", cfg.threads, "worker cap")->capture_default_str();
}

void add_state(CLI::App* sub, ExperimentConfig& cfg, bool partition) {
  sub->add_option("--state", cfg.state, "state file, gen:<bell|ghz|ghz4|maxent|product|random> or diag:p0,p1,...");
  sub->add_option("--dims", cfg.dims, "generator dimensions, e.g. C=16,E=2 or 2,2,2,2");
  if (partition) sub->add_option("--partition", cfg.partition, "A=..,C=..,B=..,R=.. by index or name, '+' joins");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qredist: state-redistribution simulation and bound audits"};
  app.set_version_flag("--version", qredist::version());
  app.require_subcommand(1);

  ExperimentConfig cfg;
  Raw raw;

  auto* rates = app.add_subcommand("rates", "rate region and correlation potentials");
  add_state(rates, cfg, true);

  auto* decouple = app.add_subcommand("decouple", "Monte-Carlo decoupling audit");
  add_state(decouple, cfg, false);
  decouple->add_option("--s-dim", cfg.s_dim, "|S|, must divide |C|")->capture_default_str();
  decouple->add_option("--trials", cfg.trials)->capture_default_str();
  decouple->add_option("--eps", raw.eps, "distance budget to the perturbed state");
  decouple->add_option("--perturbed", cfg.perturbed, "reference state phi");
  decouple->add_option("--c-system", cfg.c_system, "system that is split")->capture_default_str();
  decouple->add_option("--mode", cfg.mode, "appendix or robust")->capture_default_str();

  auto* pgm = app.add_subcommand("pgm", "pretty good measurement and coherification audits");
  pgm->add_option("--ensemble", cfg.ensemble, "JSON list of states, or {\"states\": [...]}");
  pgm->add_option("--trials", cfg.trials)->capture_default_str();
  pgm->add_option("--max-dim", cfg.max_dim)->capture_default_str();
  pgm->add_option("--max-kappa", cfg.max_kappa)->capture_default_str();
  pgm->add_option("--max-d", cfg.max_d)->capture_default_str();

  auto* protocol = app.add_subcommand("protocol", "one-shot or n-copy redistribution run");
  add_state(protocol, cfg, true);
  protocol->add_option("--bhat", cfg.bhat, "|Bhat|")->capture_default_str();
  protocol->add_option("--kappa", cfg.kappa)->capture_default_str();
  protocol->add_option("--eps", raw.eps);
  protocol->add_option("--perturbed", cfg.perturbed, "reference state used as phi and chi");
  protocol->add_option("--trials", cfg.trials, "number of seeded runs")->capture_default_str();
  protocol->add_option("--n", raw.n, "copies; above 1 runs the typical-subspace experiment");
  protocol->add_option("--delta", raw.delta);
  protocol->add_option("--q-rate", cfg.q_rate);
  protocol->add_option("--kappa-rate", cfg.kappa_rate);
  protocol->add_flag("--ghz", cfg.ghz, "also run the global GHZ check");

  auto* types = app.add_subcommand("types", "typical projector bounds");
  add_state(types, cfg, false);
  types->add_option("--n", raw.n)->required();
  types->add_option("--delta", raw.delta);

  auto* assemble = app.add_subcommand("assemble", "derive the corner rates in the resource calculus");
  add_state(assemble, cfg, true);

  auto* resources = app.add_subcommand("resources", "resource inequalities");
  add_state(resources, cfg, true);
  resources->add_option("--check", cfg.check, "inequality to parse and classify");
  resources->add_option("--derive", cfg.derive, "derivation to replay (corner)");

  auto* converse = app.add_subcommand("converse", "entanglement-fidelity converse audit");
  converse->add_option("--k-dim", cfg.k_dim)->capture_default_str();
  converse->add_option("--q-dim", cfg.q_dim)->capture_default_str();
  converse->add_option("--l-dim", cfg.l_dim)->capture_default_str();
  converse->add_option("--trials", cfg.trials)->capture_default_str();

  auto* ssa = app.add_subcommand("ssa", "strong subadditivity audit");
  add_state(ssa, cfg, true);
  ssa->add_option("--trials", cfg.trials)->capture_default_str();
  ssa->add_option("--n", raw.n);
  ssa->add_option("--delta", raw.delta);

  for (auto* sub : app.get_subcommands({})) add_common(sub, cfg, raw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (!raw.seed.empty()) {
      cfg.seed = parse_seed(raw.seed, "--seed");
    } else if (const char* env = std::getenv("QREDIST_SEED"); env && *env) {
      cfg.seed = parse_seed(env, "QREDIST_SEED");
    }
    if (!raw.n.empty()) cfg.n = std::stoull(raw.n);
    if (!raw.delta.empty()) cfg.delta = std::stod(raw.delta);
    if (!raw.eps.empty()) cfg.eps = std::stod(raw.eps);

    const qredist::RunRecord rec = qredist::run(cfg);
    const std::string text = qredist::render(rec, cfg.format);
    if (cfg.output.empty()) std::cout << text;
    else qredist::write_atomically(cfg.output, text);
    return rec.exit_code;
  } catch (const std::invalid_argument& e) {
    // ValidationError and numeric parse failures.
    std::cerr << "qredist: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "qredist: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qredist: error: " << e.what() << '\n';
    return 1;
  }
}
