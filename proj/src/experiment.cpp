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

#include "qredist/experiment.hpp"

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "qredist/assemble.hpp"
#include "qredist/converse.hpp"
#include "qredist/decouple.hpp"
#include "qredist/discern.hpp"
#include "qredist/generators.hpp"
#include "qredist/iid.hpp"
#include "qredist/protocol.hpp"
#include "qredist/typical.hpp"

#ifndef QREDIST_VERSION
#define QREDIST_VERSION "unknown"
#endif

namespace qredist {

using nlohmann::json;

namespace {

// Stream reserved for generated states so they do not share draws with trials.
constexpr std::uint64_t kStateStream = 0x5157415445ULL;
constexpr std::uint64_t kTrialStream = 0x545249414CULL;

const std::set<std::string> kSubcommands = {"rates",     "decouple",  "pgm",      "protocol", "types",
                                            "assemble",  "resources", "converse", "ssa"};

bool source_is_random(const std::string& source) {
  return source == "gen:random" || source == "gen:product";
}

json check_json(const Check& c) {
  return {{"bound", c.name}, {"measured", c.lhs}, {"limit", c.rhs}, {"holds", c.ok}};
}

json checks_json(const std::vector<Check>& checks) {
  json out = json::array();
  for (const auto& c : checks) out.push_back(check_json(c));
  return out;
}

bool all_hold(const std::vector<Check>& checks) {
  for (const auto& c : checks)
    if (!c.ok) return false;
  return true;
}

struct Payload {
  json result;
  bool violated = false;
};

Partition partition_for(const ExperimentConfig& cfg, const Space& space) {
  if (!cfg.partition.empty()) return gen::parse_partition(cfg.partition, space);
  if (space.contains("A") && space.contains("C") && space.contains("B") && space.contains("R") &&
      space.size() == 4)
    return Partition{{"A"}, {"C"}, {"B"}, {"R"}};
  if (space.size() == 4) return gen::parse_partition("A=0,C=1,B=2,R=3", space);
  throw ValidationError("--partition is required for a state with " + std::to_string(space.size()) +
                        " systems");
}

AnyState source_state(const ExperimentConfig& cfg, const Rng& rng, const std::string& source) {
  if (source.empty()) throw ValidationError("--state is required for '" + cfg.subcommand + "'");
  Rng state_rng = rng.split(kStateStream);
  return load_source(source, cfg.dims, &state_rng);
}

const Space& space_of(const AnyState& s) {
  return std::visit([](const auto& x) -> const Space& { return x.space(); }, s);
}

json rate_region_json(const RateRegion& r) {
  return {{"q_min", r.q_min},
          {"sum_min", r.sum_min},
          {"corner", {{"q", r.corner_q}, {"e", r.corner_e}}}};
}

// rates ---------------------------------------------------------------------

Payload run_rates(const ExperimentConfig& cfg, const Rng& rng) {
  const AnyState state = source_state(cfg, rng, cfg.state);
  const Partition p = partition_for(cfg, space_of(state));
  const PureState psi = require_pure(state);
  const RateRegion r = rate_region(psi, p);
  const PotentialSet pot = potentials(psi, p);
  json out = rate_region_json(r);
  out["potentials"] = {{"dynamic_initial", pot.dynamic_initial},
                       {"dynamic_final", pot.dynamic_final},
                       {"static_initial", pot.static_initial},
                       {"static_final", pot.static_final},
                       {"reverse_dynamic_initial", pot.reverse_dynamic_initial},
                       {"reverse_dynamic_final", pot.reverse_dynamic_final},
                       {"reverse_static_initial", pot.reverse_static_initial},
                       {"reverse_static_final", pot.reverse_static_final},
                       {"reference_entropy", pot.reference_entropy},
                       {"qubit_cost", pot.qubit_cost()},
                       {"ebit_cost", pot.ebit_cost()},
                       {"reverse_qubit_cost", pot.reverse_qubit_cost()},
                       {"reverse_ebit_cost", pot.reverse_ebit_cost()}};
  return {out, false};
}

// decouple ------------------------------------------------------------------

Payload run_decouple(const ExperimentConfig& cfg, const Rng& rng) {
  DecoupleSpec spec;
  spec.psi = as_density(source_state(cfg, rng, cfg.state));
  spec.phi = cfg.perturbed.empty() ? spec.psi : as_density(load_source(cfg.perturbed, cfg.dims, nullptr));
  spec.c = cfg.c_system;
  spec.s_dim = cfg.s_dim;
  if (!spec.psi.space().contains(spec.c))
    throw ValidationError("state has no system '" + spec.c + "' (set --c-system)");
  spec.eps = cfg.eps ? *cfg.eps : cfg.perturbed.empty() ? 0.0 : trace_distance(spec.psi, spec.phi);
  spec.validate();

  DecoupleMode mode;
  if (cfg.mode == "appendix") mode = DecoupleMode::appendix;
  else if (cfg.mode == "robust") mode = DecoupleMode::robust;
  else throw ValidationError("--mode must be appendix or robust");

  const DecoupleReport r = verify_decoupling(spec, cfg.trials, rng.split(kTrialStream), mode);
  json out = {{"mode", cfg.mode},
              {"trials", r.trials},
              {"c_dim", r.c_dim},
              {"s_dim", r.s_dim},
              {"b_hat_dim", r.b_hat_dim},
              {"eps", spec.eps},
              {"lhs_estimate", r.lhs_estimate},
              {"lhs_stderr", r.lhs_stderr},
              {"bound", r.bound},
              {"bound_name", mode == DecoupleMode::appendix ? "appendix_bound" : "lemma3_bound"},
              {"appendix_bound", r.appendix_bound},
              {"rank_e", r.rank_e},
              {"two_norm_sq", r.two_norm_sq},
              {"violated", r.violated()}};
  if (mode == DecoupleMode::robust) {
    out["lemma3_bound"] = r.bound;
    out["mean_residual"] = r.mean_residual;
    out["mean_residual_stderr"] = r.mean_residual_stderr;
    out["convexity_holds"] = r.convexity_holds;
  }
  return {out, r.violated() || !r.convexity_holds};
}

// pgm -----------------------------------------------------------------------

std::vector<DensityOperator> load_ensemble(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read ensemble '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("ensemble '" + path + "': " + e.what());
  }
  const json& list = j.is_object() && j.contains("states") ? j.at("states") : j;
  if (!list.is_array() || list.empty()) throw ValidationError("ensemble must be a nonempty list of states");
  std::vector<DensityOperator> out;
  for (const auto& s : list) out.push_back(as_density(state_from_json(s)));
  return out;
}

Payload run_pgm(const ExperimentConfig& cfg, const Rng& rng) {
  json out;
  bool violated = false;
  if (!cfg.ensemble.empty()) {
    const auto states = load_ensemble(cfg.ensemble);
    const PGM pgm = build_pgm(states);
    json miss = json::array(), slack = json::array();
    double min_slack = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < states.size(); ++k) {
      miss.push_back(pgm_miss_prob(pgm, k, states[k]));
      const double s = check_hayashi(pgm.projectors[k], pgm.lambda);
      slack.push_back(s);
      min_slack = std::min(min_slack, s);
    }
    out["ensemble"] = {{"size", states.size()},
                       {"miss_prob", miss},
                       {"hayashi_slack", slack},
                       {"min_hayashi_slack", min_slack},
                       {"completeness_residual", pgm.completeness_residual()}};
    violated = violated || min_slack < -tol::ent;
  }
  const HayashiSummary h = hayashi_random_audit(cfg.trials, cfg.max_dim, rng.split(kTrialStream));
  const CoherifySummary c = coherify_random_audit(cfg.trials, cfg.max_kappa, cfg.max_d, rng.split(kTrialStream + 1));
  out["hayashi_nagaoka"] = {{"trials", h.trials},
                            {"max_dim", h.max_dim},
                            {"min_slack", h.min_slack},
                            {"argmin_dim", h.argmin_dim},
                            {"holds", h.min_slack >= -tol::ent}};
  out["coherification"] = {{"trials", c.trials},
                           {"max_kappa", cfg.max_kappa},
                           {"max_d", cfg.max_d},
                           {"lemma5_bound", "1 - 2 (P + sqrt(1 - F))"},
                           {"bound_violations", c.bound_violations},
                           {"chain_violations", c.chain_violations},
                           {"min_margin", c.min_margin},
                           {"mean_overlap_min", c.mean_overlap_min}};
  violated = violated || h.min_slack < -tol::ent || c.bound_violations > 0 || c.chain_violations > 0;
  return {out, violated};
}

// protocol ------------------------------------------------------------------

json eta_json(const EtaBreakdown& e) {
  return {{"eta_eq", e.eta},
          {"eps_term", e.eps_term},
          {"decoupling_term", e.decoupling_term},
          {"discrimination_term", e.discrimination_term},
          {"decoupling_ratio", e.decoupling_ratio},
          {"rank_phi_br", e.rank_phi_br},
          {"two_norm_sq_phi_cbr", e.two_norm_sq_phi_cbr},
          {"rank_chi_cb", e.rank_chi_cb},
          {"inf_norm_chi_b", e.inf_norm_chi_b},
          {"lemma3_bound", e.lemma3_bound},
          {"ef_bound", e.ef_bound},
          {"chain_eta", e.chain_eta}};
}

json outcome_json(const RedistOutcome& o) {
  json out = {{"c_dim", o.c_dim},
              {"s_dim", o.s_dim},
              {"b_hat_dim", o.b_hat_dim},
              {"kappa", o.kappa},
              {"eps", o.eps},
              {"achieved_mean_overlap", o.achieved_mean_overlap},
              {"coherifier_mean_overlap", o.coherifier_mean_overlap},
              {"one_shot_bound", o.one_shot_bound()},
              {"bound_applies", o.bound_applies()},
              {"bound_holds", o.bound_holds()},
              {"f_ave", o.f_ave},
              {"p_ave", o.p_ave},
              {"p_lemma", o.p_lemma},
              {"d_ave", o.d_ave},
              {"max_encoder_residual", o.max_encoder_residual},
              {"decoupling_fidelity", o.decoupling_fidelity},
              {"miss_prob", o.miss_prob},
              {"overlaps", o.overlaps},
              {"eta", eta_json(o.eta)},
              {"checks", checks_json(o.checks)}};
  if (o.ghz) {
    out["ghz"] = {{"ghz_overlap", o.ghz->ghz_overlap},
                  {"ghz_fidelity", o.ghz->ghz_fidelity},
                  {"global_distance", o.ghz->global_distance},
                  {"global_fidelity", o.ghz->global_fidelity},
                  {"omega_norm", o.ghz->omega_norm},
                  {"checks", checks_json(o.ghz->checks)}};
  }
  return out;
}

bool outcome_violated(const RedistOutcome& o) {
  return !o.bound_holds() || !all_hold(o.checks) || (o.ghz && !all_hold(o.ghz->checks));
}

Payload run_protocol(const ExperimentConfig& cfg, const Rng& rng) {
  const AnyState state = source_state(cfg, rng, cfg.state);
  const Partition p = partition_for(cfg, space_of(state));
  const PureState psi = require_pure(state);
  const std::size_t n = cfg.n.value_or(1);

  if (n > 1) {
    IidOptions opt;
    opt.n = n;
    opt.delta = cfg.delta.value_or(opt.delta);
    opt.q_rate = cfg.q_rate;
    opt.kappa_rate = cfg.kappa_rate;
    json runs = json::array();
    bool violated = false;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const IidReport r = run_iid_experiment(psi, p, opt, rng.split(kTrialStream + t));
      runs.push_back({{"run", t},
                      {"typical_c_dim", r.typical_c_dim},
                      {"s_dim", r.s_dim},
                      {"b_hat_dim", r.b_hat_dim},
                      {"kappa", r.kappa},
                      {"abort_prob", r.abort_prob},
                      {"eps_compressed", r.eps_compressed},
                      {"eps_phi", r.eps_phi},
                      {"eps_chi", r.eps_chi},
                      {"eps", r.eps},
                      {"abort_within_eps", r.abort_within_eps()},
                      {"q_rate_realized", r.q_rate_realized},
                      {"e_in", r.e_in},
                      {"e_in_reference", r.e_in_reference},
                      {"final_fidelity", r.final_fidelity},
                      {"fidelity_bound", r.fidelity_bound},
                      {"one_shot", outcome_json(r.one_shot)}});
      violated = violated || outcome_violated(r.one_shot) || !r.abort_within_eps() ||
                 r.final_fidelity < r.fidelity_bound - tol::ent;
    }
    return {{{"n", n}, {"delta", opt.delta}, {"runs", runs}}, violated};
  }

  const PureState canon = canonicalize(psi, p);
  RedistInstance inst = RedistInstance::exact(canon, cfg.bhat, cfg.kappa);
  if (!cfg.perturbed.empty()) {
    const PureState ref = canonicalize(require_pure(load_source(cfg.perturbed, cfg.dims, nullptr)), p);
    inst.phi = inst.chi = ref;
    inst.eps = cfg.eps ? *cfg.eps : trace_distance(canon, ref);
  } else if (cfg.eps) {
    inst.eps = *cfg.eps;
  }
  inst.ghz_check = cfg.ghz;
  inst.validate();

  json runs = json::array();
  bool violated = false;
  std::size_t applicable = 0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const RedistOutcome o = run_one_shot(inst, rng.split(kTrialStream + t));
    json j = outcome_json(o);
    j["run"] = t;
    runs.push_back(j);
    applicable += o.bound_applies();
    violated = violated || outcome_violated(o);
  }
  return {{{"n", 1}, {"runs", runs}, {"bound_applicable_runs", applicable}}, violated};
}

// types ---------------------------------------------------------------------

Payload run_types(const ExperimentConfig& cfg, const Rng& rng) {
  const DensityOperator rho = as_density(source_state(cfg, rng, cfg.state));
  if (!cfg.n) throw ValidationError("--n is required for 'types'");
  const TypicalityAudit a = typicality_bounds_audit(rho, *cfg.n, cfg.delta.value_or(0.1));
  json out = {{"n", a.n},
              {"delta", a.delta},
              {"entropy", a.entropy},
              {"captured", a.captured},
              {"trace", a.trace},
              {"rank", a.rank},
              {"two_norm_sq", a.two_norm_sq},
              {"inf_norm", a.inf_norm},
              {"trace_lower_bound", a.lower},
              {"trace_upper_bound", a.upper},
              {"trace_ok", a.trace_ok},
              {"rank_ok", a.rank_ok},
              {"two_norm_ok", a.two_norm_ok},
              {"inf_norm_ok", a.inf_norm_ok}};
  return {out, !a.all_ok()};
}

// assemble / resources -------------------------------------------------------

json assembly_json(const resources::CornerAssembly& ca, const RateRegion& r) {
  using resources::to_double;
  const double q = to_double(ca.q_value), e = to_double(ca.e_value);
  const std::vector<Check> checks = {
      make_check("derived_corner_q_vs_rate_region", std::abs(q - r.corner_q), 0),
      make_check("derived_corner_e_vs_rate_region", std::abs(e - r.corner_e), 0),
  };
  return {{"q", ca.q.str()},
          {"e", ca.e.str()},
          {"q_expected", ca.q_expected.str()},
          {"e_expected", ca.e_expected.str()},
          {"q_value", q},
          {"e_value", e},
          {"matches_corner", ca.matches_corner()},
          {"sublinear_communication", ca.sublinear_communication},
          {"sublinear_entanglement", ca.sublinear_entanglement},
          {"rate_region", rate_region_json(r)},
          {"checks", checks_json(checks)},
          {"trace", ca.derivation.trace()}};
}

Payload assemble_payload(const ExperimentConfig& cfg, const Rng& rng) {
  const AnyState state = source_state(cfg, rng, cfg.state);
  const Partition p = partition_for(cfg, space_of(state));
  const PureState psi = require_pure(state);
  const auto ca = resources::assemble_corner(resources::corner_atoms(psi, p));
  const json out = assembly_json(ca, rate_region(psi, p));
  bool ok = ca.matches_corner() && !ca.derivation.verify();
  for (const auto& c : out["checks"]) ok = ok && c["holds"].get<bool>();
  return {out, !ok};
}

Payload run_resources(const ExperimentConfig& cfg, const Rng& rng) {
  if (cfg.check.empty() == cfg.derive.empty())
    throw ValidationError("'resources' needs exactly one of --check or --derive");
  if (!cfg.derive.empty()) {
    if (cfg.derive != "corner") throw ValidationError("--derive supports only 'corner'");
    return assemble_payload(cfg, rng);
  }
  const resources::Inequality ineq = resources::parse_ri(cfg.check);
  const auto axiom = resources::axiom_name(ineq);
  return {{{"input", cfg.check},
           {"parsed", ineq.str()},
           {"normalized", ineq.normalized().str()},
           {"relation", ineq.relation == resources::Relation::finite ? "finite" : "asymptotic"},
           {"is_axiom", axiom.has_value()},
           {"axiom", axiom ? json(*axiom) : json(nullptr)}},
          false};
}

// converse / ssa --------------------------------------------------------------

Payload run_converse(const ExperimentConfig& cfg, const Rng& rng) {
  const auto s = converse::random_audit(cfg.k_dim, cfg.q_dim, cfg.trials, rng.split(kTrialStream), cfg.l_dim);
  return {{{"k_dim", s.k_dim},
           {"q_dim", s.q_dim},
           {"l_dim", cfg.l_dim},
           {"trials", s.trials},
           {"fidelity_bound", s.bound},
           {"max_fidelity", s.max_fidelity},
           {"max_excess", s.max_excess},
           {"max_path_gap", s.max_path_gap},
           {"max_trace_sum_ratio", s.max_trace_sum_ratio},
           {"max_block_residual", s.max_block_residual},
           {"violations", s.violations}},
          s.violations > 0};
}

std::vector<std::size_t> plain_dims(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& s : gen::parse_dims(text.empty() ? "2,2,2,2" : text)) out.push_back(s.dim);
  return out;
}

Payload run_ssa(const ExperimentConfig& cfg, const Rng& rng) {
  if (!cfg.state.empty()) {
    const AnyState state = source_state(cfg, rng, cfg.state);
    const Partition p = partition_for(cfg, space_of(state));
    const auto r = converse::ssa_operational_audit(require_pure(state), p, cfg.n.value_or(16),
                                                   cfg.delta.value_or(0.01));
    return {{{"i_cr_given_b", r.i_cr_given_b},
             {"i_cr_given_a", r.i_cr_given_a},
             {"duality_gap", r.duality_gap},
             {"forwardable_gap", r.forwardable_gap},
             {"n", r.n},
             {"delta", r.delta},
             {"log2_q", r.log2_q},
             {"log2_k", r.log2_k},
             {"fidelity_bound", r.fidelity_bound},
             {"exponent", r.exponent},
             {"saturated", r.saturated},
             {"checks", checks_json(r.checks)}},
            !all_hold(r.checks)};
  }
  const auto dims = plain_dims(cfg.dims);
  if (dims.size() != 4) throw ValidationError("ssa --dims takes four dimensions (A, C, B, R)");
  const auto s = converse::ssa_random_audit(dims, cfg.trials, rng.split(kTrialStream));
  return {{{"dims", dims},
           {"trials", s.trials},
           {"min_cmi", s.min_cmi},
           {"max_duality_gap", s.max_duality_gap},
           {"violations", s.violations}},
          s.violations > 0};
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void flatten_into(const json& j, const std::string& path, std::ostringstream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten_into(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten_into(j[i], path + "." + std::to_string(i), out);
  } else {
    std::string value;
    if (j.is_string()) {
      value = j.get<std::string>();
      std::string quoted = "\"";
      for (char c : value) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
      value = quoted + "\"";
    } else if (j.is_number_float()) {
      value = format_number(j.get<double>());
    } else {
      value = j.dump();
    }
    out << path << ',' << value << '\n';
  }
}

}  // namespace

bool ExperimentConfig::stochastic() const {
  if (source_is_random(state) || source_is_random(perturbed)) return true;
  if (subcommand == "decouple" || subcommand == "pgm" || subcommand == "protocol" ||
      subcommand == "converse")
    return true;
  return subcommand == "ssa" && state.empty();
}

void ExperimentConfig::validate() const {
  if (!kSubcommands.count(subcommand)) throw ValidationError("unknown subcommand '" + subcommand + "'");
  if (format != "json" && format != "csv" && format != "text")
    throw ValidationError("--out must be json, csv or text");
  if (stochastic() && !seed) throw ValidationError("'" + subcommand + "' is stochastic and needs --seed or QREDIST_SEED");
  for (std::size_t d : {kappa, bhat, s_dim, k_dim, q_dim, l_dim, max_dim, max_kappa, max_d, threads})
    if (d < 1) throw ValidationError("dimensions, counts and --threads must be at least 1");
  if (n && *n < 1) throw ValidationError("--n must be at least 1");
  if (delta && !(*delta > 0)) throw ValidationError("--delta must be positive");
  if (eps && !(*eps >= 0)) throw ValidationError("--eps must be nonnegative");
  if (!dims.empty())
    for (const auto& s : gen::parse_dims(dims))
      if (s.dim < 1) throw ValidationError("dimensions must be at least 1");
}

json ExperimentConfig::to_json() const {
  json j = {{"subcommand", subcommand},
            {"state", state},
            {"dims", dims},
            {"partition", partition},
            {"perturbed", perturbed},
            {"ensemble", ensemble},
            {"c_system", c_system},
            {"mode", mode},
            {"check", check},
            {"derive", derive},
            {"kappa", kappa},
            {"bhat", bhat},
            {"s_dim", s_dim},
            {"trials", trials},
            {"k_dim", k_dim},
            {"q_dim", q_dim},
            {"l_dim", l_dim},
            {"q_rate", q_rate},
            {"kappa_rate", kappa_rate},
            {"max_dim", max_dim},
            {"max_kappa", max_kappa},
            {"max_d", max_d},
            {"ghz", ghz},
            {"format", format},
            {"output", output},
            {"threads", threads}};
  j["n"] = n ? json(*n) : json(nullptr);
  j["delta"] = delta ? json(*delta) : json(nullptr);
  j["eps"] = eps ? json(*eps) : json(nullptr);
  j["seed"] = seed ? json(*seed) : json(nullptr);
  return j;
}

json RunRecord::to_json() const {
  return {{"config", config.to_json()},
          {"version", version},
          {"wall_clock_seconds", wall_clock_seconds},
          {"exit_code", exit_code},
          {"result", result}};
}

std::string version() { return QREDIST_VERSION; }

AnyState load_source(const std::string& source, const std::string& dims, Rng* rng) {
  if (source.rfind("gen:", 0) == 0)
    return gen::generate_state(source.substr(4), gen::parse_dims(dims), rng);
  if (source.rfind("diag:", 0) == 0) {
    std::vector<double> p;
    std::stringstream ss(source.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t pos = 0;
        p.push_back(std::stod(item, &pos));
        if (pos != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ValidationError("bad diagonal entry '" + item + "'");
      }
    }
    if (p.empty()) throw ValidationError("diag: needs at least one entry");
    Matrix m = Matrix::Zero(Eigen::Index(p.size()), Eigen::Index(p.size()));
    for (std::size_t i = 0; i < p.size(); ++i) m(Eigen::Index(i), Eigen::Index(i)) = p[i];
    return DensityOperator(Space(std::vector<SystemLabel>{SystemLabel{"q0", p.size()}}), m);
  }
  return load_state(source);
}

PureState require_pure(const AnyState& state) {
  if (const auto* psi = std::get_if<PureState>(&state)) return *psi;
  const DensityOperator& rho = std::get<DensityOperator>(state);
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  const Eigen::Index top = es.eigenvalues().size() - 1;
  if (std::abs(es.eigenvalues()(top) - 1) > tol::norm)
    throw ValidationError("expected a pure state; the density operator has rank above one");
  return PureState::normalize(Ket(rho.space(), es.eigenvectors().col(top)));
}

RunRecord run(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const Rng rng(config.seed.value_or(0));

  Payload p;
  const std::string& sc = config.subcommand;
  if (sc == "rates") p = run_rates(config, rng);
  else if (sc == "decouple") p = run_decouple(config, rng);
  else if (sc == "pgm") p = run_pgm(config, rng);
  else if (sc == "protocol") p = run_protocol(config, rng);
  else if (sc == "types") p = run_types(config, rng);
  else if (sc == "assemble") p = assemble_payload(config, rng);
  else if (sc == "resources") p = run_resources(config, rng);
  else if (sc == "converse") p = run_converse(config, rng);
  else p = run_ssa(config, rng);

  RunRecord rec;
  rec.config = config;
  rec.version = version();
  rec.result = std::move(p.result);
  rec.exit_code = p.violated ? 3 : 0;
  rec.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::string flatten_csv(const json& j) {
  std::ostringstream out;
  out << "path,value\n";
  flatten_into(j, "", out);
  return out.str();
}

std::string render(const RunRecord& record, const std::string& format) {
  if (format == "csv") return flatten_csv(record.to_json());
  if (format == "text" && record.result.contains("trace")) return record.result["trace"].get<std::string>();
  return record.to_json().dump(2) + "\n";
}

void write_atomically(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + tmp + "'");
    out << content;
    out.flush();
    if (!out) throw ValidationError("write to '" + tmp + "' failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw ValidationError("cannot move output into '" + path + "'");
  }
}

}  // namespace qredist
