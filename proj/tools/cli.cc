// Copyright 2026 The lmr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "io.h"
#include "lmr/goodness.h"
#include "lmr/nnm.h"
#include "lmr/random.h"
#include "lmr/recovery.h"
#include "lmr/rip.h"
#include "lmr/svd.h"

namespace lmr::cli {
namespace {

using io::DimensionError;
using io::InputError;
using io::Json;

// Raw flag values; merged with the --config file by resolve().
struct Flags {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out;
  std::string norm;
  std::string op_file;
  std::size_t s = 1;
  std::string beta = "inf";
  std::string kind = "gamma_hat";
  std::optional<std::size_t> restarts;
  std::optional<std::size_t> factor_pairs;
  std::optional<std::size_t> null_samples;
  std::optional<std::size_t> rip_samples;
  std::optional<double> feas_tol;
  std::optional<double> gap_tol;
  std::optional<double> success_tol;
  std::optional<std::size_t> max_iterations;
  std::string b_file;
  std::string w_file;
  double eps = 0.0;
  std::optional<std::size_t> split;
  std::vector<std::size_t> s_list;
  std::vector<std::size_t> p_list;
  std::size_t m = 8;
  std::size_t n = 8;
  std::size_t trials = 50;
  std::string trials_out;
};

io::RunConfig resolve(const Flags& f) {
  io::RunConfig cfg;
  if (!f.config.empty()) io::apply_config_json(io::read_json_file(f.config), cfg);
  if (f.seed) cfg.seed = f.seed;
  if (!f.out.empty()) cfg.out = f.out;
  if (!f.norm.empty()) {
    cfg.norm = parse_measurement_norm(f.norm);
    if (!cfg.norm) throw InputError("--norm must be one of l1, l2, linf");
  }
  if (f.restarts) cfg.restarts = *f.restarts;
  if (f.factor_pairs) cfg.factor_pairs = *f.factor_pairs;
  if (f.null_samples) cfg.null_space_samples = *f.null_samples;
  if (f.rip_samples) cfg.rip_samples = *f.rip_samples;
  if (f.feas_tol) cfg.feas_tol = *f.feas_tol;
  if (f.gap_tol) cfg.gap_tol = *f.gap_tol;
  if (f.success_tol) cfg.success_tol = *f.success_tol;
  if (f.max_iterations) cfg.max_iterations = *f.max_iterations;
  io::validate(cfg);
  return cfg;
}

std::uint64_t require_seed(const io::RunConfig& cfg) {
  if (!cfg.seed) throw InputError("--seed (or a config 'seed') is required for this command");
  return *cfg.seed;
}

double parse_beta(const std::string& text) {
  if (text == "inf" || text == "infinity") return kInfinity;
  double v = 0.0;
  std::size_t used = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InputError("--beta must be a positive number or \"inf\"");
  }
  if (used != text.size() || !(v > 0.0) || std::isnan(v)) {
    throw InputError("--beta must be a positive number or \"inf\"");
  }
  return v;
}

LinearTransformation load_operator(const std::string& path, const io::RunConfig& cfg) {
  LinearTransformation op = io::operator_from_json(io::read_json_file(path));
  if (cfg.norm) op = op.with_norm(*cfg.norm);
  return op;
}

void check_s(std::size_t s, const LinearTransformation& op) {
  if (s < 1 || s > op.r()) {
    throw DimensionError("s = " + std::to_string(s) + " is outside [1, r = " +
                         std::to_string(op.r()) + "]");
  }
}

void emit(const std::string& text, const io::RunConfig& cfg, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
  } else {
    io::write_text_file(cfg.out, text);
  }
}

CertifyConfig certify_config(const io::RunConfig& cfg) {
  CertifyConfig cc;
  cc.seed = require_seed(cfg);
  cc.restarts = cfg.restarts;
  cc.null_space_samples = cfg.null_space_samples;
  cc.factor_pairs = cfg.factor_pairs;
  return cc;
}

SolverConfig solver_config(const io::RunConfig& cfg) {
  SolverConfig sc;
  sc.feas_tol = cfg.feas_tol;
  sc.gap_tol = cfg.gap_tol;
  sc.max_iterations = cfg.max_iterations;
  sc.seed = cfg.seed.value_or(0);
  return sc;
}

int cmd_certify(const Flags& f, std::ostream& out) {
  const io::RunConfig cfg = resolve(f);
  const CertifyConfig cc = certify_config(cfg);
  const LinearTransformation op = load_operator(f.op_file, cfg);
  check_s(f.s, op);
  GNumberQuery q;
  q.s = f.s;
  q.beta = parse_beta(f.beta);
  if (f.kind == "gamma_hat") {
    q.kind = GNumberKind::kGammaHat;
  } else if (f.kind == "gamma") {
    q.kind = GNumberKind::kGamma;
  } else {
    throw InputError("--kind must be gamma_hat or gamma");
  }
  const GoodnessCertificate cert = certify(op, q, cc);
  emit(io::dump(io::certificate_to_json(cert, cc)), cfg, out);
  switch (cert.verdict) {
    case Verdict::kSGood:
      return kExitSGood;
    case Verdict::kNotSGood:
      return kExitNotSGood;
    case Verdict::kInconclusive:
      return kExitInconclusive;
  }
  return kExitInconclusive;
}

Vector load_b(const std::string& path) {
  const Json j = io::read_json_file(path);
  const Json& arr = j.is_object() && j.contains("b") ? j.at("b") : j;
  if (!arr.is_array()) throw InputError("b file must hold an array or {\"b\": [...]}");
  Vector b;
  for (const Json& v : arr) {
    if (!v.is_number()) throw InputError("b must contain only numbers");
    b.push_back(v.get<double>());
  }
  return b;
}

int cmd_recover(const Flags& f, std::ostream& out) {
  const io::RunConfig cfg = resolve(f);
  const LinearTransformation op = load_operator(f.op_file, cfg);
  if (f.b_file.empty() == f.w_file.empty()) {
    throw InputError("exactly one of --b and --w is required");
  }
  if (!(f.eps >= 0.0)) throw InputError("--eps must be nonnegative");
  const SolverConfig sc = solver_config(cfg);
  Json result;
  if (!f.b_file.empty()) {
    const Vector b = load_b(f.b_file);
    if (b.size() != op.p()) {
      throw DimensionError("b has length " + std::to_string(b.size()) + " but p = " +
                           std::to_string(op.p()));
    }
    const NnmSolution sol = solve_noisy(NnmProblem{op, b, f.eps}, sc);
    result = io::solution_to_json(sol);
  } else {
    const Matrix w = io::matrix_from_json(io::read_json_file(f.w_file));
    if (w.rows() != op.m() || w.cols() != op.n()) {
      throw DimensionError("W is " + std::to_string(w.rows()) + "x" + std::to_string(w.cols()) +
                           " but the operator acts on " + std::to_string(op.m()) + "x" +
                           std::to_string(op.n()));
    }
    const Vector b = op.apply(w);
    const NnmSolution sol = solve_noisy(NnmProblem{op, b, f.eps}, sc);
    result = io::solution_to_json(sol);
    if (frobenius_norm(w) > 0.0) {
      RecoveryConfig rc;
      rc.s = f.split.value_or(std::max<std::size_t>(1, svd(w).rank()));
      check_s(rc.s, op);
      rc.success_tol = cfg.success_tol;
      rc.solver = sc;
      const Vector zero(op.p(), 0.0);
      TrialRecord rec = f.eps > 0.0 ? noisy_recovery_trial(op, w, zero, f.eps, rc)
                                    : exact_recovery_trial(op, w, rc);
      rec.op.kind = "explicit";
      result["trial"] = io::trial_to_json(rec);
    }
  }
  emit(io::dump(result), cfg, out);
  return 0;
}

RipEstimate estimate_order(const LinearTransformation& op, std::size_t order,
                           std::size_t samples, std::uint64_t seed) {
  if (order >= op.r()) {
    // Every matrix has rank <= r, so the constant of any order >= r is delta_r.
    RipEstimate est;
    est.s = order;
    est.delta_lower = rip_exact_full_rank(op);
    est.delta_exact = est.delta_lower;
    est.delta_upper = est.delta_lower;
    est.samples = 0;
    est.seed = seed;
    return est;
  }
  return rip_sample_lower(op, order, samples, seed);
}

int cmd_rip(const Flags& f, std::ostream& out) {
  const io::RunConfig cfg = resolve(f);
  const std::uint64_t seed = require_seed(cfg);
  const LinearTransformation op = load_operator(f.op_file, cfg);
  std::vector<std::size_t> orders = f.s_list.empty() ? std::vector<std::size_t>{1} : f.s_list;
  for (std::size_t s : orders) check_s(s, op);
  Json j;
  j["operator"] = {{"m", op.m()}, {"n", op.n()}, {"p", op.p()},
                   {"norm", std::string(to_string(op.norm()))}};
  j["delta_r"] = io::number_or_inf(rip_exact_full_rank(op));
  j["delta_r_rescaled"] = io::number_or_inf(rip_full_rank_rescaled(op));
  Json estimates = Json::array();
  Json guarantees = Json::array();
  for (std::size_t s : orders) {
    estimates.push_back(io::rip_estimate_to_json(estimate_order(op, s, cfg.rip_samples, seed)));
    std::optional<RipEstimate> multiples[4];
    for (std::size_t k = 2; k <= 5; ++k) {
      multiples[k - 2] = estimate_order(op, k * s, cfg.rip_samples, seed);
    }
    Json table = Json::array();
    for (const GuaranteeEntry& e :
         guarantee_table(multiples[0], multiples[1], multiples[2], multiples[3])) {
      table.push_back(io::guarantee_to_json(e));
    }
    guarantees.push_back({{"s", s}, {"table", std::move(table)}});
  }
  j["estimates"] = std::move(estimates);
  j["guarantees"] = std::move(guarantees);
  emit(io::dump(j), cfg, out);
  return 0;
}

int cmd_phase(const Flags& f, std::ostream& out) {
  const io::RunConfig cfg = resolve(f);
  PhaseGridConfig pc;
  pc.seed = require_seed(cfg);
  pc.m = f.m;
  pc.n = f.n;
  pc.s_values = f.s_list.empty() ? std::vector<std::size_t>{1} : f.s_list;
  pc.p_values = f.p_list.empty() ? std::vector<std::size_t>{f.m * f.n / 2} : f.p_list;
  pc.trials = f.trials;
  pc.success_tol = cfg.success_tol;
  pc.solver = solver_config(cfg);
  if (cfg.norm) pc.norm = *cfg.norm;
  if (pc.m == 0 || pc.n == 0) throw InputError("--m and --n must be positive");
  if (pc.trials == 0) throw InputError("--trials must be positive");
  const std::size_t r = std::min(pc.m, pc.n);
  for (std::size_t s : pc.s_values) {
    if (s < 1 || s > r) throw DimensionError("s values must lie in [1, min(m, n)]");
  }
  const PhaseGrid grid = phase_grid(pc);
  std::ostringstream csv;
  write_phase_csv(csv, grid);
  emit(csv.str(), cfg, out);
  if (!f.trials_out.empty()) {
    std::string lines;
    for (const TrialRecord& rec : grid.trials) lines += io::trial_to_json(rec).dump() + "\n";
    io::write_text_file(f.trials_out, lines);
  }
  return 0;
}

int cmd_gnum_lower(const Flags& f, std::ostream& out) {
  const io::RunConfig cfg = resolve(f);
  const std::uint64_t seed = require_seed(cfg);
  const LinearTransformation op = load_operator(f.op_file, cfg);
  check_s(f.s, op);
  const AscentResult asc = lower_bound_ascent(op, f.s, cfg.restarts, derive_seed(seed, {1}));
  const NullSpaceAscentResult nsa =
      null_space_ascent(op, f.s, cfg.null_space_samples, derive_seed(seed, {2}));
  Json runs = Json::array();
  for (const AscentRun& run : asc.trace.runs) {
    Json values = Json::array();
    for (const AscentStep& step : run.steps) values.push_back(io::number_or_inf(step.value));
    runs.push_back(std::move(values));
  }
  Json j;
  j["s"] = f.s;
  j["kind"] = "gamma_hat";
  j["beta"] = "inf";
  j["lower"] = io::number_or_inf(std::max(asc.best_bound, nsa.bound));
  j["ascent_lower"] = io::number_or_inf(asc.best_bound);
  j["null_space_lower"] = io::number_or_inf(nsa.bound);
  j["seed"] = seed;
  j["restarts"] = cfg.restarts;
  j["null_space_samples"] = cfg.null_space_samples;
  j["ascent_values"] = std::move(runs);
  emit(io::dump(j), cfg, out);
  return 0;
}

int cmd_gnum_upper(const Flags& f, std::ostream& out) {
  const io::RunConfig cfg = resolve(f);
  const std::uint64_t seed = require_seed(cfg);
  const LinearTransformation op = load_operator(f.op_file, cfg);
  check_s(f.s, op);
  const double beta = parse_beta(f.beta);
  const std::vector<FactorPair> pairs =
      sample_factor_pairs(op, cfg.factor_pairs, derive_seed(seed, {3}));
  const UpperBounds ub = gamma_hat_upper_bounds(op, f.s, beta, pairs);
  Json j;
  j["s"] = f.s;
  j["kind"] = "gamma_hat";
  j["beta"] = io::number_or_inf(beta);
  j["upper"] = io::number_or_inf(std::min(ub.sound, ub.sampled));
  j["upper_sound"] = io::number_or_inf(ub.sound);
  j["upper_sampled"] = io::number_or_inf(ub.sampled);
  j["sampled_gamma1"] =
      pairs.empty() ? Json(nullptr) : io::number_or_inf(upper_bound_gamma1(op, beta, pairs));
  j["upper_rip"] = ub.rip ? io::number_or_inf(*ub.rip) : Json(nullptr);
  j["upper_injective"] = ub.injective ? io::number_or_inf(*ub.injective) : Json(nullptr);
  j["rip_gamma1_asserted"] =
      ub.rip_gamma1_asserted ? io::number_or_inf(*ub.rip_gamma1_asserted) : Json(nullptr);
  j["seed"] = seed;
  j["factor_pairs"] = pairs.size();
  emit(io::dump(j), cfg, out);
  return 0;
}

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--seed", f.seed, "Master seed (required for randomized commands)");
  app->add_option("--config", f.config, "JSON run configuration file");
  app->add_option("--out", f.out, "Output file (default: standard output)");
  app->add_option("--norm", f.norm, "Measurement norm override: l1, l2 or linf");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"lmr: G-number certificates and low-rank recovery experiments", "lmr"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* certify_cmd = app.add_subcommand("certify", "Bracket a G-number and issue a verdict");
  add_common(certify_cmd, f);
  certify_cmd->add_option("operator", f.op_file, "Operator JSON file")->required();
  certify_cmd->add_option("--s", f.s, "Rank level s");
  certify_cmd->add_option("--beta", f.beta, "beta (number or inf)");
  certify_cmd->add_option("--kind", f.kind, "gamma_hat or gamma");
  certify_cmd->add_option("--restarts", f.restarts, "LP ascent restarts");
  certify_cmd->add_option("--factor-pairs", f.factor_pairs, "Sampled factor pairs");
  certify_cmd->add_option("--null-samples", f.null_samples, "Null-space ascent samples");

  CLI::App* recover_cmd = app.add_subcommand("recover", "Solve the nuclear-norm program");
  add_common(recover_cmd, f);
  recover_cmd->add_option("operator", f.op_file, "Operator JSON file")->required();
  recover_cmd->add_option("--b", f.b_file, "Measurement vector JSON file");
  recover_cmd->add_option("--w", f.w_file, "Target matrix JSON file (b = A(W))");
  recover_cmd->add_option("--eps", f.eps, "Noise level epsilon");
  recover_cmd->add_option("--s", f.split, "Split used for the trial record");
  recover_cmd->add_option("--feas-tol", f.feas_tol, "Feasibility tolerance");
  recover_cmd->add_option("--gap-tol", f.gap_tol, "Duality gap tolerance");
  recover_cmd->add_option("--max-iter", f.max_iterations, "Iteration cap");
  recover_cmd->add_option("--success-tol", f.success_tol, "Relative Frobenius success threshold");

  CLI::App* rip_cmd = app.add_subcommand("rip", "Estimate restricted isometry constants");
  add_common(rip_cmd, f);
  rip_cmd->add_option("operator", f.op_file, "Operator JSON file")->required();
  rip_cmd->add_option("--s", f.s_list, "Orders, comma separated")->delimiter(',');
  rip_cmd->add_option("--samples", f.rip_samples, "Samples per rank");

  CLI::App* phase_cmd = app.add_subcommand("phase", "Phase-transition grid (CSV)");
  add_common(phase_cmd, f);
  phase_cmd->add_option("--m", f.m, "Rows");
  phase_cmd->add_option("--n", f.n, "Columns");
  phase_cmd->add_option("--s", f.s_list, "Ranks, comma separated")->delimiter(',');
  phase_cmd->add_option("--p", f.p_list, "Measurement counts, comma separated")->delimiter(',');
  phase_cmd->add_option("--trials", f.trials, "Trials per cell");
  phase_cmd->add_option("--success-tol", f.success_tol, "Relative Frobenius success threshold");
  phase_cmd->add_option("--trials-out", f.trials_out, "JSON-lines trial log");
  phase_cmd->add_option("--max-iter", f.max_iterations, "Iteration cap");

  CLI::App* lower_cmd = app.add_subcommand("gnum-lower", "Lower bounds on gamma_hat_s");
  add_common(lower_cmd, f);
  lower_cmd->add_option("operator", f.op_file, "Operator JSON file")->required();
  lower_cmd->add_option("--s", f.s, "Rank level s");
  lower_cmd->add_option("--restarts", f.restarts, "LP ascent restarts");
  lower_cmd->add_option("--null-samples", f.null_samples, "Null-space ascent samples");

  CLI::App* upper_cmd = app.add_subcommand("gnum-upper", "Upper bounds on gamma_hat_s");
  add_common(upper_cmd, f);
  upper_cmd->add_option("operator", f.op_file, "Operator JSON file")->required();
  upper_cmd->add_option("--s", f.s, "Rank level s");
  upper_cmd->add_option("--beta", f.beta, "beta (number or inf)");
  upper_cmd->add_option("--factor-pairs", f.factor_pairs, "Sampled factor pairs");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "lmr: " << e.what() << "\n";
    return kExitMalformed;
  }

  try {
    if (certify_cmd->parsed()) return cmd_certify(f, out);
    if (recover_cmd->parsed()) return cmd_recover(f, out);
    if (rip_cmd->parsed()) return cmd_rip(f, out);
    if (phase_cmd->parsed()) return cmd_phase(f, out);
    if (lower_cmd->parsed()) return cmd_gnum_lower(f, out);
    if (upper_cmd->parsed()) return cmd_gnum_upper(f, out);
  } catch (const InputError& e) {
    err << "lmr: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const DimensionError& e) {
    err << "lmr: " << e.what() << "\n";
    return kExitRange;
  } catch (const std::invalid_argument& e) {
    err << "lmr: " << e.what() << "\n";
    return kExitRange;
  } catch (const std::exception& e) {
    err << "lmr: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace lmr::cli
