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

#include "io.h"

#include <cmath>
#include <fstream>
#include <sstream>

namespace lmr::io {
namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

std::size_t require_size(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw InputError(std::string("field '") + key + "' must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

Vector number_array(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array of numbers");
  Vector out;
  out.reserve(j.size());
  for (const Json& v : j) {
    if (!v.is_number()) throw InputError(std::string(what) + " must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Json optional_number(const std::optional<double>& v) {
  return v ? number_or_inf(*v) : Json(nullptr);
}

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (double e : v) out.push_back(number_or_inf(e));
  return out;
}

}  // namespace

Json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? Json("inf") : Json("-inf");
  return Json(v);
}

double parse_number_or_inf(const Json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return kInfinity;
  }
  throw InputError(std::string(what) + " must be a number or \"inf\"");
}

Json operator_to_json(const LinearTransformation& op) {
  Json j;
  j["m"] = op.m();
  j["n"] = op.n();
  j["p"] = op.p();
  Json frames = Json::array();
  for (const Matrix& f : op.frames()) {
    frames.push_back(Vector(f.data().begin(), f.data().end()));
  }
  j["frames"] = std::move(frames);
  j["norm"] = std::string(to_string(op.norm()));
  return j;
}

LinearTransformation operator_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("operator must be a JSON object");
  const std::size_t m = require_size(j, "m");
  const std::size_t n = require_size(j, "n");
  const std::size_t p = require_size(j, "p");
  if (m == 0 || n == 0) throw InputError("operator dimensions must be positive");
  const Json& frames = require(j, "frames");
  if (!frames.is_array() || frames.size() != p) {
    throw InputError("'frames' must be an array of p frames");
  }
  std::vector<Matrix> mats;
  mats.reserve(p);
  for (const Json& f : frames) {
    Vector data = number_array(f, "frame");
    if (data.size() != m * n) throw InputError("each frame must have m*n entries");
    mats.emplace_back(m, n, std::move(data));
  }
  MeasurementNorm norm = MeasurementNorm::kL2;
  if (j.contains("norm")) {
    const Json& nv = j.at("norm");
    const std::optional<MeasurementNorm> parsed =
        nv.is_string() ? parse_measurement_norm(nv.get<std::string>()) : std::nullopt;
    if (!parsed) throw InputError("'norm' must be one of l1, l2, linf");
    norm = *parsed;
  }
  return LinearTransformation(m, n, std::move(mats), norm);
}

Json matrix_to_json(const Matrix& x) {
  Json j;
  j["rows"] = x.rows();
  j["cols"] = x.cols();
  j["data"] = Vector(x.data().begin(), x.data().end());
  return j;
}

Matrix matrix_from_json(const Json& j) {
  const std::size_t rows = require_size(j, "rows");
  const std::size_t cols = require_size(j, "cols");
  Vector data = number_array(require(j, "data"), "'data'");
  if (data.size() != rows * cols) throw InputError("'data' must have rows*cols entries");
  return Matrix(rows, cols, std::move(data));
}

Json certificate_to_json(const GoodnessCertificate& cert, const CertifyConfig& cfg) {
  Json j;
  j["query"] = {{"s", cert.query.s},
                {"beta", number_or_inf(cert.query.beta)},
                {"kind", std::string(to_string(cert.query.kind))}};
  j["lower"] = number_or_inf(cert.lower);
  j["upper"] = number_or_inf(cert.upper);
  j["verdict"] = std::string(to_string(cert.verdict));
  j["soundness"] = {{"lower", "sound"},
                    {"upper", cert.upper_sampled ? "sampled" : "sound"},
                    {"verdict_basis", "sound upper bound or null-space lower bound"}};
  const UpperBounds& ub = cert.gamma_hat_upper;
  j["gamma_hat"] = {{"lower", number_or_inf(cert.gamma_hat_lower)},
                    {"upper_sound", number_or_inf(ub.sound)},
                    {"upper_trivial", number_or_inf(ub.trivial)},
                    {"upper_injective", optional_number(ub.injective)},
                    {"upper_rip", optional_number(ub.rip)},
                    {"upper_sampled", number_or_inf(ub.sampled)},
                    {"rip_gamma1_asserted", optional_number(ub.rip_gamma1_asserted)}};
  Json runs = Json::array();
  for (const AscentRun& run : cert.trace.runs) {
    Json values = Json::array();
    for (const AscentStep& step : run.steps) values.push_back(number_or_inf(step.value));
    runs.push_back(std::move(values));
  }
  j["trace"] = {{"seed", cfg.seed},
                {"restarts", cfg.restarts},
                {"null_space_samples", cfg.null_space_samples},
                {"factor_pairs", cert.trace.factor_pairs},
                {"ascent_values", std::move(runs)}};
  return j;
}

Json solution_to_json(const NnmSolution& sol) {
  Json j;
  j["x"] = matrix_to_json(sol.x);
  j["objective"] = number_or_inf(sol.objective);
  j["residual"] = number_or_inf(sol.residual);
  j["theta"] = number_or_inf(sol.theta);
  j["upsilon_bound"] = sol.upsilon_bound ? number_or_inf(*sol.upsilon_bound) : Json("unknown");
  j["iterations"] = sol.iterations;
  j["status"] = std::string(to_string(sol.status));
  return j;
}

NnmSolution solution_from_json(const Json& j) {
  NnmSolution sol;
  sol.x = matrix_from_json(require(j, "x"));
  sol.objective = parse_number_or_inf(require(j, "objective"), "objective");
  sol.residual = parse_number_or_inf(require(j, "residual"), "residual");
  sol.theta = parse_number_or_inf(require(j, "theta"), "theta");
  const Json& up = require(j, "upsilon_bound");
  if (!(up.is_string() && up.get<std::string>() == "unknown")) {
    sol.upsilon_bound = parse_number_or_inf(up, "upsilon_bound");
  }
  sol.iterations = require_size(j, "iterations");
  const Json& st = require(j, "status");
  const std::string s = st.is_string() ? st.get<std::string>() : "";
  if (s == to_string(SolveStatus::kConverged)) {
    sol.status = SolveStatus::kConverged;
  } else if (s == to_string(SolveStatus::kNotConverged)) {
    sol.status = SolveStatus::kNotConverged;
  } else if (s == to_string(SolveStatus::kInfeasible)) {
    sol.status = SolveStatus::kInfeasible;
  } else {
    throw InputError("unknown solver status");
  }
  return sol;
}

Json rip_estimate_to_json(const RipEstimate& est) {
  Json j;
  j["s"] = est.s;
  j["delta_lower"] = number_or_inf(est.delta_lower);
  j["delta_exact"] = optional_number(est.delta_exact);
  j["delta_upper"] = optional_number(est.delta_upper);
  j["samples"] = est.samples;
  j["seed"] = est.seed;
  return j;
}

Json guarantee_to_json(const GuaranteeEntry& entry) {
  Json j;
  j["source"] = entry.source;
  j["order_multiple"] = entry.order_multiple;
  j["threshold"] = number_or_inf(entry.threshold);
  j["threshold_text"] = entry.threshold_text;
  j["status"] = std::string(to_string(entry.status));
  return j;
}

Json trial_to_json(const TrialRecord& rec) {
  Json j;
  j["seed"] = rec.seed;
  Json op;
  op["kind"] = rec.op.kind;
  op["m"] = rec.op.m;
  op["n"] = rec.op.n;
  op["p"] = rec.op.p;
  op["seed"] = rec.op.seed ? Json(*rec.op.seed) : Json(nullptr);
  op["norm"] = rec.op.norm;
  j["operator"] = std::move(op);
  j["w"] = {{"m", rec.m}, {"n", rec.n}, {"s", rec.s},
            {"singular_values", vector_json(rec.w_singular_values)}};
  j["epsilon"] = number_or_inf(rec.epsilon);
  j["theta"] = number_or_inf(rec.theta);
  j["upsilon"] = rec.upsilon ? number_or_inf(*rec.upsilon) : Json("unknown");
  j["recovery_error_nuclear"] = number_or_inf(rec.recovery_error_nuclear);
  j["recovery_error_rel_frobenius"] = number_or_inf(rec.recovery_error_rel_frobenius);
  j["success"] = rec.success;
  j["status"] = std::string(to_string(rec.status));
  j["iterations"] = rec.iterations;
  j["certificate_valid"] = rec.certificate_valid;
  j["block_assumption"] = rec.block_assumption;
  j["bound_value"] = rec.bound_value ? number_or_inf(*rec.bound_value) : Json("n/a");
  j["bound_respected"] = rec.bound_respected;
  return j;
}

void apply_config_json(const Json& j, RunConfig& cfg) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  auto positive = [&](const Json& v, const char* key) {
    if (!v.is_number()) throw InputError(std::string("config '") + key + "' must be a number");
    return v.get<double>();
  };
  auto count = [&](const Json& v, const char* key) -> std::size_t {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw InputError(std::string("config '") + key + "' must be a nonnegative integer");
    }
    return v.get<std::size_t>();
  };
  for (const auto& [key, v] : j.items()) {
    if (key == "seed") {
      if (!v.is_number_integer() || v.get<long long>() < 0) {
        if (!v.is_number_unsigned()) throw InputError("config 'seed' must be an integer");
      }
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "feas_tol") {
      cfg.feas_tol = positive(v, "feas_tol");
    } else if (key == "gap_tol") {
      cfg.gap_tol = positive(v, "gap_tol");
    } else if (key == "success_tol") {
      cfg.success_tol = positive(v, "success_tol");
    } else if (key == "max_iterations") {
      cfg.max_iterations = count(v, "max_iterations");
    } else if (key == "factor_pairs") {
      cfg.factor_pairs = count(v, "factor_pairs");
    } else if (key == "rip_samples") {
      cfg.rip_samples = count(v, "rip_samples");
    } else if (key == "restarts") {
      cfg.restarts = count(v, "restarts");
    } else if (key == "null_space_samples") {
      cfg.null_space_samples = count(v, "null_space_samples");
    } else if (key == "norm") {
      const std::optional<MeasurementNorm> parsed =
          v.is_string() ? parse_measurement_norm(v.get<std::string>()) : std::nullopt;
      if (!parsed) throw InputError("config 'norm' must be one of l1, l2, linf");
      cfg.norm = parsed;
    } else if (key == "out") {
      if (!v.is_string()) throw InputError("config 'out' must be a string");
      cfg.out = v.get<std::string>();
    } else {
      throw InputError("unknown config key '" + key + "'");
    }
  }
}

void validate(const RunConfig& cfg) {
  if (!(cfg.feas_tol > 0.0) || !(cfg.gap_tol > 0.0) || !(cfg.success_tol > 0.0)) {
    throw InputError("tolerances must be positive");
  }
  if (cfg.restarts == 0) throw InputError("restarts must be positive");
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw InputError("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("failed writing '" + path + "'");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace lmr::io
