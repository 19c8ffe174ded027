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

// JSON serialization for operators, certificates, solutions, RIP reports
// and trial records. Doubles are written in shortest round-trip form;
// infinities are written as the string "inf".

#ifndef LMR_TOOLS_IO_H_
#define LMR_TOOLS_IO_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "lmr/goodness.h"
#include "lmr/linear_transformation.h"
#include "lmr/matrix.h"
#include "lmr/nnm.h"
#include "lmr/recovery.h"
#include "lmr/rip.h"

namespace lmr::io {

using Json = nlohmann::ordered_json;

/// Unparseable or structurally invalid input (exit code 64).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parsed input whose dimensions or ranges are inconsistent (exit code 65).
class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json number_or_inf(double v);
/// Accepts a JSON number, or the strings "inf" / "infinity".
double parse_number_or_inf(const Json& j, const char* what);

/// {"m", "n", "p", "frames": [[row-major] ...], "norm"}.
Json operator_to_json(const LinearTransformation& op);
LinearTransformation operator_from_json(const Json& j);

/// {"rows", "cols", "data": [row-major]}.
Json matrix_to_json(const Matrix& x);
Matrix matrix_from_json(const Json& j);

Json certificate_to_json(const GoodnessCertificate& cert, const CertifyConfig& cfg);

Json solution_to_json(const NnmSolution& sol);
NnmSolution solution_from_json(const Json& j);

Json rip_estimate_to_json(const RipEstimate& est);
Json guarantee_to_json(const GuaranteeEntry& entry);

Json trial_to_json(const TrialRecord& rec);

/// Options shared by the subcommands; any subset may come from a JSON file.
struct RunConfig {
  std::optional<std::uint64_t> seed;
  double feas_tol = 1e-8;
  double gap_tol = 1e-6;
  double success_tol = 1e-4;
  std::size_t max_iterations = 5000;
  std::size_t factor_pairs = 32;
  std::size_t rip_samples = 2000;
  std::size_t restarts = 8;
  std::size_t null_space_samples = 8;
  std::optional<MeasurementNorm> norm;
  std::string out;
};

/// Overlays the keys present in `j` onto `cfg`. Throws InputError for
/// unknown keys or wrong types.
void apply_config_json(const Json& j, RunConfig& cfg);
/// Throws InputError unless every tolerance is positive.
void validate(const RunConfig& cfg);

/// Reads and parses a JSON file; throws InputError on failure.
Json read_json_file(const std::string& path);
/// Writes `text` to `path` atomically enough for tests (truncate + write).
void write_text_file(const std::string& path, const std::string& text);

/// Canonical text form: two-space indentation and a trailing newline.
std::string dump(const Json& j);

}  // namespace lmr::io

#endif  // LMR_TOOLS_IO_H_
