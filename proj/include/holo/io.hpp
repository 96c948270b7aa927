/*
 * io.hpp — structured text formats: loop files, target gates, run
 * configuration, and report rows.
 *
 * Loop file (JSON):
 *   {
 *     "base": {"xi": [re, im], "zeta": [re, im]},
 *     "steps": 512,
 *     "segments": [
 *       {"type": "line", "from": POINT, "to": POINT},
 *       {"type": "arc", "center": POINT, "plane": ["re_zeta", "im_zeta"],
 *        "radius": 0.05, "start_angle": 0.0, "sweep": 6.283185307179586}
 *     ]
 *   }
 * A complex number is [re, im] or a bare real.
 *
 * Target (JSON): {"target": M} where M is a 4x4 row-major matrix, either
 * nested ([[[re, im], ...], ...]) or as a flat list of 16 [re, im] pairs.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "holo/holonomy.hpp"

namespace holo {

using Json = nlohmann::json;

/// Malformed or out-of-range user input.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json read_json_file(const std::string& path);

cplx parse_complex(const Json& j);
Json complex_json(cplx z);
ParamPoint parse_point(const Json& j);
Json point_json(const ParamPoint& p);
Coord parse_coord(const std::string& name);

struct LoopSpec {
  LoopPath loop = LoopPath::constant();
  std::optional<int> steps;
};

LoopSpec parse_loop_spec(const Json& j);
LoopSpec load_loop_spec(const std::string& path);
Json loop_spec_json(const LoopPath& loop, std::optional<int> steps = std::nullopt);

Matrix4 parse_matrix4(const Json& j);
Json matrix_json(const Matrix4& m);
Matrix4 load_target(const std::string& path);

enum class Format { kJson, kCsv };
Format parse_format(const std::string& name);
const char* format_name(Format f);

struct Tolerances {
  double connection = 1e-8;
  double curvature = 1e-6;
  double unitarity = 1e-9;
  double cutoff = kCutoffProbeTol;  // n vs n + 6 connection deviation
  double span = 1e-8;               // curvature span residual
  double algebra = 1e-8;            // relative singular-value cut
};

struct RunConfig {
  int cutoff = kDefaultCutoff;
  Budget budget;
  int steps = kDefaultSteps;
  Tolerances tol;
  std::uint64_t seed = 0;
  Format format = Format::kJson;
  int samples = 20;      // sample points for the verification commands
  double fd_step = 1e-4;  // curvature finite-difference step
};

/// Overlay the keys of `j` on `base`; unknown keys are an InputError.
RunConfig parse_config(const Json& j, RunConfig base = {});
/// Throws InputError when a field is out of range.
void validate(const RunConfig& c);
Json config_json(const RunConfig& c);

/// One CSV row: re_xi, im_xi, re_zeta, im_zeta, metric_name, value.
struct CsvRow {
  ParamPoint at;
  std::string metric;
  double value = 0.0;
};

std::string format_double(double v);
std::string csv_report(const std::vector<CsvRow>& rows);

}  // namespace holo
