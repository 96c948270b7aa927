#include "holo/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace holo {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw InputError(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InputError(std::string(what) + " must be finite");
  return v;
}

Segment parse_segment(const Json& j) {
  const Json& type = field(j, "type");
  if (!type.is_string()) throw InputError("segment type must be a string");
  const auto kind = type.get<std::string>();
  if (kind == "line") return LineSegment{parse_point(field(j, "from")), parse_point(field(j, "to"))};
  if (kind == "arc") {
    ArcSegment arc;
    arc.center = parse_point(field(j, "center"));
    const Json& plane = field(j, "plane");
    if (!plane.is_array() || plane.size() != 2 || !plane[0].is_string() || !plane[1].is_string()) {
      throw InputError("arc plane must be a pair of coordinate names");
    }
    arc.plane = {parse_coord(plane[0].get<std::string>()), parse_coord(plane[1].get<std::string>())};
    arc.radius = number(field(j, "radius"), "radius");
    arc.start_angle = j.contains("start_angle") ? number(j.at("start_angle"), "start_angle") : 0.0;
    arc.sweep = number(field(j, "sweep"), "sweep");
    return arc;
  }
  throw InputError("unknown segment type '" + kind + "'");
}

Json segment_json(const Segment& s) {
  if (const auto* line = std::get_if<LineSegment>(&s)) {
    return {{"type", "line"}, {"from", point_json(line->from)}, {"to", point_json(line->to)}};
  }
  const auto& arc = std::get<ArcSegment>(s);
  return {{"type", "arc"},
          {"center", point_json(arc.center)},
          {"plane", {coord_name(arc.plane.first), coord_name(arc.plane.second)}},
          {"radius", arc.radius},
          {"start_angle", arc.start_angle},
          {"sweep", arc.sweep}};
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

cplx parse_complex(const Json& j) {
  if (j.is_number()) return {number(j, "real number"), 0.0};
  if (j.is_array() && j.size() == 2) return {number(j[0], "real part"), number(j[1], "imaginary part")};
  throw InputError("complex numbers are [re, im] pairs or bare reals");
}

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

ParamPoint parse_point(const Json& j) {
  if (!j.is_object()) throw InputError("a point is an object with fields xi and zeta");
  ParamPoint p;
  if (j.contains("xi")) p.xi = parse_complex(j.at("xi"));
  if (j.contains("zeta")) p.zeta = parse_complex(j.at("zeta"));
  for (const auto& [key, value] : j.items()) {
    if (key != "xi" && key != "zeta") throw InputError("unknown point field '" + key + "'");
  }
  return p;
}

Json point_json(const ParamPoint& p) { return {{"xi", complex_json(p.xi)}, {"zeta", complex_json(p.zeta)}}; }

Coord parse_coord(const std::string& name) {
  for (auto c : {Coord::kReXi, Coord::kImXi, Coord::kReZeta, Coord::kImZeta}) {
    if (name == coord_name(c)) return c;
  }
  throw InputError("unknown coordinate '" + name + "' (use re_xi, im_xi, re_zeta, im_zeta)");
}

LoopSpec parse_loop_spec(const Json& j) {
  if (!j.is_object()) throw InputError("loop file must hold a JSON object");
  const ParamPoint base = j.contains("base") ? parse_point(j.at("base")) : ParamPoint{};
  const Json& segs = field(j, "segments");
  if (!segs.is_array()) throw InputError("segments must be an array");
  std::vector<Segment> segments;
  for (const auto& s : segs) segments.push_back(parse_segment(s));
  LoopSpec spec;
  try {
    spec.loop = LoopPath(std::move(segments), base);
  } catch (const LoopError& e) {
    throw InputError(e.what());
  }
  if (j.contains("steps")) {
    if (!j.at("steps").is_number_integer()) throw InputError("steps must be an integer");
    spec.steps = j.at("steps").get<int>();
  }
  return spec;
}

LoopSpec load_loop_spec(const std::string& path) { return parse_loop_spec(read_json_file(path)); }

Json loop_spec_json(const LoopPath& loop, std::optional<int> steps) {
  Json segs = Json::array();
  for (const auto& s : loop.segments()) segs.push_back(segment_json(s));
  Json j = {{"base", point_json(loop.base())}, {"segments", segs}};
  if (steps) j["steps"] = *steps;
  return j;
}

Matrix4 parse_matrix4(const Json& j) {
  if (!j.is_array()) throw InputError("matrix must be an array");
  Matrix4 m;
  if (j.size() == 16) {
    for (int k = 0; k < 16; ++k) m(k / 4, k % 4) = parse_complex(j[k]);
    return m;
  }
  if (j.size() != 4) throw InputError("matrix must have 4 rows (or 16 row-major entries)");
  for (int r = 0; r < 4; ++r) {
    if (!j[r].is_array() || j[r].size() != 4) throw InputError("each matrix row needs 4 entries");
    for (int c = 0; c < 4; ++c) m(r, c) = parse_complex(j[r][c]);
  }
  return m;
}

Json matrix_json(const Matrix4& m) {
  Json rows = Json::array();
  for (int r = 0; r < 4; ++r) {
    Json row = Json::array();
    for (int c = 0; c < 4; ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

Matrix4 load_target(const std::string& path) {
  const Json j = read_json_file(path);
  if (j.is_object()) return parse_matrix4(field(j, "target"));
  return parse_matrix4(j);
}

Format parse_format(const std::string& name) {
  if (name == "json") return Format::kJson;
  if (name == "csv") return Format::kCsv;
  throw InputError("unknown format '" + name + "' (use json or csv)");
}

const char* format_name(Format f) { return f == Format::kJson ? "json" : "csv"; }

RunConfig parse_config(const Json& j, RunConfig base) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  RunConfig c = base;
  auto integer = [](const Json& v, const std::string& key) {
    if (!v.is_number_integer()) throw InputError(key + " must be an integer");
    return v.get<long long>();
  };
  for (const auto& [key, v] : j.items()) {
    if (key == "cutoff") c.cutoff = static_cast<int>(integer(v, key));
    else if (key == "xi_max") c.budget.xi_max = number(v, "xi_max");
    else if (key == "zeta_max") c.budget.zeta_max = number(v, "zeta_max");
    else if (key == "steps") c.steps = static_cast<int>(integer(v, key));
    else if (key == "seed") {
      if (!v.is_number_unsigned()) throw InputError("seed must be a non-negative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (key == "samples") c.samples = static_cast<int>(integer(v, key));
    else if (key == "fd_step") c.fd_step = number(v, "fd_step");
    else if (key == "format") {
      if (!v.is_string()) throw InputError("format must be a string");
      c.format = parse_format(v.get<std::string>());
    } else if (key == "tolerances") {
      if (!v.is_object()) throw InputError("tolerances must be an object");
      for (const auto& [name, t] : v.items()) {
        const double x = number(t, name.c_str());
        if (name == "connection") c.tol.connection = x;
        else if (name == "curvature") c.tol.curvature = x;
        else if (name == "unitarity") c.tol.unitarity = x;
        else if (name == "cutoff") c.tol.cutoff = x;
        else if (name == "span") c.tol.span = x;
        else if (name == "algebra") c.tol.algebra = x;
        else throw InputError("unknown tolerance '" + name + "'");
      }
    } else {
      throw InputError("unknown config key '" + key + "'");
    }
  }
  validate(c);
  return c;
}

void validate(const RunConfig& c) {
  if (c.cutoff < 1 || c.cutoff > 200) throw InputError("cutoff must lie in [1, 200]");
  if (!(c.budget.xi_max >= 0.0) || !(c.budget.zeta_max >= 0.0)) throw InputError("budgets must be non-negative");
  if (c.steps < kMinSteps) throw InputError("steps must be at least " + std::to_string(kMinSteps));
  if (c.samples < 1) throw InputError("samples must be positive");
  if (!(c.fd_step > 0.0) || c.fd_step > 0.1) throw InputError("fd_step must lie in (0, 0.1]");
  for (double t : {c.tol.connection, c.tol.curvature, c.tol.unitarity, c.tol.cutoff, c.tol.span}) {
    if (!(t > 0.0)) throw InputError("tolerances must be positive");
  }
  if (!(c.tol.algebra > 0.0 && c.tol.algebra < 1.0)) throw InputError("algebra tolerance must lie in (0, 1)");
}

Json config_json(const RunConfig& c) {
  return {{"cutoff", c.cutoff},
          {"xi_max", c.budget.xi_max},
          {"zeta_max", c.budget.zeta_max},
          {"steps", c.steps},
          {"seed", c.seed},
          {"format", format_name(c.format)},
          {"samples", c.samples},
          {"fd_step", c.fd_step},
          {"tolerances",
           {{"connection", c.tol.connection},
            {"curvature", c.tol.curvature},
            {"unitarity", c.tol.unitarity},
            {"cutoff", c.tol.cutoff},
            {"span", c.tol.span},
            {"algebra", c.tol.algebra}}}};
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_report(const std::vector<CsvRow>& rows) {
  std::ostringstream out;
  out << "re_xi,im_xi,re_zeta,im_zeta,metric_name,value\n";
  for (const auto& r : rows) {
    out << format_double(r.at.xi.real()) << ',' << format_double(r.at.xi.imag()) << ','
        << format_double(r.at.zeta.real()) << ',' << format_double(r.at.zeta.imag()) << ',' << r.metric << ','
        << format_double(r.value) << '\n';
  }
  return out.str();
}

}  // namespace holo
