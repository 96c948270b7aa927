#include "holo/holonomy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "holo/linalg.hpp"

namespace holo {

namespace {

constexpr cplx kI(0.0, 1.0);

RealTangent to_real(const ParamPoint& p) { return {p.xi.real(), p.xi.imag(), p.zeta.real(), p.zeta.imag()}; }

ParamPoint from_real(const RealTangent& x) { return {{x[0], x[1]}, {x[2], x[3]}}; }

bool near(const ParamPoint& a, const ParamPoint& b) { return distance(a, b) <= kClosureTol; }

// e^X for a 4x4 anti-hermitian X, through the eigenbasis of the hermitian iX.
Matrix4 exp4(const Matrix4& x) {
  const Matrix4 h = kI * x;
  const Eigen::SelfAdjointEigenSolver<Matrix4> eig(0.5 * (h + h.adjoint()));
  const Eigen::Vector4cd phases = (-kI * eig.eigenvalues().cast<cplx>()).array().exp();
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

using RealVec = Eigen::Matrix<double, 32, 1>;

RealVec vectorize(const Matrix4& m) {
  RealVec v;
  for (int k = 0; k < 16; ++k) {
    v(2 * k) = m(k / 4, k % 4).real();
    v(2 * k + 1) = m(k / 4, k % 4).imag();
  }
  return v;
}

Matrix4 unvectorize(const RealVec& v) {
  Matrix4 m;
  for (int k = 0; k < 16; ++k) m(k / 4, k % 4) = cplx(v(2 * k), v(2 * k + 1));
  return m;
}

struct SpanSvd {
  Eigen::MatrixXd u;
  Eigen::VectorXd sigma;
  int rank = 0;
};

SpanSvd span_svd(const std::vector<RealVec>& columns, double tol) {
  SpanSvd out;
  if (columns.empty()) return out;
  Eigen::MatrixXd g(32, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) g.col(k) = columns[k];
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(g, Eigen::ComputeThinU);
  out.sigma = svd.singularValues();
  out.u = svd.matrixU();
  const double top = out.sigma.size() ? out.sigma(0) : 0.0;
  if (top == 0.0) return out;
  for (Eigen::Index k = 0; k < out.sigma.size(); ++k) {
    if (out.sigma(k) > tol * top) ++out.rank;
  }
  return out;
}

}  // namespace

double distance(const ParamPoint& a, const ParamPoint& b) {
  return std::sqrt(std::norm(a.xi - b.xi) + std::norm(a.zeta - b.zeta));
}

ParamPoint segment_start(const Segment& s) { return segment_point(s, 0.0); }

ParamPoint segment_end(const Segment& s) { return segment_point(s, 1.0); }

ParamPoint segment_point(const Segment& s, double t) {
  if (const auto* line = std::get_if<LineSegment>(&s)) {
    if (t == 0.0) return line->from;
    if (t == 1.0) return line->to;
    return {line->from.xi + t * (line->to.xi - line->from.xi),
            line->from.zeta + t * (line->to.zeta - line->from.zeta)};
  }
  const auto& arc = std::get<ArcSegment>(s);
  const double theta = arc.start_angle + t * arc.sweep;
  RealTangent x = to_real(arc.center);
  x[static_cast<int>(arc.plane.first)] += arc.radius * std::cos(theta);
  x[static_cast<int>(arc.plane.second)] += arc.radius * std::sin(theta);
  return from_real(x);
}

// Unit tangent at local parameter t (zero for degenerate segments).
RealTangent segment_direction(const Segment& s, double t) {
  RealTangent d{0, 0, 0, 0};
  if (const auto* line = std::get_if<LineSegment>(&s)) {
    const RealTangent a = to_real(line->from), b = to_real(line->to);
    for (int c = 0; c < 4; ++c) d[c] = b[c] - a[c];
  } else {
    const auto& arc = std::get<ArcSegment>(s);
    const double theta = arc.start_angle + t * arc.sweep;
    const double w = arc.radius * arc.sweep;
    d[static_cast<int>(arc.plane.first)] = -w * std::sin(theta);
    d[static_cast<int>(arc.plane.second)] = w * std::cos(theta);
  }
  double n = 0.0;
  for (double x : d) n += x * x;
  n = std::sqrt(n);
  if (n > 0.0)
    for (double& x : d) x /= n;
  return d;
}

double segment_length(const Segment& s) {
  if (const auto* line = std::get_if<LineSegment>(&s)) return distance(line->from, line->to);
  const auto& arc = std::get<ArcSegment>(s);
  return arc.radius * std::abs(arc.sweep);
}

Segment reversed_segment(const Segment& s) {
  if (const auto* line = std::get_if<LineSegment>(&s)) return LineSegment{line->to, line->from};
  auto arc = std::get<ArcSegment>(s);
  arc.start_angle += arc.sweep;
  arc.sweep = -arc.sweep;
  return arc;
}

LoopPath::LoopPath(std::vector<Segment> segments, ParamPoint base) : segments_(std::move(segments)), base_(base) {
  if (!base_.finite()) throw LoopError("loop base is not finite");
  ParamPoint cursor = base_;
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    const auto& s = segments_[k];
    if (const auto* arc = std::get_if<ArcSegment>(&s)) {
      if (arc->plane.first == arc->plane.second) throw LoopError("arc plane needs two distinct coordinates");
      if (!(arc->radius >= 0.0) || !std::isfinite(arc->radius) || !std::isfinite(arc->sweep) ||
          !std::isfinite(arc->start_angle)) {
        throw LoopError("arc radius/angles must be finite, radius non-negative");
      }
    }
    const ParamPoint start = segment_start(s);
    if (!start.finite() || !segment_end(s).finite()) throw LoopError("segment endpoints are not finite");
    if (!near(start, cursor)) {
      throw LoopError("segment " + std::to_string(k) + " does not start where the previous one ends");
    }
    cursor = segment_end(s);
    offsets_.push_back(length_);
    length_ += segment_length(s);
  }
  if (!near(cursor, base_)) throw LoopError("loop is not closed at its base point");

  // Joints where the direction jumps; smooth joins (collinear splits, arcs
  // continuing tangentially) are not kinks.
  std::optional<RealTangent> incoming;
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    if (segment_length(segments_[k]) == 0.0) continue;
    const RealTangent out = segment_direction(segments_[k], 0.0);
    if (incoming) {
      double jump = 0.0;
      for (int c = 0; c < 4; ++c) jump = std::max(jump, std::abs(out[c] - (*incoming)[c]));
      if (jump > kKinkTol) kinks_.push_back(offsets_[k]);
    }
    incoming = segment_direction(segments_[k], 1.0);
  }
}

LoopPath LoopPath::constant(ParamPoint base) { return LoopPath({}, base); }

LoopPath LoopPath::polygon(const std::vector<ParamPoint>& vertices, ParamPoint base) {
  std::vector<Segment> segs;
  ParamPoint prev = base;
  for (const auto& v : vertices) {
    segs.emplace_back(LineSegment{prev, v});
    prev = v;
  }
  segs.emplace_back(LineSegment{prev, base});
  return LoopPath(std::move(segs), base);
}

LoopPath LoopPath::square(const ParamPoint& at, Coord u, Coord v, double eps) {
  const ParamPoint p1 = shifted(at, u, eps);
  const ParamPoint p2 = shifted(p1, v, eps);
  const ParamPoint p3 = shifted(at, v, eps);
  return LoopPath({LineSegment{at, p1}, LineSegment{p1, p2}, LineSegment{p2, p3}, LineSegment{p3, at}}, at);
}

ParamPoint LoopPath::at_length(double s) const {
  if (segments_.empty()) return base_;
  s = std::clamp(s, 0.0, length_);
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), s);
  const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - offsets_.begin() - 1));
  const double len = segment_length(segments_[k]);
  if (len == 0.0) return segment_start(segments_[k]);
  return segment_point(segments_[k], std::clamp((s - offsets_[k]) / len, 0.0, 1.0));
}

LoopPath LoopPath::reversed() const {
  std::vector<Segment> segs;
  segs.reserve(segments_.size());
  for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) segs.push_back(reversed_segment(*it));
  return LoopPath(std::move(segs), base_);
}

LoopPath LoopPath::then(const LoopPath& next) const {
  if (!near(base_, next.base_)) throw LoopError("cannot concatenate loops with different base points");
  std::vector<Segment> segs = segments_;
  segs.insert(segs.end(), next.segments_.begin(), next.segments_.end());
  return LoopPath(std::move(segs), base_);
}

std::pair<double, double> LoopPath::extent() const {
  double xi = std::abs(base_.xi);
  double zeta = std::abs(base_.zeta);
  auto visit = [&](const ParamPoint& p) {
    xi = std::max(xi, std::abs(p.xi));
    zeta = std::max(zeta, std::abs(p.zeta));
  };
  for (const auto& s : segments_) {
    // |xi| and |zeta| are convex along a line, so endpoints suffice there.
    const int samples = std::holds_alternative<LineSegment>(s) ? 1 : 1024;
    for (int k = 0; k <= samples; ++k) visit(segment_point(s, double(k) / samples));
  }
  return {xi, zeta};
}

std::vector<ParamPoint> sample_budget(const Budget& budget, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto disc = [&](double radius) {
    return std::polar(radius * std::sqrt(unit(rng)), 2 * std::numbers::pi * unit(rng));
  };
  std::vector<ParamPoint> points;
  for (int k = 0; k < n; ++k) {
    const cplx xi = disc(budget.xi_max);
    points.push_back({xi, disc(budget.zeta_max)});
  }
  return points;
}

Matrix4 transport(const LoopPath& loop, const ConnectionProvider& provider, int steps) {
  if (steps < 1) throw std::invalid_argument("transport: steps must be positive");
  Matrix4 gamma = Matrix4::Identity();
  const double total = loop.length();
  if (total == 0.0) return gamma;
  // Uniform arc-length grid, refined at kinks so that no chord cuts a corner.
  std::vector<double> knots(steps + 1);
  for (int k = 0; k <= steps; ++k) knots[k] = total * k / steps;
  const double merge = 1e-12 * total;
  for (double s : loop.kinks()) {
    const auto it = std::lower_bound(knots.begin(), knots.end(), s);
    const bool dup = (it != knots.end() && *it - s <= merge) || (it != knots.begin() && s - *(it - 1) <= merge);
    if (!dup) knots.insert(it, s);
  }
  RealTangent prev = to_real(loop.at_length(0.0));
  for (std::size_t k = 1; k < knots.size(); ++k) {
    const RealTangent next = to_real(loop.at_length(knots[k]));
    RealTangent delta;
    for (int c = 0; c < 4; ++c) delta[c] = next[c] - prev[c];
    prev = next;
    if (delta == RealTangent{0, 0, 0, 0}) continue;
    const ParamPoint mid = loop.at_length(0.5 * (knots[k - 1] + knots[k]));
    gamma = exp4(kTransportSign * provider(mid).along(delta)) * gamma;
  }
  return gamma;
}

HolonomyResult holonomy(const LoopPath& loop, const ConnectionProvider& provider, int steps, const Budget& budget) {
  if (steps < kMinSteps) throw std::invalid_argument("holonomy: need at least " + std::to_string(kMinSteps) + " steps");
  const auto [xi, zeta] = loop.extent();
  constexpr double slack = 1e-12;
  if (xi > budget.xi_max + slack || zeta > budget.zeta_max + slack) {
    throw BudgetExceeded("loop leaves the parameter budget (|xi| <= " + std::to_string(budget.xi_max) +
                         ", |zeta| <= " + std::to_string(budget.zeta_max) + ")");
  }
  HolonomyResult r;
  r.base = loop.base();
  r.steps = steps;
  if (loop.length() == 0.0) return r;
  r.gamma = transport(loop, provider, steps);
  const Matrix4 fine = transport(loop, provider, 2 * steps);
  // midpoint rule: error(N) ~ 4/3 |Gamma_N - Gamma_2N|
  r.error_estimate = (4.0 / 3.0) * (r.gamma - fine).cwiseAbs().maxCoeff();
  r.flagged = r.error_estimate > kFlagTol;
  return r;
}

Vector4 apply_gate(const HolonomyResult& result, const Vector4& x) { return result.gamma * x; }

HolonomyResult compose(const HolonomyResult& second, const HolonomyResult& first) {
  if (!near(second.base, first.base)) throw std::invalid_argument("compose: holonomies have different base points");
  HolonomyResult r;
  r.gamma = second.gamma * first.gamma;
  r.steps = std::min(second.steps, first.steps);
  r.error_estimate = second.error_estimate + first.error_estimate;
  r.base = first.base;
  r.flagged = r.error_estimate > kFlagTol;
  return r;
}

HolonomyResult reverse(const HolonomyResult& r) {
  HolonomyResult out = r;
  out.gamma = r.gamma.adjoint();
  return out;
}

AlgebraReport lie_closure(const std::vector<Matrix4>& generators, double tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("lie_closure: tol must lie in (0, 1)");
  std::vector<RealVec> columns;
  columns.reserve(generators.size());
  for (const auto& g : generators) columns.push_back(vectorize(g));

  SpanSvd svd = span_svd(columns, tol);
  for (int round = 0; round < 16; ++round) {
    std::vector<RealVec> next;
    std::vector<Matrix4> basis;
    for (int k = 0; k < svd.rank; ++k) {
      next.push_back(svd.u.col(k));
      basis.push_back(unvectorize(svd.u.col(k)));
    }
    for (int i = 0; i < svd.rank; ++i) {
      for (int j = i + 1; j < svd.rank; ++j) next.push_back(vectorize(basis[i] * basis[j] - basis[j] * basis[i]));
    }
    const int before = svd.rank;
    svd = span_svd(next, tol);
    if (svd.rank == before) break;
  }

  AlgebraReport report;
  report.dimension = svd.rank;
  const double top = svd.sigma.size() ? svd.sigma(0) : 0.0;
  for (Eigen::Index k = 0; k < svd.sigma.size(); ++k) report.singular_values.push_back(top > 0 ? svd.sigma(k) / top : 0);
  const auto d = static_cast<std::size_t>(report.dimension);
  if (d == 0 || d >= report.singular_values.size() || report.singular_values[d] == 0.0) {
    report.gap_ratio = std::numeric_limits<double>::infinity();
  } else {
    report.gap_ratio = report.singular_values[d - 1] / report.singular_values[d];
  }
  for (int k = 0; k < svd.rank; ++k) report.basis.push_back(unvectorize(svd.u.col(k)));
  return report;
}

AlgebraReport holonomy_algebra(const CurvatureProvider& curvature, const std::vector<ParamPoint>& samples,
                               double tol) {
  if (samples.empty()) throw std::invalid_argument("holonomy_algebra: no sample points");
  if (samples.size() < static_cast<std::size_t>(kMinAlgebraSamples)) {
    throw std::invalid_argument("holonomy_algebra: need at least " + std::to_string(kMinAlgebraSamples) +
                                " sample points");
  }
  std::vector<Matrix4> gens;
  for (const auto& p : samples) {
    const CurvatureSample f = curvature(p);
    for (int u = 0; u < 4; ++u) {
      for (int v = u + 1; v < 4; ++v) gens.push_back(f.evaluate(unit_tangent(Coord(u)), unit_tangent(Coord(v))));
    }
  }
  return lie_closure(gens, tol);
}

int holonomy_algebra_dimension(const CurvatureProvider& curvature, const std::vector<ParamPoint>& samples,
                               double tol) {
  return holonomy_algebra(curvature, samples, tol).dimension;
}

AlgebraReport holonomy_algebra_from_loops(const ConnectionProvider& provider, const std::vector<LoopPath>& loops,
                                          int steps, double tol) {
  if (loops.empty()) throw std::invalid_argument("holonomy_algebra_from_loops: no loops");
  std::vector<Matrix4> logs;
  for (const auto& loop : loops) logs.push_back(log_unitary(Matrix(transport(loop, provider, steps))));
  return lie_closure(logs, tol);
}

std::vector<LoopPath> random_small_loops(const Budget& budget, int n, double eps, std::uint64_t seed) {
  const double reach = std::sqrt(2.0) * eps;
  const Budget inner{std::max(0.0, budget.xi_max - reach), std::max(0.0, budget.zeta_max - reach)};
  const auto corners = sample_budget(inner, n, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<int> pick(0, 5);
  constexpr std::array<std::pair<int, int>, 6> planes = {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  std::vector<LoopPath> loops;
  for (const auto& c : corners) {
    const auto [u, v] = planes[pick(rng)];
    const LoopPath square = LoopPath::square(c, Coord(u), Coord(v), eps);
    std::vector<Segment> segs = {LineSegment{{}, c}};
    segs.insert(segs.end(), square.segments().begin(), square.segments().end());
    segs.emplace_back(LineSegment{c, {}});
    loops.emplace_back(std::move(segs), ParamPoint{});
  }
  return loops;
}

std::vector<ParamPoint> default_algebra_grid(const Budget& budget) {
  std::vector<ParamPoint> grid;
  for (int k = 0; k < 16; ++k) {
    const double rx = 0.9 * budget.xi_max * ((k % 4) + 1) / 4.0;
    const double rz = 0.9 * budget.zeta_max * ((k / 4) + 1) / 4.0;
    grid.push_back({std::polar(rx, 0.7 * k + 0.3), std::polar(rz, 1.3 * k + 0.1)});
  }
  return grid;
}

std::vector<ParamPoint> restricted_algebra_grid(const Budget& budget) {
  std::vector<ParamPoint> grid;
  for (int k = -4; k <= 4; ++k) grid.push_back({cplx(0.9 * budget.xi_max * k / 4.0, 0.0), 0.0});
  return grid;
}

}  // namespace holo
