/*
 * holonomy.hpp — loops in (xi, zeta) space, the path-ordered transport of the
 * frame connection, and holonomy-algebra estimation.
 *
 * Conventions
 *   - Steps are uniform in arc length; corners of the path are added as
 *     extra grid points, so the midpoint rule stays second order on
 *     polygons and a collinear split of a segment changes nothing.
 *   - Path ordering: later pieces of the loop act by left multiplication,
 *     Gamma = M_N ... M_2 M_1.
 *   - Each factor is M_k = exp(kTransportSign * A(gamma(t_k)) [dgamma_k]) with
 *     the 1-form evaluated at the midpoint and contracted with the chord.
 *     With this sign the frame is parallel-transported (d/dt c = -A c) and a
 *     small loop spanned by tangents (u, v) of area a satisfies
 *     log Gamma = -a F(u, v) + O(a^{3/2}).
 */
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "holo/connection.hpp"

namespace holo {

/// Sign in front of the connection in every transport factor, frozen against
/// a 4096-step reference on a zeta-plane square (see the regression test).
inline constexpr double kTransportSign = -1.0;

inline constexpr int kMinSteps = 8;
inline constexpr int kDefaultSteps = 512;
inline constexpr double kClosureTol = 1e-12;
inline constexpr double kFlagTol = 1e-7;
/// Direction jump (max component of the unit tangents) that marks a corner.
inline constexpr double kKinkTol = 1e-9;

struct LineSegment {
  ParamPoint from;
  ParamPoint to;
};

/// Circle arc in the plane spanned by two real coordinates:
/// center + radius (cos(theta) e_u + sin(theta) e_v), theta from start_angle
/// to start_angle + sweep.
struct ArcSegment {
  ParamPoint center;
  std::pair<Coord, Coord> plane{Coord::kReZeta, Coord::kImZeta};
  double radius = 0.0;
  double start_angle = 0.0;
  double sweep = 0.0;
};

using Segment = std::variant<LineSegment, ArcSegment>;

ParamPoint segment_start(const Segment& s);
ParamPoint segment_end(const Segment& s);
/// Point at local parameter t in [0, 1].
ParamPoint segment_point(const Segment& s, double t);
double segment_length(const Segment& s);
Segment reversed_segment(const Segment& s);

/// Euclidean distance in real coordinates.
double distance(const ParamPoint& a, const ParamPoint& b);

class LoopError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class LoopPath {
 public:
  /// Throws LoopError unless consecutive segments join and the loop starts and
  /// ends at base (within kClosureTol).
  LoopPath(std::vector<Segment> segments, ParamPoint base = {});

  /// The constant loop at base.
  static LoopPath constant(ParamPoint base = {});
  /// Closed polygon base -> v_1 -> ... -> v_k -> base.
  static LoopPath polygon(const std::vector<ParamPoint>& vertices, ParamPoint base = {});
  /// Square of side eps at the corner `at`, traversed e_u, e_v, -e_u, -e_v.
  static LoopPath square(const ParamPoint& at, Coord u, Coord v, double eps);

  const std::vector<Segment>& segments() const { return segments_; }
  const ParamPoint& base() const { return base_; }
  double length() const { return length_; }

  /// Point at arc length s in [0, length()].
  ParamPoint at_length(double s) const;
  /// Same loop traversed backwards.
  LoopPath reversed() const;
  /// This loop followed by `next` (same base required).
  LoopPath then(const LoopPath& next) const;

  /// Arc-length positions of corners (joints where the direction jumps).
  const std::vector<double>& kinks() const { return kinks_; }

  /// Largest |xi| and |zeta| reached (sampled densely on arcs).
  std::pair<double, double> extent() const;

 private:
  std::vector<Segment> segments_;
  ParamPoint base_;
  std::vector<double> offsets_;  // arc length at the start of each segment
  std::vector<double> kinks_;
  double length_ = 0.0;
};

struct Budget {
  double xi_max = 1.0;
  double zeta_max = 0.5;
};

/// n points with xi and zeta drawn uniformly from the discs of the budget.
std::vector<ParamPoint> sample_budget(const Budget& budget, int n, std::uint64_t seed);

class BudgetExceeded : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct HolonomyResult {
  Matrix4 gamma = Matrix4::Identity();
  int steps = 0;
  double error_estimate = 0.0;
  ParamPoint base;
  bool flagged = false;  // error_estimate above kFlagTol
};

/// Path-ordered product at a fixed resolution (no error estimate).
Matrix4 transport(const LoopPath& loop, const ConnectionProvider& provider, int steps);

/// Transport at `steps` with a Richardson error bar from a 2 * steps run.
HolonomyResult holonomy(const LoopPath& loop, const ConnectionProvider& provider, int steps = kDefaultSteps,
                        const Budget& budget = {});

Vector4 apply_gate(const HolonomyResult& result, const Vector4& x);
/// `second` after `first`: gamma = second.gamma * first.gamma.
HolonomyResult compose(const HolonomyResult& second, const HolonomyResult& first);
HolonomyResult reverse(const HolonomyResult& r);

/// Real-linear dimension tools on anti-hermitian 4x4 matrices.
struct AlgebraReport {
  int dimension = 0;
  std::vector<double> singular_values;  // of the closed span, descending, normalised to the largest
  double gap_ratio = 0.0;               // sigma_dim / sigma_{dim + 1} (inf when full)
  std::vector<Matrix4> basis;           // orthonormal (Frobenius) basis of the span
};

inline constexpr int kMinAlgebraSamples = 8;

/// Rank of the real span of `generators` closed under commutators.
AlgebraReport lie_closure(const std::vector<Matrix4>& generators, double tol);

/// Ambrose–Singer estimate from curvature values at the sample points. The
/// curvature is evaluated on all pairs of real coordinate directions, which
/// gives anti-hermitian matrices spanning the same real space as the wedge
/// coefficients.
AlgebraReport holonomy_algebra(const CurvatureProvider& curvature, const std::vector<ParamPoint>& samples,
                               double tol);
int holonomy_algebra_dimension(const CurvatureProvider& curvature, const std::vector<ParamPoint>& samples,
                               double tol);

/// Same estimate from logarithms of loop holonomies.
AlgebraReport holonomy_algebra_from_loops(const ConnectionProvider& provider, const std::vector<LoopPath>& loops,
                                          int steps, double tol);

/// n loops at the origin: a straight stem out to a random corner, a square of
/// side eps in a random coordinate plane there, and the stem back. Corners
/// are drawn from the budget shrunk so that every square stays inside it.
std::vector<LoopPath> random_small_loops(const Budget& budget, int n, double eps, std::uint64_t seed);

/// The default sample grid of the budget box (generic points).
std::vector<ParamPoint> default_algebra_grid(const Budget& budget = {});
/// Points with zeta = 0 and real xi.
std::vector<ParamPoint> restricted_algebra_grid(const Budget& budget = {});

}  // namespace holo
