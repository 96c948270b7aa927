#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>

#include "holo/holonomy.hpp"
#include "holo/linalg.hpp"

using namespace holo;

namespace {

double max4(const Matrix4& m) { return m.cwiseAbs().maxCoeff(); }

RealTangent chord(const ParamPoint& a, const ParamPoint& b) {
  return {b.xi.real() - a.xi.real(), b.xi.imag() - a.xi.imag(), b.zeta.real() - a.zeta.real(),
          b.zeta.imag() - a.zeta.imag()};
}

ParamPoint lerp(const ParamPoint& a, const ParamPoint& b, double t) {
  return {a.xi + t * (b.xi - a.xi), a.zeta + t * (b.zeta - a.zeta)};
}

// Independent reference: midpoint rule with `per_side` steps on every side of
// a polygon, Eigen's Pade exponential, and an explicit sign.
Matrix4 oracle_transport(const std::vector<ParamPoint>& vertices, int per_side, double sign) {
  Matrix4 g = Matrix4::Identity();
  const auto conn = analytic_connection_provider();
  for (size_t k = 0; k < vertices.size(); ++k) {
    const ParamPoint a = vertices[k], b = vertices[(k + 1) % vertices.size()];
    for (int j = 0; j < per_side; ++j) {
      const ParamPoint p0 = lerp(a, b, double(j) / per_side), p1 = lerp(a, b, double(j + 1) / per_side);
      const Matrix4 x = sign * conn(lerp(p0, p1, 0.5)).along(chord(p0, p1));
      g = Matrix4(x.exp()) * g;
    }
  }
  return g;
}

std::vector<ParamPoint> square_vertices(const ParamPoint& at, Coord u, Coord v, double eps) {
  const ParamPoint b = shifted(at, u, eps);
  return {at, b, shifted(b, v, eps), shifted(at, v, eps)};
}

Matrix4 gamma_of(const LoopPath& loop, int steps = kDefaultSteps) {
  return transport(loop, analytic_connection_provider(), steps);
}

std::vector<LoopPath> loop_suite() {
  std::vector<LoopPath> suite;
  suite.push_back(LoopPath::square({}, Coord::kReZeta, Coord::kImZeta, 0.2));
  suite.push_back(LoopPath::square({0.3, 0.1}, Coord::kReXi, Coord::kImXi, 0.3));
  suite.push_back(LoopPath::square({{0.1, 0.2}, {0.1, 0.0}}, Coord::kImXi, Coord::kReZeta, 0.25));
  suite.push_back(LoopPath::polygon({{0.5, 0.0}, {0.5, 0.3}, {0.0, 0.3}}));
  suite.push_back(LoopPath::polygon({{{0.2, 0.0}, {0.1, 0.0}}, {{0.8, 0.0}, {0.1, 0.0}}, {{0.8, 0.0}, {0.4, 0.0}},
                                     {{0.2, 0.0}, {0.4, 0.0}}}));
  ArcSegment arc;
  arc.center = {0.0, 0.2};
  arc.radius = 0.2;
  arc.start_angle = std::numbers::pi;
  arc.sweep = 2 * std::numbers::pi;
  suite.emplace_back(std::vector<Segment>{arc}, ParamPoint{});
  ArcSegment tilted;
  tilted.center = {{0.3, 0.0}, {0.0, 0.0}};
  tilted.plane = {Coord::kReXi, Coord::kImZeta};
  tilted.radius = 0.3;
  tilted.start_angle = std::numbers::pi;
  tilted.sweep = -2 * std::numbers::pi;
  suite.emplace_back(std::vector<Segment>{tilted}, ParamPoint{});
  for (auto& l : random_small_loops({}, 2, 0.1, 5)) suite.push_back(l);
  suite.push_back(suite[0].then(suite[3]));
  return suite;
}

}  // namespace

TEST(Loop, ValidatesClosureAndJoints) {
  EXPECT_THROW(LoopPath({LineSegment{{}, {0.1, 0.0}}}, ParamPoint{}), LoopError);
  EXPECT_THROW(LoopPath({LineSegment{{}, {0.1, 0.0}}, LineSegment{{0.2, 0.0}, {}}}, ParamPoint{}), LoopError);
  EXPECT_NO_THROW(LoopPath({LineSegment{{}, {0.1, 0.0}}, LineSegment{{0.1, 0.0}, {}}}, ParamPoint{}));
  const auto sq = LoopPath::square({}, Coord::kReXi, Coord::kImXi, 0.1);
  EXPECT_NEAR(sq.length(), 0.4, 1e-15);
  EXPECT_THROW(sq.then(LoopPath::constant({0.1, 0.0})), LoopError);
}

TEST(Loop, ArcLengthParametrisation) {
  const auto sq = LoopPath::square({}, Coord::kReXi, Coord::kImXi, 0.1);
  EXPECT_LT(distance(sq.at_length(0.15), {cplx(0.1, 0.05), 0.0}), 1e-15);
  EXPECT_LT(distance(sq.at_length(sq.length()), {}), 1e-15);
  const auto r = sq.reversed();
  EXPECT_LT(distance(r.at_length(0.05), {cplx(0.0, 0.05), 0.0}), 1e-15);
  const auto [xi, zeta] = loop_suite()[5].extent();
  EXPECT_NEAR(zeta, 0.4, 1e-6);
  EXPECT_EQ(xi, 0.0);
}

TEST(Transport, ConstantLoopIsExactlyTheIdentity) {
  const auto g = gamma_of(LoopPath::constant({0.3, 0.2}));
  EXPECT_TRUE(g == Matrix4::Identity());
  const auto r = holonomy(LoopPath::constant(), analytic_connection_provider());
  EXPECT_TRUE(r.gamma == Matrix4::Identity());
  EXPECT_EQ(r.error_estimate, 0.0);
}

TEST(Transport, UnitaryOnTheSuite) {
  for (const auto& loop : loop_suite()) EXPECT_LT(unitarity_defect(gamma_of(loop)), 1e-9);
}

TEST(Transport, ReversedLoopGivesTheInverse) {
  for (const auto& loop : loop_suite()) {
    EXPECT_LT(max4(gamma_of(loop.reversed()) * gamma_of(loop) - Matrix4::Identity()), 1e-9);
  }
}

TEST(Transport, MatchesTheIndependentIntegratorAndFixesTheSign) {
  const double eps = 0.2;
  const auto verts = square_vertices({}, Coord::kReZeta, Coord::kImZeta, eps);
  const Matrix4 lib = gamma_of(LoopPath::square({}, Coord::kReZeta, Coord::kImZeta, eps), 4096);
  const Matrix4 ref = oracle_transport(verts, 1024, kTransportSign);
  const Matrix4 flipped = oracle_transport(verts, 1024, -kTransportSign);
  EXPECT_LT(max4(lib - ref), 1e-10);
  EXPECT_GT(max4(lib - flipped), 1e-2);
  EXPECT_EQ(kTransportSign, -1.0);
}

TEST(Transport, ZetaSquareRegression) {
  // log Gamma ~ -eps^2 F(Re zeta, Im zeta) = -4 i eps^2 (2B - 1) at the origin.
  const double eps = 0.05;
  const Matrix4 l = log_unitary(gamma_of(LoopPath::square({}, Coord::kReZeta, Coord::kImZeta, eps)));
  const Matrix4 lead = cplx(0.0, -4.0 * eps * eps) * hat_u1();
  EXPECT_LT(max4(l - lead), 8 * eps * eps * eps);
  EXPECT_NEAR(l(1, 1).imag(), -0.0100111, 5e-7);
  EXPECT_NEAR(l(2, 2).imag(), -0.0100111, 5e-7);
}

TEST(Transport, StepConvergenceIsSecondOrder) {
  for (const auto& loop : {loop_suite()[0], loop_suite()[4], loop_suite()[5], loop_suite()[8]}) {
    const Matrix4 ref = gamma_of(loop, 4096);
    const double e1 = max4(gamma_of(loop, 128) - ref);
    const double e2 = max4(gamma_of(loop, 256) - ref);
    EXPECT_GE(e1 / e2, 3.0);
    EXPECT_LE(e1 / e2, 5.0);
  }
}

TEST(Transport, CollinearSplitDoesNotChangeTheResult) {
  const auto once = LoopPath::polygon({{0.4, 0.0}, {0.4, 0.3}});
  const auto split = LoopPath::polygon({{0.2, 0.0}, {0.4, 0.0}, {0.4, 0.15}, {0.4, 0.3}, {0.2, 0.15}});
  EXPECT_LT(max4(gamma_of(once) - gamma_of(split)), 1e-10);
}

TEST(Transport, SmallSquaresFollowTheCurvature) {
  const ParamPoint corners[] = {{}, {{0.3, -0.2}, {0.1, 0.25}}};
  const auto curv = analytic_curvature_provider();
  for (const auto& at : corners) {
    for (int u = 0; u < 4; ++u) {
      for (int v = u + 1; v < 4; ++v) {
        std::vector<double> err;
        for (double eps : {0.1, 0.05, 0.025}) {
          const auto loop = LoopPath::square(at, Coord(u), Coord(v), eps);
          const Matrix4 l = log_unitary(gamma_of(loop, 2048));
          const Matrix4 pred = -eps * eps * curv(at).evaluate(unit_tangent(Coord(u)), unit_tangent(Coord(v)));
          err.push_back(max4(l - pred));
        }
        const double slope = std::log(err[0] / err[2]) / std::log(4.0);
        EXPECT_GE(slope, 2.7) << u << v;
      }
    }
  }
}

TEST(Holonomy, ErrorEstimateBudgetAndSteps) {
  const auto prov = analytic_connection_provider();
  const auto loop = loop_suite()[5];
  const auto r = holonomy(loop, prov, 256);
  EXPECT_EQ(r.steps, 256);
  EXPECT_GT(r.error_estimate, 0.0);
  EXPECT_NEAR(r.error_estimate, max4(r.gamma - gamma_of(loop, 8192)), 0.5 * r.error_estimate);
  EXPECT_THROW(holonomy(loop, prov, 4), std::invalid_argument);
  EXPECT_THROW(holonomy(loop, prov, 256, Budget{1.0, 0.3}), BudgetExceeded);
}

TEST(Holonomy, ComposeAndReverse) {
  const auto prov = analytic_connection_provider();
  const auto a = holonomy(loop_suite()[0], prov);
  const auto b = holonomy(loop_suite()[3], prov);
  const auto c = holonomy(loop_suite()[4], prov);
  EXPECT_LT(max4(compose(compose(c, b), a).gamma - compose(c, compose(b, a)).gamma), 1e-14);
    // same path, different step layout: agreement at the discretisation level
  const Matrix4 joined = gamma_of(loop_suite()[0].then(loop_suite()[3]), 8192);
  EXPECT_LT(max4(gamma_of(loop_suite()[3], 4096) * gamma_of(loop_suite()[0], 4096) - joined), 1e-8);
  EXPECT_LT(max4(compose(reverse(a), a).gamma - Matrix4::Identity()), 1e-13);
  const auto off = holonomy(LoopPath::constant({0.1, 0.0}), prov);
  EXPECT_THROW(compose(a, off), std::invalid_argument);
}

TEST(Holonomy, ApplyGatePreservesNorm) {
  const auto r = holonomy(loop_suite()[4], analytic_connection_provider());
  const Vector4 x(0.5, cplx(0.0, 0.5), -0.5, 0.5);
  EXPECT_NEAR(apply_gate(r, x).norm(), 1.0, 1e-12);
}

TEST(Holonomy, ZetaLoopAtTheOriginLeavesTheVacuumAlmostAlone) {
  // The zeta curvature is diagonal, so |00> only acquires O(eps^3) admixture.
  const auto prov = analytic_connection_provider();
  double previous = 0.0;
  for (double eps : {0.1, 0.05}) {
    const auto r = holonomy(LoopPath::square({}, Coord::kReZeta, Coord::kImZeta, eps), prov);
    const Vector4 out = apply_gate(r, Vector4::Unit(0));
    const double leak = std::sqrt(std::max(0.0, 1.0 - std::norm(out(0))));
    EXPECT_LT(leak, 8 * eps * eps * eps);
    if (previous > 0.0) EXPECT_GT(previous / leak, 6.0);
    previous = leak;
  }
}

TEST(Algebra, LieClosureOfKnownSets) {
  const auto& h = hat_matrices();
  const cplx i(0.0, 1.0);
  EXPECT_EQ(lie_closure({Matrix4(h.e - h.f), Matrix4(i * (h.e + h.f))}, 1e-8).dimension, 3);
  EXPECT_EQ(lie_closure({Matrix4(i * hat_u1())}, 1e-8).dimension, 1);
  EXPECT_EQ(lie_closure({Matrix4(h.c - h.a), Matrix4(i * (h.c + h.a))}, 1e-8).dimension, 3);
  const auto r = lie_closure({Matrix4(h.e - h.f), Matrix4(2.0 * (h.e - h.f))}, 1e-8);
  EXPECT_EQ(r.dimension, 1);
  EXPECT_EQ(r.basis.size(), 1u);
}

TEST(Algebra, DefaultGridGivesFourStableDimensions) {
  const auto grid = default_algebra_grid();
  for (double tol : {1e-6, 1e-7, 1e-8, 1e-9, 1e-10}) {
    EXPECT_EQ(holonomy_algebra_dimension(analytic_curvature_provider(), grid, tol), 4) << tol;
  }
  const auto rep = holonomy_algebra(analytic_curvature_provider(), grid, 1e-8);
  EXPECT_GT(rep.gap_ratio, 1e6);
}

TEST(Algebra, RestrictedGridIsSmaller) {
  EXPECT_LE(holonomy_algebra_dimension(analytic_curvature_provider(), restricted_algebra_grid(), 1e-8), 3);
}

TEST(Algebra, TooFewSamplesThrow) {
  const auto grid = default_algebra_grid();
  const std::vector<ParamPoint> few(grid.begin(), grid.begin() + 3);
  EXPECT_THROW(holonomy_algebra_dimension(analytic_curvature_provider(), few, 1e-8), std::invalid_argument);
}

TEST(Algebra, LoopLogarithmsLeaveTheCurvatureSpan) {
  // Transport from the origin conjugates curvature values by holonomies that
  // contain the |00>,|11> generators of A_zeta, so loop logs are not confined
  // to span{E, F, H, 2B - 1}. Observed dimension: 7.
  const auto loops = random_small_loops({}, 50, 0.05, 0);
  const auto rep = holonomy_algebra_from_loops(analytic_connection_provider(), loops, 256, 1e-6);
  EXPECT_EQ(rep.dimension, 7);
  const auto away = holonomy(LoopPath::polygon({{0.0, 0.2}, {0.0, cplx(0.2, 0.2)}, {0.0, cplx(0.0, 0.2)}}),
                             analytic_connection_provider());
  EXPECT_GT(std::abs(away.gamma(0, 3)), 1e-3);
}
