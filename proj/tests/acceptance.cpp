// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned here.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "holo/coherent.hpp"
#include "holo/connection.hpp"
#include "holo/holonomy.hpp"
#include "holo/linalg.hpp"
#include "holo/synth.hpp"

using namespace holo;

namespace {

double max4(const Matrix4& m) { return m.cwiseAbs().maxCoeff(); }

double max_error(const CurvatureSample& a, const CurvatureSample& b) {
  double e = 0.0;
  for (auto w : kAllWedges) e = std::max(e, max4(a[w] - b[w]));
  return e;
}

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void run(int id, const char* title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("[%s] criterion %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<int> low_lying(const FockSpace& s, int max_total) {
  std::vector<int> out;
  for (int i = 0; i < s.dim(); ++i) {
    auto [a, b] = s.occupation(i);
    if (a + b <= max_total) out.push_back(i);
  }
  return out;
}

// Box corners and edge midpoints plus uniform draws from the budget discs.
std::vector<ParamPoint> box_points(const Budget& b, int n, std::uint64_t seed) {
  std::vector<ParamPoint> pts = {{cplx(0.0, b.xi_max), b.zeta_max},
                                 {b.xi_max, cplx(0.0, b.zeta_max)},
                                 {0.0, b.zeta_max},
                                 {b.xi_max, 0.0}};
  for (const auto& p : sample_budget(b, n - int(pts.size()), seed)) pts.push_back(p);
  return pts;
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

int main() {
  const Budget box;  // |xi| <= 1, |zeta| <= 0.5
  const auto analytic = analytic_connection_provider();

  run(1, "disentangling", [&] {
    const FockSpace s(24);
    double u_dev = 0.0, v_dev = 0.0;
    for (const auto& p : sample_budget(box, 50, 101)) {
      // U: complete beam-splitter shells n1 + n2 <= cutoff (the incomplete
      // shells carry no su(2) representation).
      u_dev = std::max(u_dev, shell_deviation(u_disentangled(s, p.xi), u_op(s, p.xi), s.cutoff()));
      v_dev = std::max(v_dev, column_deviation(v_disentangled(s, p.zeta), v_op(s, p.zeta), 4));
    }
    return Outcome{u_dev < 1e-9 && v_dev < 1e-8,
                   fmt("max |U_dis - U| = %.3g (tol 1e-9), max ||(V_dis - V)|n>|| = %.3g (tol 1e-8), n_max = 24",
                       u_dev, v_dev)};
  });

  run(2, "connection", [&] {
    const FockSpace s(kDefaultCutoff);
    double err = 0.0, anti = 0.0;
    for (const auto& p : box_points(box, 20, 102)) {
      const auto a = connection_analytic(p);
      const auto n = connection_numeric(s, p);
      err = std::max({err, max4(a.a_xi - n.a_xi), max4(a.a_zeta - n.a_zeta)});
      for (int c = 0; c < 4; ++c) {
        const Matrix4 m = n.along(unit_tangent(Coord(c)));
        anti = std::max(anti, max4(m + m.adjoint()));
      }
    }
    return Outcome{err < 1e-8 && anti < 1e-10,
                   fmt("analytic vs numeric %.3g (tol 1e-8), anti-hermiticity %.3g (tol 1e-10), 20 points, n_max = %d",
                       err, anti, kDefaultCutoff)};
  });

  run(3, "closed-form pullbacks", [&] {
    const FockSpace s(72);
    const auto states = low_lying(s, 4);
    double err = 0.0;
    for (const auto& p : sample_budget(box, 10, 103)) {
      const auto cols = pullback_columns(s, p, states);
      err = std::max(err, max_abs(Matrix(cols.xi - pullback_closed_form_xi(s, p, states))));
      err = std::max(err, max_abs(Matrix(cols.zeta - pullback_closed_form_zeta(s, p, states))));
    }
    return Outcome{err < 1e-8, fmt("max deviation %.3g on n1 + n2 <= 4 (tol 1e-8), 10 points, n_max = 72", err)};
  });

  run(4, "curvature", [&] {
    const auto numeric = numeric_connection_provider(FockSpace(kDefaultCutoff));
    double err = 0.0, span = 0.0, worst_ratio = 4.0;
    for (const auto& p : sample_budget(box, 10, 104)) {
      const auto exact = curvature_analytic(p);
      err = std::max(err, max_error(curvature_numeric(p, numeric, 1e-4), exact));
      const double e1 = max_error(curvature_numeric(p, analytic, 1e-2), exact);
      const double e2 = max_error(curvature_numeric(p, analytic, 5e-3), exact);
      const double ratio = e1 / e2;
      if (std::abs(ratio - 4.0) > std::abs(worst_ratio - 4.0)) worst_ratio = ratio;
      for (auto w : kAllWedges) span = std::max(span, curvature_span_residual(exact[w]));
    }
    const bool ok = err < 1e-6 && worst_ratio >= 3.0 && worst_ratio <= 5.0 && span < 1e-8;
    return Outcome{ok, fmt("FD(h = 1e-4) vs analytic %.3g (tol 1e-6), worst h-halving ratio %.3f (in [3,5]), span "
                           "residual %.3g (tol 1e-8)",
                           err, worst_ratio, span)};
  });

  run(5, "holonomy integrator", [&] {
    double unit = 0.0, inv = 0.0, worst_ratio = 4.0;
    bool identity_exact = transport(LoopPath::constant({0.2, 0.1}), analytic, 512) == Matrix4::Identity();
    const auto suite = loop_suite();
    for (const auto& loop : suite) {
      const Matrix4 g = transport(loop, analytic, 512);
      unit = std::max(unit, unitarity_defect(g));
      inv = std::max(inv, max4(transport(loop.reversed(), analytic, 512) * g - Matrix4::Identity()));
    }
    for (int k : {0, 4, 5, 8}) {
      const Matrix4 ref = transport(suite[k], analytic, 4096);
      const double ratio = max4(transport(suite[k], analytic, 128) - ref) / max4(transport(suite[k], analytic, 256) - ref);
      if (std::abs(ratio - 4.0) > std::abs(worst_ratio - 4.0)) worst_ratio = ratio;
    }
    double min_slope = 1e9;
    const auto curv = analytic_curvature_provider();
    for (const ParamPoint& at : {ParamPoint{}, ParamPoint{{0.3, -0.2}, {0.1, 0.25}}}) {
      for (int u = 0; u < 4; ++u)
        for (int v = u + 1; v < 4; ++v) {
          std::vector<double> err;
          for (double eps : {0.1, 0.05, 0.025}) {
            const Matrix4 l = log_unitary(transport(LoopPath::square(at, Coord(u), Coord(v), eps), analytic, 2048));
            err.push_back(max4(l + eps * eps * curv(at).evaluate(unit_tangent(Coord(u)), unit_tangent(Coord(v)))));
          }
          min_slope = std::min(min_slope, std::log(err[0] / err[2]) / std::log(4.0));
        }
    }
    const bool ok = unit < 1e-9 && identity_exact && inv < 1e-9 && worst_ratio >= 3.0 && worst_ratio <= 5.0 &&
                    min_slope >= 2.7;
    return Outcome{ok, fmt("unitarity %.3g (tol 1e-9), identity exact %s, reverse %.3g (tol 1e-9), step ratio %.3f, "
                           "small-square slope %.3f (>= 2.7)",
                           unit, identity_exact ? "yes" : "no", inv, worst_ratio, min_slope)};
  });

  run(6, "holonomy algebra", [&] {
    const auto grid = default_algebra_grid(box);
    bool stable = true;
    int dim = -1;
    for (double tol : {1e-6, 1e-7, 1e-8, 1e-9, 1e-10}) {
      const int d = holonomy_algebra_dimension(analytic_curvature_provider(), grid, tol);
      if (dim < 0) dim = d;
      stable = stable && d == dim;
    }
    const auto loops = random_small_loops(box, 50, 0.05, 106);
    const int loop_dim = holonomy_algebra_from_loops(analytic, loops, 256, 1e-6).dimension;
    return Outcome{dim == 4 && stable && loop_dim == 4,
                   fmt("curvature grid dim %d (stable over tol 1e-10..1e-6: %s), 50-loop log span dim %d (want 4)", dim,
                       stable ? "yes" : "no", loop_dim)};
  });

  run(7, "synthesis", [&] {
    const auto fam = make_family(FamilyKind::kMixedRectangle, box);
    const auto id = synthesize(Matrix4::Identity(), fam, analytic);
    const auto& h = hat_matrices();
    const Matrix4 target = matrix_exp(Matrix(0.3 * (h.e - h.f)));
    const auto r1 = synthesize(target, fam, analytic);
    const auto r2 = synthesize(target, fam, analytic);
    Matrix4 swap = Matrix4::Identity();
    swap.block<2, 2>(0, 0) << 0, 1, 1, 0;
    bool rejected = false;
    try {
      synthesize(swap, fam, analytic);
    } catch (const ReachabilityError&) {
      rejected = true;
    }
    const bool deterministic = r1.theta == r2.theta && r1.fidelity == r2.fidelity;
    const bool ok = id.fidelity == 1.0 && r1.fidelity >= 0.999 && r1.evaluations <= 2000 && rejected && deterministic;
    return Outcome{ok, fmt("identity %.17g, exp(0.3(E - F)) %.13f in %d evaluations, swap rejected %s, "
                           "deterministic %s",
                           id.fidelity, r1.fidelity, r1.evaluations, rejected ? "yes" : "no",
                           deterministic ? "yes" : "no")};
  });

  run(8, "truncation discipline", [&] {
    const FockSpace s24(24), s30(30);
    double dev = 0.0;
    for (const auto& p : box_points(box, 20, 108)) {
      const auto a = connection_numeric(s24, p);
      const auto b = connection_numeric(s30, p);
      dev = std::max({dev, max4(a.a_xi - b.a_xi), max4(a.a_zeta - b.a_zeta)});
    }
    return Outcome{dev < 1e-10, fmt("max |A(n_max = 24) - A(n_max = 30)| = %.3g (tol 1e-10), 20 points", dev)};
  });

  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
