#include "holo/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/QR>

#include "holo/linalg.hpp"

namespace holo {

namespace {

constexpr cplx kI(0.0, 1.0);

using RealVec = Eigen::Matrix<double, 32, 1>;

RealVec vectorize(const Matrix4& m) {
  RealVec v;
  for (int k = 0; k < 16; ++k) {
    v(2 * k) = m(k / 4, k % 4).real();
    v(2 * k + 1) = m(k / 4, k % 4).imag();
  }
  return v;
}

void require_unitary(const Matrix4& m, const char* what) {
  if (!all_finite(Matrix(m)) || !is_unitary(Matrix(m), kUnitaryInputTol)) {
    throw std::invalid_argument(std::string(what) + " is not unitary within 1e-8");
  }
}

// Block structure of the reachable group, independent of logarithm branches.
bool structurally_reachable(const Matrix4& t, double tol) {
  const std::array<std::pair<int, int>, 4> blocks = {{{0, 0}, {1, 2}, {1, 2}, {3, 3}}};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const bool inside = j >= blocks[i].first && j <= blocks[i].second;
      if (!inside && std::abs(t(i, j)) > tol) return false;
    }
  }
  const cplx det_mid = t(1, 1) * t(2, 2) - t(1, 2) * t(2, 1);
  return std::abs(det_mid - t(0, 0) * t(3, 3)) <= tol;
}

struct Simplex {
  std::vector<std::vector<double>> x;
  std::vector<double> f;
};

// Nelder–Mead with box clamping of every trial point. The objective reports
// whether the caller wants the search to end (budget or goal reached).
struct Objective {
  std::function<double(const std::vector<double>&)> value;
  std::function<bool()> exhausted;
};

void nelder_mead(const Objective& obj, std::vector<double> x0, const LoopFamily& family) {
  const int d = family.dimension();
  Simplex s;
  x0 = family.clamp(x0);
  s.x.push_back(x0);
  s.f.push_back(obj.value(x0));
  for (int i = 0; i < d && !obj.exhausted(); ++i) {
    std::vector<double> xi = x0;
    const double step = 0.1 * (family.upper[i] - family.lower[i]);
    xi[i] = (x0[i] + step <= family.upper[i]) ? x0[i] + step : x0[i] - step;
    s.x.push_back(xi);
    s.f.push_back(obj.value(xi));
  }
  if (static_cast<int>(s.x.size()) < d + 1) return;

  auto combine = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
    std::vector<double> out(d);
    for (int k = 0; k < d; ++k) out[k] = a[k] + t * (b[k] - a[k]);
    return family.clamp(out);
  };

  std::vector<int> order(d + 1);
  while (!obj.exhausted()) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return s.f[a] < s.f[b]; });
    const int best = order.front();
    const int worst = order.back();
    const int second = order[d - 1];

    double size = 0.0;
    for (int i = 0; i <= d; ++i) {
      for (int k = 0; k < d; ++k) size = std::max(size, std::abs(s.x[i][k] - s.x[best][k]));
    }
    if (size < 1e-10 && s.f[worst] - s.f[best] < 1e-15) return;

    std::vector<double> centroid(d, 0.0);
    for (int i = 0; i <= d; ++i) {
      if (i == worst) continue;
      for (int k = 0; k < d; ++k) centroid[k] += s.x[i][k] / d;
    }
    const auto xr = combine(centroid, s.x[worst], -1.0);
    const double fr = obj.value(xr);
    if (fr < s.f[best]) {
      if (obj.exhausted()) return;
      const auto xe = combine(centroid, s.x[worst], -2.0);
      const double fe = obj.value(xe);
      if (fe < fr) {
        s.x[worst] = xe;
        s.f[worst] = fe;
      } else {
        s.x[worst] = xr;
        s.f[worst] = fr;
      }
      continue;
    }
    if (fr < s.f[second]) {
      s.x[worst] = xr;
      s.f[worst] = fr;
      continue;
    }
    if (obj.exhausted()) return;
    const bool outside = fr < s.f[worst];
    const auto xc = outside ? combine(centroid, xr, 0.5) : combine(centroid, s.x[worst], 0.5);
    const double fc = obj.value(xc);
    if (fc < (outside ? fr : s.f[worst])) {
      s.x[worst] = xc;
      s.f[worst] = fc;
      continue;
    }
    for (int i = 0; i <= d && !obj.exhausted(); ++i) {
      if (i == best) continue;
      s.x[i] = combine(s.x[best], s.x[i], 0.5);
      s.f[i] = obj.value(s.x[i]);
    }
  }
}

struct Rectangle {
  Coord u;
  Coord v;
  double half_u;  // corners stay within [-half_u, half_u] x [-half_v, half_v]
  double half_v;
};

LoopFamily rectangle_family(std::string name, const Rectangle& r) {
  LoopFamily fam;
  fam.name = std::move(name);
  fam.lower = {-2 * r.half_u, -2 * r.half_v, -r.half_u, -r.half_v};
  fam.upper = {2 * r.half_u, 2 * r.half_v, r.half_u, r.half_v};
  fam.make = [r](std::span<const double> theta) {
    auto point = [&](double a, double b) {
      ParamPoint p = shifted({}, r.u, std::clamp(a, -r.half_u, r.half_u));
      return shifted(p, r.v, std::clamp(b, -r.half_v, r.half_v));
    };
    const double wu = theta[0], wv = theta[1], ou = theta[2], ov = theta[3];
    const ParamPoint c0 = point(ou, ov);
    return LoopPath::polygon({c0, point(ou + wu, ov), point(ou + wu, ov + wv), point(ou, ov + wv), c0});
  };
  return fam;
}

}  // namespace

double gate_fidelity(const Matrix4& gamma, const Matrix4& target) {
  require_unitary(gamma, "gate_fidelity: gamma");
  require_unitary(target, "gate_fidelity: target");
  return std::abs((gamma.adjoint() * target).trace()) / 4.0;
}

const std::array<Matrix4, kReachableGenerators>& reachable_generators() {
  static const std::array<Matrix4, kReachableGenerators> gens = [] {
    const auto& hat = hat_matrices();
    return std::array<Matrix4, kReachableGenerators>{hat.e - hat.f, kI * (hat.e + hat.f), kI * hat.h,
                                                     kI * hat_u1(), kI * Matrix4::Identity()};
  }();
  return gens;
}

Reachability reachability(const Matrix4& target, double tol) {
  require_unitary(target, "reachability: target");
  Reachability r;
  Matrix log_t;
  bool ambiguous = false;
  try {
    log_t = log_unitary(Matrix(target));
  } catch (const BranchAmbiguity&) {
    // eigenvalue at -1: take whichever side rounding puts it on
    log_t = log_unitary(Matrix(target), kUnitaryInputTol, 0.0);
    ambiguous = true;
  }
  Eigen::Matrix<double, 32, kReachableGenerators> basis;
  for (int k = 0; k < kReachableGenerators; ++k) basis.col(k) = vectorize(reachable_generators()[k]);
  const RealVec y = vectorize(Matrix4(log_t));
  const Eigen::Matrix<double, kReachableGenerators, 1> c = basis.colPivHouseholderQr().solve(y);
  for (int k = 0; k < kReachableGenerators; ++k) r.coefficients[k] = c(k);
  r.residual = (y - basis * c).cwiseAbs().maxCoeff();
  if (!ambiguous && r.residual <= tol) {
    r.reachable = true;
    return r;
  }
  // A reachable gate can still have its principal logarithm on a branch where
  // the u(1) traces disagree by 2 pi; the block test settles those cases.
  r.structural = true;
  r.reachable = structurally_reachable(target, tol);
  return r;
}

std::vector<double> LoopFamily::clamp(std::span<const double> theta) const {
  if (static_cast<int>(theta.size()) != dimension()) throw std::invalid_argument("theta has the wrong dimension");
  std::vector<double> out(theta.begin(), theta.end());
  for (int k = 0; k < dimension(); ++k) out[k] = std::clamp(out[k], lower[k], upper[k]);
  return out;
}

const char* family_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::kXiRectangle: return "xi-rectangle";
    case FamilyKind::kZetaRectangle: return "zeta-rectangle";
    case FamilyKind::kConcatenated: return "concatenated";
    case FamilyKind::kMixedRectangle: return "mixed-rectangle";
  }
  return "?";
}

FamilyKind parse_family(const std::string& name) {
  for (auto kind : {FamilyKind::kXiRectangle, FamilyKind::kZetaRectangle, FamilyKind::kConcatenated,
                    FamilyKind::kMixedRectangle}) {
    if (name == family_name(kind)) return kind;
  }
  throw std::invalid_argument("unknown loop family '" + name + "'");
}

LoopFamily make_family(FamilyKind kind, const Budget& budget) {
  // a square |u|, |v| <= c stays inside the disc of radius c sqrt 2
  const double xi_half = budget.xi_max / std::sqrt(2.0);
  const double zeta_half = budget.zeta_max / std::sqrt(2.0);
  switch (kind) {
    case FamilyKind::kXiRectangle:
      return rectangle_family(family_name(kind), {Coord::kReXi, Coord::kImXi, xi_half, xi_half});
    case FamilyKind::kZetaRectangle:
      return rectangle_family(family_name(kind), {Coord::kReZeta, Coord::kImZeta, zeta_half, zeta_half});
    case FamilyKind::kMixedRectangle:
      return rectangle_family(family_name(kind), {Coord::kReXi, Coord::kReZeta, budget.xi_max, budget.zeta_max});
    case FamilyKind::kConcatenated: {
      const auto a = make_family(FamilyKind::kXiRectangle, budget);
      const auto b = make_family(FamilyKind::kZetaRectangle, budget);
      LoopFamily fam;
      fam.name = family_name(kind);
      fam.lower = a.lower;
      fam.lower.insert(fam.lower.end(), b.lower.begin(), b.lower.end());
      fam.upper = a.upper;
      fam.upper.insert(fam.upper.end(), b.upper.begin(), b.upper.end());
      fam.make = [a, b](std::span<const double> theta) {
        return a.make(theta.subspan(0, 4)).then(b.make(theta.subspan(4, 4)));
      };
      return fam;
    }
  }
  throw std::invalid_argument("unknown loop family");
}

SynthResult synthesize(const Matrix4& target, const LoopFamily& family, const ConnectionProvider& provider,
                       const SynthOptions& options) {
  if (options.budget < 1 || options.restarts < 1) throw std::invalid_argument("synthesize: empty budget");
  if (options.steps < kMinSteps || options.verify_steps < kMinSteps) {
    throw std::invalid_argument("synthesize: too few transport steps");
  }
  SynthResult result;
  result.reach = reachability(target);
  if (!result.reach.reachable) {
    throw ReachabilityError("target is outside the reachable group (log residual " +
                            std::to_string(result.reach.residual) + ")");
  }

  std::mt19937_64 rng(options.seed);
  const int d = family.dimension();
  double best_f = -1.0;
  std::vector<double> best_theta(d, 0.0);
  int used = 0;

  for (int restart = 0; restart < options.restarts; ++restart) {
    std::vector<double> x0(d, 0.0);
    if (restart > 0) {
      for (int k = 0; k < d; ++k) {
        std::uniform_real_distribution<double> draw(family.lower[k], family.upper[k]);
        x0[k] = draw(rng);
      }
    }
    const int quota = (options.budget - used) / (options.restarts - restart);
    int local = 0;
    bool done = false;
    Objective obj;
    obj.value = [&](const std::vector<double>& theta) {
      ++local;
      ++used;
      const Matrix4 g = transport(family.make(theta), provider, options.steps);
      const double f = gate_fidelity(g, target);
      if (f > best_f) {
        best_f = f;
        best_theta = theta;
        result.best_restart = restart;
      }
      result.trace.push_back(best_f);
      if (best_f >= options.goal) done = true;
      return 1.0 - f;
    };
    obj.exhausted = [&] { return done || local >= quota; };
    nelder_mead(obj, x0, family);
    if (done) break;
  }

  result.theta = best_theta;
  result.search_fidelity = best_f;
  result.evaluations = used;
  result.gamma = transport(family.make(best_theta), provider, options.verify_steps);
  result.fidelity = gate_fidelity(result.gamma, target);
  return result;
}

}  // namespace holo
