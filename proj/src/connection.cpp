#include "holo/connection.hpp"

#include <cmath>
#include <string>

#include <Eigen/QR>
#include <Eigen/SparseCore>

#include "holo/coefficients.hpp"
#include "holo/coherent.hpp"
#include "holo/linalg.hpp"
#include "holo/sectors.hpp"

namespace holo {

namespace {

constexpr cplx kI(0.0, 1.0);

using Sparse = Eigen::SparseMatrix<cplx>;

Sparse sparse_annihilator(const FockSpace& space, int mode) {
  std::vector<Eigen::Triplet<cplx>> entries;
  for (int n1 = 0; n1 <= space.cutoff(); ++n1) {
    for (int n2 = 0; n2 <= space.cutoff(); ++n2) {
      const int n = mode == 1 ? n1 : n2;
      if (n == 0) continue;
      const int row = mode == 1 ? space.index(n1 - 1, n2) : space.index(n1, n2 - 1);
      entries.emplace_back(row, space.index(n1, n2), std::sqrt(double(n)));
    }
  }
  Sparse m(space.dim(), space.dim());
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

struct Ladders {
  Sparse a1, a2, a1d, a2d, n1, n2, id;

  explicit Ladders(const FockSpace& space)
      : a1(sparse_annihilator(space, 1)), a2(sparse_annihilator(space, 2)), id(space.dim(), space.dim()) {
    a1d = Sparse(a1.adjoint());
    a2d = Sparse(a2.adjoint());
    n1 = a1d * a1;
    n2 = a2d * a2;
    id.setIdentity();
  }
};

Sparse closed_form_xi(const FockSpace& space, const ParamPoint& p) {
  const Ladders l(space);
  const double r = std::abs(p.xi);
  const double s = std::abs(p.zeta);
  const double ch = std::cosh(2 * s);
  const cplx zs = p.zeta * coeff::sinhc2(s);
  const cplx zbs = std::conj(p.zeta) * coeff::sinhc2(s);
  const cplx xib = std::conj(p.xi);
  const double lead = 0.5 * (1.0 + coeff::sinc2(r));
  const Sparse raise = Sparse(l.a1d * l.a2) * ch + Sparse(l.a1d * l.a1d) * zs + Sparse(l.a2 * l.a2) * zbs;
  const Sparse lower = Sparse(l.a2d * l.a1) * ch + Sparse(l.a1 * l.a1) * zbs + Sparse(l.a2d * l.a2d) * zs;
  const Sparse j3 = (l.n1 - l.n2) * 0.5;
  return raise * cplx(lead) - j3 * (xib * coeff::versin_ratio(r)) + lower * (xib * xib * coeff::sinc2_defect(r));
}

Sparse closed_form_zeta(const FockSpace& space, const ParamPoint& p) {
  const Ladders l(space);
  const double s = std::abs(p.zeta);
  const cplx zb = std::conj(p.zeta);
  const Sparse k3 = (l.n1 + l.n2 + l.id) * 0.5;
  return Sparse(l.a1d * l.a2d) * cplx(0.5 * (1.0 + coeff::sinhc2(s))) + k3 * (zb * coeff::coshm_ratio(s)) +
         Sparse(l.a1 * l.a2) * (zb * zb * coeff::sinhc2_excess(s));
}

Matrix sparse_columns(const Sparse& op, const FockSpace& space, std::span<const int> states) {
  Matrix out(space.dim(), static_cast<Eigen::Index>(states.size()));
  for (std::size_t k = 0; k < states.size(); ++k) out.col(k) = op.col(states[k]);
  return out;
}

// exp(X) and its Wirtinger derivative d/dlambda for X = lambda P - conj(lambda) P^dag.
struct Exponential {
  BlockOperator value;
  BlockOperator holo_derivative;
};

Exponential wirtinger_exp(const BlockOperator& x, const BlockOperator& dir_re, const BlockOperator& dir_im) {
  auto re = exp_frechet_blocks(x, dir_re);
  auto im = exp_frechet_blocks(x, dir_im);
  return {std::move(re.value), (re.derivative - im.derivative * kI) * 0.5};
}

struct CoherentFactors {
  Exponential u;
  Exponential v;
};

CoherentFactors coherent_factors(const FockSpace& space, const ParamPoint& p) {
  const auto n_sectors = Partition::total_number(space);
  const auto d_sectors = Partition::number_difference(space);
  // X_U = (x + iy) J+ - (x - iy) J-:  dX/dx = J+ - J-,  dX/dy = i (J+ + J-)
  auto u = wirtinger_exp(u_exponent(space, p.xi), BlockOperator::build(n_sectors, su2_element(1.0, -1.0)),
                         BlockOperator::build(n_sectors, su2_element(kI, kI)));
  auto v = wirtinger_exp(v_exponent(space, p.zeta), BlockOperator::build(d_sectors, su11_element(1.0, -1.0)),
                         BlockOperator::build(d_sectors, su11_element(kI, kI)));
  return {std::move(u), std::move(v)};
}

PullbackColumns apply_pullbacks(const FockSpace& space, const CoherentFactors& f, std::span<const int> states) {
  const auto u_inv = f.u.value.adjoint();
  const auto v_inv = f.v.value.adjoint();
  const auto k = static_cast<Eigen::Index>(states.size());
  PullbackColumns out{Matrix(space.dim(), k), Matrix(space.dim(), k)};
  for (Eigen::Index j = 0; j < k; ++j) {
    Vector e = Vector::Zero(space.dim());
    e(states[j]) = 1.0;
    const Vector ve = f.v.value.apply(e);
    out.xi.col(j) = v_inv.apply(u_inv.apply(f.u.holo_derivative.apply(ve)));
    out.zeta.col(j) = v_inv.apply(f.v.holo_derivative.apply(e));
  }
  return out;
}

Matrix4 frame_rows(const Matrix& columns, const std::array<int, 4>& frame) {
  Matrix4 m;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) m(i, j) = columns(frame[i], j);
  }
  return m;
}

Matrix4 commutator4(const Matrix4& a, const Matrix4& b) { return a * b - b * a; }

cplx differential(int component, const RealTangent& u) {
  // components: 0 dxi, 1 dzeta, 2 dxibar, 3 dzetabar
  switch (component) {
    case 0: return {u[0], u[1]};
    case 1: return {u[2], u[3]};
    case 2: return {u[0], -u[1]};
    default: return {u[2], -u[3]};
  }
}

constexpr std::array<std::pair<int, int>, 6> kWedgeComponents = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

}  // namespace

bool ParamPoint::finite() const {
  return std::isfinite(xi.real()) && std::isfinite(xi.imag()) && std::isfinite(zeta.real()) &&
         std::isfinite(zeta.imag());
}

ParamPoint shifted(const ParamPoint& p, Coord c, double amount) {
  ParamPoint q = p;
  switch (c) {
    case Coord::kReXi: q.xi += amount; break;
    case Coord::kImXi: q.xi += cplx(0, amount); break;
    case Coord::kReZeta: q.zeta += amount; break;
    case Coord::kImZeta: q.zeta += cplx(0, amount); break;
  }
  return q;
}

RealTangent unit_tangent(Coord c) {
  RealTangent t{0, 0, 0, 0};
  t[static_cast<int>(c)] = 1.0;
  return t;
}

const char* coord_name(Coord c) {
  switch (c) {
    case Coord::kReXi: return "re_xi";
    case Coord::kImXi: return "im_xi";
    case Coord::kReZeta: return "re_zeta";
    case Coord::kImZeta: return "im_zeta";
  }
  return "?";
}

std::array<int, 4> frame_indices(const FockSpace& space) {
  if (space.cutoff() < 1) throw std::invalid_argument("vacuum frame needs cutoff >= 1");
  return {space.index(0, 0), space.index(0, 1), space.index(1, 0), space.index(1, 1)};
}

std::array<FockVector, 4> vacuum_frame(const FockSpace& space) {
  return {basis_state(space, 0, 0), basis_state(space, 0, 1), basis_state(space, 1, 0), basis_state(space, 1, 1)};
}

Matrix4 frame_projection(const FockOperator& op) {
  const auto f = frame_indices(op.space());
  Matrix4 m;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) m(i, j) = op(f[i], f[j]);
  }
  return m;
}

const HatMatrices& hat_matrices() {
  static const HatMatrices hats = [] {
    HatMatrices m;
    m.e = Matrix4::Zero();
    m.e(1, 2) = 1.0;
    m.f = Matrix4::Zero();
    m.f(2, 1) = 1.0;
    m.h = Matrix4::Zero();
    m.h(1, 1) = 0.5;
    m.h(2, 2) = -0.5;
    m.a = Matrix4::Zero();
    m.a(0, 3) = 1.0;
    m.c = Matrix4::Zero();
    m.c(3, 0) = 1.0;
    m.b = Matrix4::Zero();
    m.b.diagonal() << 0.5, 1.0, 1.0, 1.5;
    return m;
  }();
  return hats;
}

Matrix4 hat_u1() { return 2.0 * hat_matrices().b - Matrix4::Identity(); }

Matrix4 ConnectionSample::assemble(cplx dxi, cplx dzeta) const {
  return a_xi * dxi + a_zeta * dzeta - a_xi.adjoint() * std::conj(dxi) - a_zeta.adjoint() * std::conj(dzeta);
}

Matrix4 ConnectionSample::along(const RealTangent& u) const { return assemble({u[0], u[1]}, {u[2], u[3]}); }

const char* wedge_name(Wedge w) {
  switch (w) {
    case Wedge::kXiZeta: return "dxi^dzeta";
    case Wedge::kXiXibar: return "dxi^dxibar";
    case Wedge::kXiZetabar: return "dxi^dzetabar";
    case Wedge::kZetaXibar: return "dzeta^dxibar";
    case Wedge::kZetaZetabar: return "dzeta^dzetabar";
    case Wedge::kXibarZetabar: return "dxibar^dzetabar";
  }
  return "?";
}

Matrix4 CurvatureSample::evaluate(const RealTangent& u, const RealTangent& v) const {
  Matrix4 out = Matrix4::Zero();
  for (int w = 0; w < 6; ++w) {
    const auto [mu, nu] = kWedgeComponents[w];
    out += coeff[w] * (differential(mu, u) * differential(nu, v) - differential(mu, v) * differential(nu, u));
  }
  return out;
}

FockOperator kerr_hamiltonian(const FockSpace& space, double hbar_x) {
  Matrix m = Matrix::Zero(space.dim(), space.dim());
  for (int i = 0; i < space.dim(); ++i) {
    const auto [n1, n2] = space.occupation(i);
    m(i, i) = hbar_x * (double(n1) * (n1 - 1) + double(n2) * (n2 - 1));
  }
  return {space, std::move(m)};
}

FockOperator projector(const FockSpace& space, const ParamPoint& p) {
  if (!p.finite()) throw std::invalid_argument("projector: non-finite parameter");
  const auto u = u_blocks(space, p.xi);
  const auto v = v_blocks(space, p.zeta);
  const auto frame = frame_indices(space);
  Matrix w_frame(space.dim(), 4);
  for (int j = 0; j < 4; ++j) {
    Vector e = Vector::Zero(space.dim());
    e(frame[j]) = 1.0;
    w_frame.col(j) = u.apply(v.apply(e));
  }
  return {space, w_frame * w_frame.adjoint()};
}

ConnectionSample connection_analytic(const ParamPoint& p) {
  const auto& hat = hat_matrices();
  const double r = std::abs(p.xi);
  const double s = std::abs(p.zeta);
  const double ch = std::cosh(2 * s);
  const cplx xib = std::conj(p.xi);
  const cplx zb = std::conj(p.zeta);
  ConnectionSample out;
  out.at = p;
  out.a_xi = hat.f * (0.5 * (1.0 + coeff::sinc2(r)) * ch) + hat.h * (xib * coeff::versin_ratio(r)) +
             hat.e * (xib * xib * coeff::sinc2_defect(r) * ch);
  out.a_zeta = hat.c * (0.5 * (1.0 + coeff::sinhc2(s))) + hat.b * (zb * coeff::coshm_ratio(s)) +
               hat.a * (zb * zb * coeff::sinhc2_excess(s));
  return out;
}

ConnectionSample connection_numeric(const FockSpace& space, const ParamPoint& p) {
  if (!p.finite()) throw std::invalid_argument("connection_numeric: non-finite parameter");
  const auto frame = frame_indices(space);
  const auto cols = apply_pullbacks(space, coherent_factors(space, p), frame);
  return {frame_rows(cols.xi, frame), frame_rows(cols.zeta, frame), p};
}

FockOperator operator_pullback_xi(const FockSpace& space, const ParamPoint& p) {
  const auto f = coherent_factors(space, p);
  const auto v = f.v.value.to_dense();
  return v.adjoint() * f.u.value.adjoint().to_dense() * f.u.holo_derivative.to_dense() * v;
}

FockOperator operator_pullback_zeta(const FockSpace& space, const ParamPoint& p) {
  const auto f = coherent_factors(space, p);
  return (f.v.value.adjoint() * f.v.holo_derivative).to_dense();
}

PullbackColumns pullback_columns(const FockSpace& space, const ParamPoint& p, std::span<const int> flat_states) {
  for (int s : flat_states) {
    if (s < 0 || s >= space.dim()) throw std::out_of_range("pullback_columns: state outside space");
  }
  return apply_pullbacks(space, coherent_factors(space, p), flat_states);
}

Matrix pullback_closed_form_xi(const FockSpace& space, const ParamPoint& p, std::span<const int> flat_states) {
  return sparse_columns(closed_form_xi(space, p), space, flat_states);
}

Matrix pullback_closed_form_zeta(const FockSpace& space, const ParamPoint& p, std::span<const int> flat_states) {
  return sparse_columns(closed_form_zeta(space, p), space, flat_states);
}

FockOperator pullback_closed_form_xi(const FockSpace& space, const ParamPoint& p) {
  return {space, Matrix(closed_form_xi(space, p))};
}

FockOperator pullback_closed_form_zeta(const FockSpace& space, const ParamPoint& p) {
  return {space, Matrix(closed_form_zeta(space, p))};
}

CurvatureSample curvature_analytic(const ParamPoint& p) {
  const auto& hat = hat_matrices();
  const double r = std::abs(p.xi);
  const double s = std::abs(p.zeta);
  const double lead = 1.0 + coeff::sinc2(r);
  // conj(xi)^2/|xi|^2 (sin 2r/2r - 1) and its conjugate, smooth at xi = 0
  const cplx defect_bar = 2.0 * std::conj(p.xi) * std::conj(p.xi) * coeff::sinc2_defect(r);
  const cplx defect = 2.0 * p.xi * p.xi * coeff::sinc2_defect(r);
  const cplx zs = p.zeta * coeff::sinhc2(s);
  const cplx zbs = std::conj(p.zeta) * coeff::sinhc2(s);
  const double sh = std::sinh(2 * s);

  CurvatureSample out;
  out.at = p;
  out[Wedge::kXiZeta] = -(hat.f * (lead * zbs) + hat.e * (defect_bar * zbs));
  out[Wedge::kXiXibar] = hat.h * (2.0 * coeff::sinc2(r) * sh * sh);
  out[Wedge::kXiZetabar] = -(hat.f * (lead * zs) + hat.e * (defect_bar * zs));
  out[Wedge::kZetaXibar] = -(hat.e * (lead * zbs) + hat.f * (defect * zbs));
  out[Wedge::kZetaZetabar] = hat_u1() * (-2.0 * coeff::sinhc2(s));
  out[Wedge::kXibarZetabar] = hat.e * (lead * zs) + hat.f * (defect * zs);
  return out;
}

CurvatureSample curvature_numeric(const ParamPoint& p, const ConnectionProvider& provider, double h) {
  const double scale = std::max({1.0, std::abs(p.xi), std::abs(p.zeta)});
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("curvature_numeric: step must be positive");
  if (h < 1e-10 * scale) throw std::invalid_argument("curvature_numeric: step underflow");
  if (h > 0.1 * scale) throw std::invalid_argument("curvature_numeric: step too large");

  using Four = std::array<Matrix4, 4>;
  // A_xi, A_zeta, A_xi^dag, A_zeta^dag
  auto parts = [](const ConnectionSample& s) -> Four {
    return {s.a_xi, s.a_zeta, s.a_xi.adjoint(), s.a_zeta.adjoint()};
  };
  std::array<Four, 4> partial;  // partial[coord][part]
  for (int c = 0; c < 4; ++c) {
    const Four up = parts(provider(shifted(p, Coord(c), h)));
    const Four dn = parts(provider(shifted(p, Coord(c), -h)));
    for (int k = 0; k < 4; ++k) partial[c][k] = (up[k] - dn[k]) / (2.0 * h);
  }
  // Wirtinger partials: d[0] d/dxi, d[1] d/dzeta, d[2] d/dxibar, d[3] d/dzetabar
  std::array<Four, 4> d;
  for (int k = 0; k < 4; ++k) {
    d[0][k] = 0.5 * (partial[0][k] - kI * partial[1][k]);
    d[1][k] = 0.5 * (partial[2][k] - kI * partial[3][k]);
    d[2][k] = 0.5 * (partial[0][k] + kI * partial[1][k]);
    d[3][k] = 0.5 * (partial[2][k] + kI * partial[3][k]);
  }
  enum { kXi = 0, kZeta = 1, kXiBar = 2, kZetaBar = 3 };
  enum { kA = 0, kB = 1, kAd = 2, kBd = 3 };  // A_xi, A_zeta, A_xi^dag, A_zeta^dag
  const Four a = parts(provider(p));

  CurvatureSample out;
  out.at = p;
  out[Wedge::kXiZeta] = d[kXi][kB] - d[kZeta][kA] + commutator4(a[kA], a[kB]);
  out[Wedge::kXiXibar] = -(d[kXi][kAd] + d[kXiBar][kA] + commutator4(a[kA], a[kAd]));
  out[Wedge::kXiZetabar] = -(d[kXi][kBd] + d[kZetaBar][kA] + commutator4(a[kA], a[kBd]));
  out[Wedge::kZetaXibar] = -(d[kZeta][kAd] + d[kXiBar][kB] + commutator4(a[kB], a[kAd]));
  out[Wedge::kZetaZetabar] = -(d[kZeta][kBd] + d[kZetaBar][kB] + commutator4(a[kB], a[kBd]));
  out[Wedge::kXibarZetabar] = -(d[kXiBar][kBd] - d[kZetaBar][kAd] + commutator4(a[kBd], a[kAd]));
  return out;
}

double curvature_span_residual(const Matrix4& m) {
  const auto& hat = hat_matrices();
  Eigen::Matrix<cplx, 16, 4> basis;
  const std::array<Matrix4, 4> gens = {hat.e, hat.f, hat.h, hat_u1()};
  for (int k = 0; k < 4; ++k) basis.col(k) = gens[k].reshaped();
  const Eigen::Matrix<cplx, 16, 1> target = m.reshaped();
  const Eigen::Matrix<cplx, 4, 1> coef = basis.colPivHouseholderQr().solve(target);
  return (target - basis * coef).cwiseAbs().maxCoeff();
}

CutoffCheck cutoff_adequacy(const FockSpace& space, const ParamPoint& p, int extra, double tol) {
  if (extra <= 0) throw std::invalid_argument("cutoff_adequacy: extra levels must be positive");
  const FockSpace larger(space.cutoff() + extra);
  const auto lo = connection_numeric(space, p);
  const auto hi = connection_numeric(larger, p);
  CutoffCheck check;
  check.cutoff = space.cutoff();
  check.reference_cutoff = larger.cutoff();
  check.deviation = std::max(max_abs(Matrix(lo.a_xi - hi.a_xi)), max_abs(Matrix(lo.a_zeta - hi.a_zeta)));
  check.adequate = check.deviation < tol;
  return check;
}

ConnectionSample connection_numeric_checked(const FockSpace& space, const ParamPoint& p, double tol) {
  const auto check = cutoff_adequacy(space, p, kCutoffProbeExtra, tol);
  if (!check.adequate) {
    throw CutoffError("cutoff " + std::to_string(space.cutoff()) + " inadequate: connection moves by " +
                      std::to_string(check.deviation) + " at cutoff " + std::to_string(check.reference_cutoff));
  }
  return connection_numeric(space, p);
}

ConnectionProvider analytic_connection_provider() { return [](const ParamPoint& p) { return connection_analytic(p); }; }

ConnectionProvider numeric_connection_provider(const FockSpace& space) {
  return [space](const ParamPoint& p) { return connection_numeric(space, p); };
}

CurvatureProvider analytic_curvature_provider() { return [](const ParamPoint& p) { return curvature_analytic(p); }; }

}  // namespace holo
