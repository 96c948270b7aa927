/*
 * connection.hpp — Kerr vacuum frame, projector family, and the adiabatic
 * connection / curvature over the (xi, zeta) parameter space.
 *
 * The code space F0 is the zero eigenspace of the Kerr Hamiltonian, spanned
 * by the frame |00>, |01>, |10>, |11> (always in this order). With
 * W(xi, zeta) = U(xi) V(zeta) the connection coefficients are the frame
 * matrices of W^{-1} dW/dxi and W^{-1} dW/dzeta (Wirtinger derivatives,
 * d/dxi = (d/dRe - i d/dIm) / 2). The 1-form
 *
 *   A = A_xi dxi + A_zeta dzeta - A_xi^dag dxibar - A_zeta^dag dzetabar
 *
 * is anti-hermitian on every real tangent.
 *
 * Closed forms. The analytic connection and curvature here are the ones the
 * Frechet-derivative numerics confirm. Relative to the commonly quoted
 * expressions, two things differ:
 *   - the H-hat term of A_xi is +conj(xi)(1 - cos 2|xi|)/(2|xi|^2);
 *   - the dxi^dxibar curvature coefficient is
 *     (sin 2|xi| / |xi|) sinh^2(2|zeta|) H-hat, so it vanishes at zeta = 0,
 *     where the frame block is U-invariant and the connection is flat.
 */
#pragma once

#include <array>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "holo/fock.hpp"

namespace holo {

struct ParamPoint {
  cplx xi{0.0, 0.0};
  cplx zeta{0.0, 0.0};

  bool finite() const;
  bool operator==(const ParamPoint&) const = default;
};

/// Real coordinates (Re xi, Im xi, Re zeta, Im zeta).
enum class Coord { kReXi = 0, kImXi = 1, kReZeta = 2, kImZeta = 3 };
using RealTangent = std::array<double, 4>;

ParamPoint shifted(const ParamPoint& p, Coord c, double amount);
RealTangent unit_tangent(Coord c);
const char* coord_name(Coord c);

std::array<int, 4> frame_indices(const FockSpace& space);
std::array<FockVector, 4> vacuum_frame(const FockSpace& space);
/// <v_i| op |v_j> over the vacuum frame.
Matrix4 frame_projection(const FockOperator& op);

struct HatMatrices {
  Matrix4 e;  // |01><10|
  Matrix4 f;  // |10><01|
  Matrix4 h;  // diag(0, 1/2, -1/2, 0)
  Matrix4 a;  // |00><11|
  Matrix4 c;  // |11><00|
  Matrix4 b;  // diag(1/2, 1, 1, 3/2)
};

const HatMatrices& hat_matrices();
/// 2B - 1 = diag(0, 1, 1, 2)
Matrix4 hat_u1();

struct ConnectionSample {
  Matrix4 a_xi;
  Matrix4 a_zeta;
  ParamPoint at;

  /// A evaluated on the complex tangent (dxi, dzeta).
  Matrix4 assemble(cplx dxi, cplx dzeta) const;
  /// A evaluated on a real tangent.
  Matrix4 along(const RealTangent& u) const;
};

/// Wedge basis for curvature coefficients, in storage order.
enum class Wedge {
  kXiZeta = 0,
  kXiXibar = 1,
  kXiZetabar = 2,
  kZetaXibar = 3,
  kZetaZetabar = 4,
  kXibarZetabar = 5,
};
inline constexpr std::array<Wedge, 6> kAllWedges = {Wedge::kXiZeta,    Wedge::kXiXibar,     Wedge::kXiZetabar,
                                                    Wedge::kZetaXibar, Wedge::kZetaZetabar, Wedge::kXibarZetabar};
const char* wedge_name(Wedge w);

struct CurvatureSample {
  std::array<Matrix4, 6> coeff;
  ParamPoint at;

  const Matrix4& operator[](Wedge w) const { return coeff[static_cast<int>(w)]; }
  Matrix4& operator[](Wedge w) { return coeff[static_cast<int>(w)]; }
  /// The curvature 2-form on two real tangents, F(u, v); anti-hermitian.
  Matrix4 evaluate(const RealTangent& u, const RealTangent& v) const;
};

using ConnectionProvider = std::function<ConnectionSample(const ParamPoint&)>;
using CurvatureProvider = std::function<CurvatureSample(const ParamPoint&)>;

/// hbar X [N1(N1 - 1) + N2(N2 - 1)]
FockOperator kerr_hamiltonian(const FockSpace& space, double hbar_x = 1.0);

/// W(p) (sum_j |v_j><v_j|) W(p)^{-1}
FockOperator projector(const FockSpace& space, const ParamPoint& p);

ConnectionSample connection_analytic(const ParamPoint& p);

/// Frechet-derivative connection on a truncated Fock space.
ConnectionSample connection_numeric(const FockSpace& space, const ParamPoint& p);

/// W^{-1} dW/dxi and W^{-1} dW/dzeta as full operators.
FockOperator operator_pullback_xi(const FockSpace& space, const ParamPoint& p);
FockOperator operator_pullback_zeta(const FockSpace& space, const ParamPoint& p);

struct PullbackColumns {
  Matrix xi;    // dim x k, column j = W^{-1} dW/dxi |state_j>
  Matrix zeta;  // dim x k
};

/// Pullback operators applied to a few basis states, without forming the
/// dense operators (cheap at large cutoffs).
PullbackColumns pullback_columns(const FockSpace& space, const ParamPoint& p, std::span<const int> flat_states);

/// Closed-form W^{-1} dW/dxi assembled from ladder operators, applied to the
/// given basis states (dim x k).
Matrix pullback_closed_form_xi(const FockSpace& space, const ParamPoint& p, std::span<const int> flat_states);
Matrix pullback_closed_form_zeta(const FockSpace& space, const ParamPoint& p, std::span<const int> flat_states);
/// Dense closed forms.
FockOperator pullback_closed_form_xi(const FockSpace& space, const ParamPoint& p);
FockOperator pullback_closed_form_zeta(const FockSpace& space, const ParamPoint& p);

CurvatureSample curvature_analytic(const ParamPoint& p);

/// dA + A^A from central differences of the provider with step h.
CurvatureSample curvature_numeric(const ParamPoint& p, const ConnectionProvider& provider, double h);

/// Distance of a 4x4 complex matrix from span_C{E, F, H, 2B - 1} (max-entry
/// norm of the least-squares residual).
double curvature_span_residual(const Matrix4& m);

class CutoffError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CutoffCheck {
  int cutoff = 0;
  int reference_cutoff = 0;
  double deviation = 0.0;  // max entry difference of A_xi, A_zeta
  bool adequate = false;
};

inline constexpr int kCutoffProbeExtra = 6;
inline constexpr double kCutoffProbeTol = 1e-10;

CutoffCheck cutoff_adequacy(const FockSpace& space, const ParamPoint& p, int extra = kCutoffProbeExtra,
                            double tol = kCutoffProbeTol);

/// connection_numeric, throwing CutoffError when cutoff_adequacy fails.
ConnectionSample connection_numeric_checked(const FockSpace& space, const ParamPoint& p,
                                            double tol = kCutoffProbeTol);

/// Provider wrappers.
ConnectionProvider analytic_connection_provider();
ConnectionProvider numeric_connection_provider(const FockSpace& space);
CurvatureProvider analytic_curvature_provider();

}  // namespace holo
