#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "holo/coherent.hpp"
#include "holo/holonomy.hpp"
#include "holo/linalg.hpp"

using namespace holo;

namespace {

// Largest entry of `op` restricted to states with n1 < cutoff and n2 < cutoff.
double interior_max(const FockOperator& op) {
  const auto& s = op.space();
  double m = 0.0;
  for (int i = 0; i < s.dim(); ++i)
    for (int j = 0; j < s.dim(); ++j) {
      auto [a, b] = s.occupation(i);
      auto [c, d] = s.occupation(j);
      if (std::max({a, b, c, d}) < s.cutoff()) m = std::max(m, std::abs(op(i, j)));
    }
  return m;
}

}  // namespace

TEST(Generators, Su2Relations) {
  FockSpace s(6);
  const auto g = su2_generators(s);
  EXPECT_LT(max_abs(commutator(g.j_3, g.j_plus) - g.j_plus), 1e-15);
  EXPECT_LT(max_abs(commutator(g.j_3, g.j_minus) + g.j_minus), 1e-15);
  EXPECT_LT(interior_max(commutator(g.j_plus, g.j_minus) - 2.0 * g.j_3), 1e-13);
  EXPECT_EQ(max_abs(g.j_plus.adjoint() - g.j_minus), 0.0);
  EXPECT_EQ(g.j_plus(s.index(1, 0), s.index(0, 1)), cplx(1.0));
}

TEST(Generators, Su11Relations) {
  FockSpace s(6);
  const auto k = su11_generators(s);
  EXPECT_LT(max_abs(commutator(k.k_3, k.k_plus) - k.k_plus), 1e-14);
  EXPECT_LT(max_abs(commutator(k.k_3, k.k_minus) + k.k_minus), 1e-14);
  EXPECT_LT(interior_max(commutator(k.k_plus, k.k_minus) + 2.0 * k.k_3), 1e-13);
  EXPECT_EQ(k.k_plus(s.index(1, 1), s.index(0, 0)), cplx(1.0));
}

TEST(CoherentOps, IdentityAtTheOrigin) {
  FockSpace s(5);
  EXPECT_LT(max_abs(u_op(s, 0.0) - FockOperator::identity(s)), 1e-15);
  EXPECT_LT(max_abs(v_op(s, 0.0) - FockOperator::identity(s)), 1e-15);
  EXPECT_LT(max_abs(u_disentangled(s, 0.0) - FockOperator::identity(s)), 1e-15);
  EXPECT_LT(max_abs(v_disentangled(s, 0.0) - FockOperator::identity(s)), 1e-15);
}

TEST(CoherentOps, BeamSplitterOnOnePhoton) {
  FockSpace s(4);
  const double t = 0.7;
  const auto u = u_op(s, t);
  // e^{t(J+ - J-)} rotates |01> into cos t |01> + sin t |10>.
  EXPECT_NEAR(u(s.index(0, 1), s.index(0, 1)).real(), std::cos(t), 1e-14);
  EXPECT_NEAR(u(s.index(1, 0), s.index(0, 1)).real(), std::sin(t), 1e-14);
}

TEST(CoherentOps, ConservedCharges) {
  FockSpace s(6);
  const auto n_tot = number_op(s, 1) + number_op(s, 2);
  const auto n_diff = number_op(s, 1) - number_op(s, 2);
  EXPECT_LT(max_abs(commutator(u_op(s, {0.4, -0.3}), n_tot)), 1e-13);
  EXPECT_LT(max_abs(commutator(v_op(s, {0.2, 0.3}), n_diff)), 1e-13);
  EXPECT_LT(unitarity_defect(u_op(s, {0.8, 0.5}).matrix()), 1e-13);
  EXPECT_LT(unitarity_defect(v_op(s, {0.3, -0.4}).matrix()), 1e-13);
}

TEST(CoherentOps, SqueezedVacuumAmplitudes) {
  FockSpace s(36);
  const cplx zeta(0.3, -0.25);
  const auto v = v_op(s, zeta);
  const double r = std::abs(zeta);
  const cplx kappa = kappa_of(zeta);
  EXPECT_NEAR(std::abs(kappa - zeta / r * std::tanh(r)), 0.0, 1e-15);
  for (int n = 0; n <= 5; ++n) {
    const cplx expected = std::pow(kappa, n) / std::cosh(r);
    EXPECT_LT(std::abs(v(s.index(n, n), 0) - expected), 1e-12) << n;
    if (n > 0) EXPECT_EQ(v(s.index(n, 0), 0), cplx(0.0));
  }
}

TEST(CoherentOps, EtaAndKappa) {
  EXPECT_EQ(eta_of(0.0), cplx(0.0));
  EXPECT_EQ(kappa_of(0.0), cplx(0.0));
  const cplx xi(0.0, 0.6);
  EXPECT_NEAR(std::abs(eta_of(xi) - cplx(0.0, std::tan(0.6))), 0.0, 1e-15);
  const cplx small(1e-9, 0.0);
  EXPECT_NEAR(std::abs(eta_of(small) - small), 0.0, 1e-24);
}

TEST(Disentangling, BeamSplitterOnCompleteShells) {
  const int n = 12;
  FockSpace s(n);
  for (const auto& p : sample_budget({1.0, 0.0}, 10, 11)) {
    const double dev = shell_deviation(u_disentangled(s, p.xi), u_op(s, p.xi), n);
    EXPECT_LT(dev, 1e-9) << p.xi;
  }
}

TEST(Disentangling, IncompleteShellsDisagree) {
  // Beyond n1 + n2 = cutoff the shells do not carry an su(2) representation.
  FockSpace s(8);
  const cplx xi(0.6, 0.2);
  EXPECT_GT(shell_deviation(u_disentangled(s, xi), u_op(s, xi), 2 * s.cutoff()), 1e-3);
}

TEST(Disentangling, RejectsTheTangentPole) {
  FockSpace s(4);
  EXPECT_THROW(u_disentangled(s, std::numbers::pi / 2), std::domain_error);
  EXPECT_THROW(u_disentangled(s, cplx(0.0, 2.0)), std::domain_error);
}

TEST(Disentangling, SqueezeOnLowLyingStates) {
  // At cutoff 24 the truncated V(0.45) is still ~5e-7 off on these columns;
  // 36 leaves only rounding.
  FockSpace s(36);
  for (const cplx zeta : {cplx(0.2, 0.0), cplx(-0.1, 0.25), cplx(0.0, 0.45)}) {
    EXPECT_LT(column_deviation(v_disentangled(s, zeta), v_op(s, zeta), 4), 1e-8) << zeta;
    EXPECT_NEAR(std::abs(v_disentangled(s, zeta)(0, 0)), 1.0 / std::cosh(std::abs(zeta)), 1e-12);
  }
}

TEST(Disentangling, SqueezeConvergesWithCutoff) {
  const cplx zeta(0.35, 0.35);  // |zeta| ~ 0.495
  double previous = 1.0;
  for (int n : {12, 18, 24}) {
    FockSpace s(n);
    const double dev = column_deviation(v_disentangled(s, zeta), v_op(s, zeta), 4);
    EXPECT_LT(dev, previous) << n;
    previous = dev;
  }
}

TEST(Deviation, HelpersAgreeOnSimpleCases) {
  FockSpace s(3);
  const auto z = FockOperator::zero(s);
  auto m = z.matrix();
  m(s.index(1, 1), s.index(0, 0)) = 0.5;
  m(s.index(3, 3), s.index(3, 3)) = 2.0;
  const FockOperator a(s, m);
  EXPECT_EQ(shell_deviation(a, z, 2), 0.5);
  EXPECT_EQ(shell_deviation(a, z, 6), 2.0);
  EXPECT_EQ(column_deviation(a, z, 0), 0.5);
}
