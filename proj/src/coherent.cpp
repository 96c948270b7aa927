#include "holo/coherent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "holo/coefficients.hpp"
#include "holo/linalg.hpp"

namespace holo {

Su2Generators su2_generators(const FockSpace& space) {
  const auto a1 = annihilator(space, 1);
  const auto a2 = annihilator(space, 2);
  const auto n1 = number_op(space, 1);
  const auto n2 = number_op(space, 2);
  return {a1.adjoint() * a2, a2.adjoint() * a1, (n1 - n2) * 0.5};
}

Su11Generators su11_generators(const FockSpace& space) {
  const auto a1 = annihilator(space, 1);
  const auto a2 = annihilator(space, 2);
  const auto n1 = number_op(space, 1);
  const auto n2 = number_op(space, 2);
  return {a1.adjoint() * a2.adjoint(), a2 * a1, (n1 + n2 + FockOperator::identity(space)) * 0.5};
}

cplx eta_of(cplx xi) { return xi * coeff::tan_ratio(std::abs(xi)); }

cplx kappa_of(cplx zeta) { return zeta * coeff::tanh_ratio(std::abs(zeta)); }

MatrixElement su2_element(cplx plus, cplx minus) {
  return [plus, minus](int m1, int m2, int n1, int n2) -> cplx {
    if (m1 == n1 + 1 && m2 == n2 - 1) return plus * (std::sqrt(n1 + 1.0) * std::sqrt(double(n2)));
    if (m1 == n1 - 1 && m2 == n2 + 1) return minus * (std::sqrt(n2 + 1.0) * std::sqrt(double(n1)));
    return 0.0;
  };
}

MatrixElement su11_element(cplx plus, cplx minus) {
  return [plus, minus](int m1, int m2, int n1, int n2) -> cplx {
    if (m1 == n1 + 1 && m2 == n2 + 1) return plus * (std::sqrt(n1 + 1.0) * std::sqrt(n2 + 1.0));
    if (m1 == n1 - 1 && m2 == n2 - 1) return minus * (std::sqrt(double(n2)) * std::sqrt(double(n1)));
    return 0.0;
  };
}

BlockOperator u_exponent(const FockSpace& space, cplx xi) {
  return BlockOperator::build(Partition::total_number(space), su2_element(xi, -std::conj(xi)));
}

BlockOperator v_exponent(const FockSpace& space, cplx zeta) {
  return BlockOperator::build(Partition::number_difference(space), su11_element(zeta, -std::conj(zeta)));
}

BlockOperator u_blocks(const FockSpace& space, cplx xi) { return exp_blocks(u_exponent(space, xi)); }

BlockOperator v_blocks(const FockSpace& space, cplx zeta) { return exp_blocks(v_exponent(space, zeta)); }

FockOperator u_op(const FockSpace& space, cplx xi) { return u_blocks(space, xi).to_dense(); }

FockOperator v_op(const FockSpace& space, cplx zeta) { return v_blocks(space, zeta).to_dense(); }

namespace {

// The three factors of a disentangled product share the sector structure of
// the raising/lowering generators, so each factor is exponentiated blockwise.
FockOperator normal_ordered_product(const Partition& sectors, cplx raise, double log_weight,
                                    const MatrixElement& raising, const MatrixElement& lowering,
                                    const std::function<double(int, int)>& weight_diag) {
  const auto up = exp_blocks(BlockOperator::build(
      sectors, [&](int m1, int m2, int n1, int n2) { return raising(m1, m2, n1, n2) * raise; }));
  const auto down = exp_blocks(BlockOperator::build(sectors, [&](int m1, int m2, int n1, int n2) {
    return lowering(m1, m2, n1, n2) * (-std::conj(raise));
  }));
  const auto middle = BlockOperator::build(sectors, [&](int m1, int m2, int n1, int n2) -> cplx {
    if (m1 != n1 || m2 != n2) return 0.0;
    return std::exp(log_weight * weight_diag(n1, n2));
  });
  return (up * middle * down).to_dense();
}

}  // namespace

FockOperator u_disentangled(const FockSpace& space, cplx xi) {
  if (std::abs(xi) >= std::numbers::pi / 2) {
    throw std::domain_error("u_disentangled: |xi| must be below pi/2");
  }
  const cplx eta = eta_of(xi);
  return normal_ordered_product(Partition::total_number(space), eta, std::log1p(std::norm(eta)),
                                su2_element(1.0, 0.0), su2_element(0.0, 1.0),
                                [](int n1, int n2) { return 0.5 * (n1 - n2); });
}

FockOperator v_disentangled(const FockSpace& space, cplx zeta) {
  const cplx kappa = kappa_of(zeta);
  return normal_ordered_product(Partition::number_difference(space), kappa, std::log1p(-std::norm(kappa)),
                                su11_element(1.0, 0.0), su11_element(0.0, 1.0),
                                [](int n1, int n2) { return 0.5 * (n1 + n2 + 1); });
}

double shell_deviation(const FockOperator& a, const FockOperator& b, int max_total) {
  const auto& space = a.space();
  if (!(space == b.space())) throw DimensionMismatch("shell_deviation: operators from different spaces");
  std::vector<int> low;
  for (int i = 0; i < space.dim(); ++i) {
    const auto [n1, n2] = space.occupation(i);
    if (n1 + n2 <= max_total) low.push_back(i);
  }
  double worst = 0.0;
  for (int j : low) {
    for (int i : low) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  }
  return worst;
}

double column_deviation(const FockOperator& a, const FockOperator& b, int max_total) {
  const auto& space = a.space();
  if (!(space == b.space())) throw DimensionMismatch("column_deviation: operators from different spaces");
  double worst = 0.0;
  for (int j = 0; j < space.dim(); ++j) {
    const auto [n1, n2] = space.occupation(j);
    if (n1 + n2 > max_total) continue;
    worst = std::max(worst, (a.matrix().col(j) - b.matrix().col(j)).norm());
  }
  return worst;
}

}  // namespace holo
