/*
 * sectors.hpp — block-diagonal operators over conserved-charge sectors.
 *
 * U(xi) conserves n1 + n2 and V(zeta) conserves n1 - n2, so their exponents
 * (and exponential derivatives) split into independent blocks of size at
 * most cutoff + 1. Working blockwise keeps large cutoffs cheap and stops
 * rounding in one sector from contaminating another.
 */
#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "holo/fock.hpp"

namespace holo {

struct Sector {
  int charge = 0;
  std::vector<int> indices;  // flat basis indices, ascending

  bool operator==(const Sector&) const = default;
};

/// A partition of the flat basis into sectors.
class Partition {
 public:
  Partition(FockSpace space, std::vector<Sector> sectors);

  /// Sectors of fixed n1 + n2 (charge = n1 + n2).
  static Partition total_number(const FockSpace& space);
  /// Sectors of fixed n1 - n2 (charge = n1 - n2).
  static Partition number_difference(const FockSpace& space);

  const FockSpace& space() const { return space_; }
  const std::vector<Sector>& sectors() const { return *sectors_; }
  /// Sector holding a flat index, and the position inside it.
  std::pair<int, int> locate(int flat) const;

  bool operator==(const Partition& other) const {
    return sectors_ == other.sectors_ || (space_ == other.space_ && *sectors_ == *other.sectors_);
  }

 private:
  FockSpace space_;
  std::shared_ptr<const std::vector<Sector>> sectors_;
  std::shared_ptr<const std::vector<std::pair<int, int>>> where_;
};

/// <m1, m2 | X | n1, n2> as a function of the two occupations.
using MatrixElement = std::function<cplx(int m1, int m2, int n1, int n2)>;

class BlockOperator {
 public:
  BlockOperator(Partition partition, std::vector<Matrix> blocks);

  /// Evaluate the matrix element inside every block.
  static BlockOperator build(const Partition& partition, const MatrixElement& element);
  /// Restrict a dense operator; throws std::invalid_argument when it has
  /// entries coupling different sectors.
  static BlockOperator from_dense(const Partition& partition, const FockOperator& op);
  static BlockOperator identity(const Partition& partition);

  const Partition& partition() const { return partition_; }
  const std::vector<Matrix>& blocks() const { return blocks_; }

  FockOperator to_dense() const;
  Vector apply(const Vector& v) const;
  BlockOperator adjoint() const;
  BlockOperator operator*(const BlockOperator& other) const;
  BlockOperator operator+(const BlockOperator& other) const;
  BlockOperator operator-(const BlockOperator& other) const;
  BlockOperator operator*(cplx s) const;

 private:
  Partition partition_;
  std::vector<Matrix> blocks_;
};

/// Blockwise matrix_exp.
BlockOperator exp_blocks(const BlockOperator& x);

struct BlockExpDerivative {
  BlockOperator value;
  BlockOperator derivative;
};

/// Blockwise Frechet derivative of exp at x in direction e, each block from
/// the 2x2 block-augmentation identity.
BlockExpDerivative exp_frechet_blocks(const BlockOperator& x, const BlockOperator& e);

}  // namespace holo
