#include "holo/sectors.hpp"

#include <map>
#include <stdexcept>

#include "holo/linalg.hpp"

namespace holo {

namespace {

Partition by_charge(const FockSpace& space, const std::function<int(int, int)>& charge) {
  std::map<int, Sector> grouped;
  for (int i = 0; i < space.dim(); ++i) {
    const auto [n1, n2] = space.occupation(i);
    const int c = charge(n1, n2);
    auto& s = grouped[c];
    s.charge = c;
    s.indices.push_back(i);
  }
  std::vector<Sector> sectors;
  sectors.reserve(grouped.size());
  for (auto& [c, s] : grouped) sectors.push_back(std::move(s));
  return {space, std::move(sectors)};
}

void require_same(const Partition& a, const Partition& b) {
  if (!(a == b)) throw DimensionMismatch("block operators over different partitions");
}

}  // namespace

Partition::Partition(FockSpace space, std::vector<Sector> sectors) : space_(space) {
  std::vector<std::pair<int, int>> where(space.dim(), {-1, -1});
  for (int s = 0; s < static_cast<int>(sectors.size()); ++s) {
    for (int k = 0; k < static_cast<int>(sectors[s].indices.size()); ++k) {
      const int flat = sectors[s].indices[k];
      if (flat < 0 || flat >= space.dim() || where[flat].first >= 0) {
        throw std::invalid_argument("sectors do not partition the basis");
      }
      where[flat] = {s, k};
    }
  }
  for (const auto& w : where) {
    if (w.first < 0) throw std::invalid_argument("sectors do not cover the basis");
  }
  sectors_ = std::make_shared<const std::vector<Sector>>(std::move(sectors));
  where_ = std::make_shared<const std::vector<std::pair<int, int>>>(std::move(where));
}

Partition Partition::total_number(const FockSpace& space) {
  return by_charge(space, [](int n1, int n2) { return n1 + n2; });
}

Partition Partition::number_difference(const FockSpace& space) {
  return by_charge(space, [](int n1, int n2) { return n1 - n2; });
}

std::pair<int, int> Partition::locate(int flat) const { return where_->at(flat); }

BlockOperator::BlockOperator(Partition partition, std::vector<Matrix> blocks)
    : partition_(std::move(partition)), blocks_(std::move(blocks)) {
  const auto& sectors = partition_.sectors();
  if (blocks_.size() != sectors.size()) throw DimensionMismatch("block count does not match partition");
  for (std::size_t s = 0; s < sectors.size(); ++s) {
    const auto n = static_cast<Eigen::Index>(sectors[s].indices.size());
    if (blocks_[s].rows() != n || blocks_[s].cols() != n) throw DimensionMismatch("block shape mismatch");
  }
}

BlockOperator BlockOperator::build(const Partition& partition, const MatrixElement& element) {
  const FockSpace& space = partition.space();
  std::vector<Matrix> blocks;
  blocks.reserve(partition.sectors().size());
  for (const auto& sector : partition.sectors()) {
    const auto n = static_cast<Eigen::Index>(sector.indices.size());
    Matrix b(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto [n1, n2] = space.occupation(sector.indices[j]);
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto [m1, m2] = space.occupation(sector.indices[i]);
        b(i, j) = element(m1, m2, n1, n2);
      }
    }
    blocks.push_back(std::move(b));
  }
  return {partition, std::move(blocks)};
}

BlockOperator BlockOperator::from_dense(const Partition& partition, const FockOperator& op) {
  if (!(op.space() == partition.space())) throw DimensionMismatch("operator and partition spaces differ");
  const Matrix& m = op.matrix();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const int sj = partition.locate(static_cast<int>(j)).first;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (m(i, j) != cplx(0) && partition.locate(static_cast<int>(i)).first != sj) {
        throw std::invalid_argument("operator couples different sectors");
      }
    }
  }
  return build(partition, [&](int m1, int m2, int n1, int n2) {
    const FockSpace& s = partition.space();
    return m(s.index(m1, m2), s.index(n1, n2));
  });
}

BlockOperator BlockOperator::identity(const Partition& partition) {
  std::vector<Matrix> blocks;
  for (const auto& sector : partition.sectors()) {
    const auto n = static_cast<Eigen::Index>(sector.indices.size());
    blocks.push_back(Matrix::Identity(n, n));
  }
  return {partition, std::move(blocks)};
}

FockOperator BlockOperator::to_dense() const {
  const FockSpace& space = partition_.space();
  Matrix out = Matrix::Zero(space.dim(), space.dim());
  const auto& sectors = partition_.sectors();
  for (std::size_t s = 0; s < sectors.size(); ++s) {
    const auto& idx = sectors[s].indices;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      for (std::size_t i = 0; i < idx.size(); ++i) out(idx[i], idx[j]) = blocks_[s](i, j);
    }
  }
  return {space, std::move(out)};
}

Vector BlockOperator::apply(const Vector& v) const {
  if (v.size() != partition_.space().dim()) throw DimensionMismatch("vector length does not match space");
  Vector out = Vector::Zero(v.size());
  const auto& sectors = partition_.sectors();
  for (std::size_t s = 0; s < sectors.size(); ++s) {
    const auto& idx = sectors[s].indices;
    const auto n = static_cast<Eigen::Index>(idx.size());
    Vector local(n);
    bool any = false;
    for (Eigen::Index k = 0; k < n; ++k) {
      local(k) = v(idx[k]);
      any = any || local(k) != cplx(0);
    }
    if (!any) continue;
    const Vector r = blocks_[s] * local;
    for (Eigen::Index k = 0; k < n; ++k) out(idx[k]) = r(k);
  }
  return out;
}

BlockOperator BlockOperator::adjoint() const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const auto& b : blocks_) blocks.push_back(b.adjoint());
  return {partition_, std::move(blocks)};
}

BlockOperator BlockOperator::operator*(const BlockOperator& other) const {
  require_same(partition_, other.partition_);
  std::vector<Matrix> blocks;
  for (std::size_t s = 0; s < blocks_.size(); ++s) blocks.push_back(blocks_[s] * other.blocks_[s]);
  return {partition_, std::move(blocks)};
}

BlockOperator BlockOperator::operator+(const BlockOperator& other) const {
  require_same(partition_, other.partition_);
  std::vector<Matrix> blocks;
  for (std::size_t s = 0; s < blocks_.size(); ++s) blocks.push_back(blocks_[s] + other.blocks_[s]);
  return {partition_, std::move(blocks)};
}

BlockOperator BlockOperator::operator-(const BlockOperator& other) const {
  require_same(partition_, other.partition_);
  std::vector<Matrix> blocks;
  for (std::size_t s = 0; s < blocks_.size(); ++s) blocks.push_back(blocks_[s] - other.blocks_[s]);
  return {partition_, std::move(blocks)};
}

BlockOperator BlockOperator::operator*(cplx s) const {
  std::vector<Matrix> blocks;
  for (const auto& b : blocks_) blocks.push_back(b * s);
  return {partition_, std::move(blocks)};
}

BlockOperator exp_blocks(const BlockOperator& x) {
  std::vector<Matrix> blocks;
  blocks.reserve(x.blocks().size());
  for (const auto& b : x.blocks()) blocks.push_back(matrix_exp(b));
  return {x.partition(), std::move(blocks)};
}

BlockExpDerivative exp_frechet_blocks(const BlockOperator& x, const BlockOperator& e) {
  if (!(x.partition() == e.partition())) throw DimensionMismatch("block operators over different partitions");
  std::vector<Matrix> values;
  std::vector<Matrix> derivs;
  for (std::size_t s = 0; s < x.blocks().size(); ++s) {
    auto d = exp_frechet_block(x.blocks()[s], e.blocks()[s]);
    values.push_back(std::move(d.value));
    derivs.push_back(std::move(d.derivative));
  }
  return {BlockOperator(x.partition(), std::move(values)), BlockOperator(x.partition(), std::move(derivs))};
}

}  // namespace holo
