#pragma once

#include <Eigen/Dense>

#include <string_view>

namespace minlift {

/// Element of a finite-dimensional real Hilbert space with the Euclidean
/// inner product.
using HVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Throws UsageError if any entry is NaN or infinite.
void require_finite(const HVector& x, std::string_view what);

/// Throws UsageError unless x has exactly `dim` entries.
void require_dim(const HVector& x, Index dim, std::string_view what);

/// A tuple of `count` vectors of equal dimension stored contiguously.
///
/// Used for the lifted state z = (z_1, ..., z_{n-1}) of the minimal-lifting
/// iteration, the shadow tuple x = (x_1, ..., x_n), and the product-space
/// Douglas-Rachford state. The flat layout lets the fixed-point driver treat
/// any of them as a single vector.
class BlockVector {
 public:
  BlockVector() = default;
  BlockVector(int count, Index dim);
  BlockVector(int count, Index dim, HVector flat);

  int count() const { return count_; }
  Index dim() const { return dim_; }

  auto block(int i) { return flat_.segment(i * dim_, dim_); }
  auto block(int i) const { return flat_.segment(i * dim_, dim_); }

  const HVector& flat() const { return flat_; }
  HVector& flat() { return flat_; }

 private:
  int count_ = 0;
  Index dim_ = 0;
  HVector flat_;
};

using LiftedPoint = BlockVector;
using ShadowTuple = BlockVector;

}  // namespace minlift
