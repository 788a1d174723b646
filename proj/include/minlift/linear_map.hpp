#pragma once

#include "minlift/hvector.hpp"

#include <memory>

namespace minlift {

/// Bounded linear map C: R^{cols} -> R^{rows} with its adjoint.
class LinearMap {
 public:
  virtual ~LinearMap() = default;

  virtual Index rows() const = 0;
  virtual Index cols() const = 0;

  virtual HVector apply(const HVector& x) const = 0;
  virtual HVector adjoint(const HVector& y) const = 0;

  /// x + C^T C x, used by the conjugate gradient solve.
  HVector identity_plus_gram(const HVector& x) const;
};

/// Explicit matrix; used for small problems and as a test reference.
class DenseMap final : public LinearMap {
 public:
  explicit DenseMap(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {}

  Index rows() const override { return matrix_.rows(); }
  Index cols() const override { return matrix_.cols(); }
  HVector apply(const HVector& x) const override;
  HVector adjoint(const HVector& y) const override;

  const Eigen::MatrixXd& matrix() const { return matrix_; }

 private:
  Eigen::MatrixXd matrix_;
};

struct CgResult {
  HVector x;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Solves (Id + C^T C) x = rhs by conjugate gradient.
///
/// Stops when ||r|| <= rel_tol * ||rhs||. `max_iter <= 0` means 10 * C.cols().
/// Throws NumericError carrying the final relative residual if the budget runs
/// out first.
CgResult solve_identity_plus_gram(const LinearMap& C, const HVector& rhs,
                                  double rel_tol = 1e-12, int max_iter = 0);

/// Estimate of ||C|| by power iteration on C^T C (deterministic start vector).
double estimate_operator_norm(const LinearMap& C, int max_steps = 200,
                              double tol = 1e-10);

}  // namespace minlift
