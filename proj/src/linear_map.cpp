#include "minlift/linear_map.hpp"

#include "minlift/errors.hpp"

#include <cmath>
#include <string>

namespace minlift {

HVector LinearMap::identity_plus_gram(const HVector& x) const {
  return x + adjoint(apply(x));
}

HVector DenseMap::apply(const HVector& x) const {
  require_dim(x, cols(), "DenseMap::apply");
  return matrix_ * x;
}

HVector DenseMap::adjoint(const HVector& y) const {
  require_dim(y, rows(), "DenseMap::adjoint");
  return matrix_.transpose() * y;
}

CgResult solve_identity_plus_gram(const LinearMap& C, const HVector& rhs,
                                  double rel_tol, int max_iter) {
  require_dim(rhs, C.cols(), "solve_identity_plus_gram");
  if (max_iter <= 0) max_iter = static_cast<int>(10 * C.cols());

  CgResult result;
  result.x = HVector::Zero(rhs.size());
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return result;

  HVector r = rhs;
  HVector p = r;
  double rr = r.squaredNorm();
  const double target = rel_tol * rhs_norm;
  for (int it = 1; it <= max_iter; ++it) {
    const HVector Ap = C.identity_plus_gram(p);
    const double alpha = rr / p.dot(Ap);
    result.x.noalias() += alpha * p;
    r.noalias() -= alpha * Ap;
    const double rr_next = r.squaredNorm();
    result.iterations = it;
    if (std::sqrt(rr_next) <= target) {
      result.relative_residual = std::sqrt(rr_next) / rhs_norm;
      return result;
    }
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  const double residual = std::sqrt(rr) / rhs_norm;
  throw NumericError("conjugate gradient did not converge in " +
                         std::to_string(max_iter) +
                         " iterations (relative residual " +
                         std::to_string(residual) + ")",
                     residual);
}

double estimate_operator_norm(const LinearMap& C, int max_steps, double tol) {
  const Index n = C.cols();
  if (n == 0) return 0.0;
  // Deterministic, non-degenerate start.
  HVector x(n);
  for (Index i = 0; i < n; ++i) x[i] = 1.0 + 0.1 * std::sin(1.0 + double(i));
  x.normalize();
  double lambda = 0.0;
  for (int step = 0; step < max_steps; ++step) {
    HVector y = C.adjoint(C.apply(x));
    const double next = x.dot(y);
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;
    x = y / ny;
    if (std::abs(next - lambda) <= tol * std::max(1.0, next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

}  // namespace minlift
