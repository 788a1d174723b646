#pragma once

// Independent reference computations for the unit and acceptance tests.
// Nothing here calls into the library's algorithms: dense matrices, direct
// solves and scalar minimisation only.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Forward difference with a zero last row.
inline Mat forward_difference(int M) {
  Mat D1 = Mat::Zero(M, M);
  for (int i = 0; i + 1 < M; ++i) {
    D1(i, i) = -1.0;
    D1(i, i + 1) = 1.0;
  }
  return D1;
}

// Kronecker form (Id (x) D1 ; D1 (x) Id) on row-major images. With row-major
// storage, index r*M + c, the Kronecker factor acting on the column index
// is the right one.
inline Mat dense_gradient(int M) {
  const Mat D1 = forward_difference(M);
  const Mat I = Mat::Identity(M, M);
  Mat D(2 * M * M, M * M);
  D.topRows(M * M) = Eigen::kroneckerProduct(I, D1);
  D.bottomRows(M * M) = Eigen::kroneckerProduct(D1, I);
  return D;
}

inline double golden(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-12) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  while (b - a > tol) {
    const double c = b - r * (b - a);
    const double d = a + r * (b - a);
    if (f(c) < f(d)) b = d; else a = c;
  }
  return 0.5 * (a + b);
}

// argmin over a box of phi(u) for u in R or R^2 by (nested) golden section.
inline Vec minimise(const std::function<double(const Vec&)>& phi, const Vec& centre,
                    double radius) {
  if (centre.size() == 1) {
    Vec u(1);
    u[0] = golden([&](double t) { Vec v(1); v[0] = t; return phi(v); },
                  centre[0] - radius, centre[0] + radius);
    return u;
  }
  const auto inner = [&](double t0) {
    Vec v(2);
    v[0] = t0;
    v[1] = golden([&](double t1) { Vec w(2); w << t0, t1; return phi(w); },
                  centre[1] - radius, centre[1] + radius);
    return v;
  };
  const double t0 = golden([&](double t) { return phi(inner(t)); },
                           centre[0] - radius, centre[0] + radius);
  return inner(t0);
}

// Affine resolvent (Id + M)^{-1}(w - c) by Householder QR.
inline Vec affine_resolvent(const Mat& M, const Vec& c, const Vec& w) {
  return (Mat::Identity(M.rows(), M.cols()) + M).colPivHouseholderQr().solve(w - c);
}

// Zero of sum_i (M_i x + c_i) by Householder QR.
inline Vec affine_zero(const std::vector<Mat>& M, const std::vector<Vec>& c) {
  Mat S = Mat::Zero(M[0].rows(), M[0].cols());
  Vec r = Vec::Zero(M[0].rows());
  for (std::size_t i = 0; i < M.size(); ++i) {
    S += M[i];
    r -= c[i];
  }
  return S.colPivHouseholderQr().solve(r);
}

// One product-space DR step for A_i = Id on a scalar space, written out:
// P = mean, R = 2P - Z, Z+ = Z + R/2 - P.
inline std::vector<double> dr_product_identity(const std::vector<double>& Z) {
  double mean = 0.0;
  for (double z : Z) mean += z;
  mean /= double(Z.size());
  std::vector<double> out;
  for (double z : Z) out.push_back(z + (2.0 * mean - z) / 2.0 - mean);
  return out;
}

}  // namespace oracle
