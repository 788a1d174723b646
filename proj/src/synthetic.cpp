#include "minlift/synthetic.hpp"

#include "minlift/errors.hpp"

#include <algorithm>
#include <cmath>

namespace minlift {

HVector random_vector(Index dim, NormalStream& rng, double scale) {
  HVector v(dim);
  for (Index i = 0; i < dim; ++i) v[i] = scale * rng.next();
  return v;
}

namespace {

Eigen::MatrixXd random_matrix(Index rows, Index cols, NormalStream& rng) {
  Eigen::MatrixXd A(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) A(i, j) = rng.next();
  }
  return A;
}

}  // namespace

Eigen::MatrixXd random_monotone_matrix(Index dim, double norm,
                                       NormalStream& rng) {
  if (!(norm >= 0.0)) throw UsageError("random_monotone_matrix: norm < 0");
  if (norm == 0.0 || dim == 0) return Eigen::MatrixXd::Zero(dim, dim);
  const Eigen::MatrixXd A = random_matrix(dim, dim, rng);
  const Eigen::MatrixXd skew = 0.5 * (A - A.transpose());
  // Rank-deficient PSD part, so the symmetric part has a zero eigenvalue
  // whenever dim >= 2.
  const Index rank = std::max<Index>(dim / 2, dim > 1 ? 1 : 0);
  const Eigen::MatrixXd B = random_matrix(dim, rank, rng);
  Eigen::MatrixXd G = skew + B * B.transpose() / double(dim);
  const double current = Eigen::JacobiSVD<Eigen::MatrixXd>(G).singularValues()(0);
  if (current > 0.0) G *= norm / current;
  return G;
}

AffineFamily make_affine_family(const FamilySpec& spec) {
  if (spec.n < 2) throw UsageError("make_affine_family: n must be >= 2");
  if (spec.dim < 1) throw UsageError("make_affine_family: dim must be >= 1");
  if (!(spec.mu >= 0.0) || !(spec.L > 0.0)) {
    throw UsageError("make_affine_family: need mu >= 0 and L > 0");
  }
  if (spec.which == ContractionCase::B && spec.mu > spec.L) {
    throw UsageError("make_affine_family: case (b) needs mu <= L");
  }
  NormalStream rng(spec.seed);
  AffineFamily family;
  family.mu = spec.mu;
  family.L = spec.L;
  const Index d = spec.dim;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
  for (int i = 0; i < spec.n; ++i) {
    const bool last = i == spec.n - 1;
    Eigen::MatrixXd M;
    if (spec.which == ContractionCase::A) {
      M = last ? Eigen::MatrixXd(spec.mu * I + random_monotone_matrix(d, spec.L, rng))
               : random_monotone_matrix(d, spec.L, rng);
    } else {
      M = last ? random_monotone_matrix(d, 1.0, rng)
               : Eigen::MatrixXd(spec.mu * I +
                                 random_monotone_matrix(d, spec.L - spec.mu, rng));
    }
    family.c.push_back(random_vector(d, rng));
    family.ops.push_back(affine_operator(M, family.c.back()));
    family.M.push_back(std::move(M));
  }
  return family;
}

HVector affine_zero(const AffineFamily& family) {
  const Index d = family.dim();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(d, d);
  HVector rhs = HVector::Zero(d);
  for (int i = 0; i < family.n(); ++i) {
    S += family.M[i];
    rhs -= family.c[i];
  }
  return S.fullPivLu().solve(rhs);
}

LiftedPoint affine_fixed_point(const AffineFamily& family) {
  const HVector x = affine_zero(family);
  LiftedPoint z(family.n() - 1, family.dim());
  HVector running = x;
  for (int i = 0; i < family.n() - 1; ++i) {
    running += family.M[i] * x + family.c[i];
    z.block(i) = running;
  }
  return z;
}

std::vector<OperatorDesc> make_mixed_family(int n, Index dim,
                                            std::uint64_t seed) {
  if (n < 2 || dim < 1) throw UsageError("make_mixed_family: bad shape");
  NormalStream rng(seed);
  std::vector<OperatorDesc> ops;
  for (int i = 0; i < n; ++i) {
    const auto kind = static_cast<int>(rng.uniform() * 5.0);
    // mu = 0 for roughly a third of the operators.
    const double mu = rng.uniform() < 0.35 ? 0.0 : 2.0 * rng.uniform();
    switch (kind) {
      case 0:
        ops.push_back(scaled_identity(dim, mu));
        break;
      case 1: {
        const Eigen::MatrixXd M =
            mu * Eigen::MatrixXd::Identity(dim, dim) +
            random_monotone_matrix(dim, 3.0 * rng.uniform(), rng);
        ops.push_back(affine_operator(M, random_vector(dim, rng)));
        ops.back().mu = mu;
        break;
      }
      case 2: {
        std::vector<Cone> cones;
        for (Index j = 0; j < dim; ++j) {
          cones.push_back(static_cast<Cone>(static_cast<int>(rng.uniform() * 3.0)));
        }
        ops.push_back(cone_shift_operator(mu, std::move(cones)));
        break;
      }
      case 3:
        if (dim % 2 == 0) {
          ops.push_back(subdifferential(
              make_iso_norm(dim / 2, 0.1 + rng.uniform(), mu), mu));
          break;
        }
        [[fallthrough]];
      default:
        ops.push_back(zero_operator(dim));
        break;
    }
  }
  return ops;
}

std::vector<OperatorDesc> zero_family() {
  return {zero_operator(1), zero_operator(1), zero_operator(1)};
}

std::vector<OperatorDesc> cone_family(double mu) {
  if (!(mu > 0.0)) throw UsageError("cone_family: mu must be positive");
  return {cone_shift_operator(mu, {Cone::NonPositive}),
          cone_shift_operator(mu, {Cone::NonNegative}),
          cone_shift_operator(mu, {Cone::Zero})};
}

}  // namespace minlift
