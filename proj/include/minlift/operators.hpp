#pragma once

#include "minlift/hvector.hpp"
#include "minlift/linear_map.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace minlift {

using VectorMap = std::function<HVector(const HVector&)>;
using ScalarMap = std::function<double(const HVector&)>;

// ---------------------------------------------------------------------------
// Proximable functions
// ---------------------------------------------------------------------------

enum class ProxKind { Zero, QuadraticShift, ScaledSquare, IsoNorm, Custom };

/// A closed convex function known through its proximal operator.
///
/// `value` and `conjugate` are closed-form evaluators of f and f^*. Either may
/// be empty for custom functions; `conjugate` may return +inf outside the
/// domain of f^*.
struct ProxSpec {
  ProxKind kind = ProxKind::Custom;
  Index dim = 0;
  VectorMap prox;
  ScalarMap value;
  ScalarMap conjugate;
  double strong_convexity = 0.0;
  std::optional<double> gradient_lipschitz;

  HVector apply(const HVector& w) const;
};

/// f = 0 on R^d.
ProxSpec make_zero_function(Index dim);
/// f(u) = 1/2 ||u - b||^2.
ProxSpec make_quadratic_shift(HVector b);
/// f(u) = (lambda/2) ||u||^2, lambda > 0.
ProxSpec make_scaled_square(Index dim, double lambda);
/// g(v) = lambda2 ||v||_iso + (lambda3/2) ||v||^2 on R^{2m}, v = (v1, v2).
ProxSpec make_iso_norm(Index pixels, double lambda2, double lambda3);
ProxSpec make_custom(Index dim, VectorMap prox, ScalarMap value = {},
                     ScalarMap conjugate = {});

HVector prox_quadratic_shift(const HVector& w, const HVector& b);
HVector prox_scaled_square(const HVector& w, double lambda);
/// Group soft-thresholding of (v1, v2) followed by 1/(1 + lambda3) scaling.
/// A pixel whose gradient norm is exactly lambda2 is sent to zero.
HVector prox_iso(const HVector& v, double lambda2, double lambda3);
/// prox of f^* via the Moreau decomposition: w - prox_f(w).
HVector prox_conjugate(const ProxSpec& f, const HVector& w);

// ---------------------------------------------------------------------------
// Maximally monotone operators
// ---------------------------------------------------------------------------

enum class OperatorKind {
  Zero,
  ScaledIdentity,
  Affine,
  Subdifferential,
  GradientMap,
  SkewBlock,
  ConeShift,
};

const char* to_string(OperatorKind kind);

/// A maximally monotone operator A on R^dim, represented by its resolvent
/// J_A = (Id + A)^{-1}.
///
/// `mu` is a strong-monotonicity modulus (0 for merely monotone) and `lip` a
/// Lipschitz constant when A is single-valued and Lipschitz. `value` evaluates
/// A itself and is only present for single-valued operators.
struct OperatorDesc {
  OperatorKind kind = OperatorKind::Zero;
  Index dim = 0;
  double mu = 0.0;
  std::optional<double> lip;
  VectorMap resolvent;
  VectorMap value;

  /// Resolvent with dimension check.
  HVector resolve(const HVector& w) const;
};

OperatorDesc zero_operator(Index dim);
/// A = mu Id.
OperatorDesc scaled_identity(Index dim, double mu);
/// A(x) = M x + c. M must be monotone (symmetric part positive semidefinite).
/// Metadata is computed: mu = lambda_min((M + M^T)/2), lip = ||M||_2.
OperatorDesc affine_operator(Eigen::MatrixXd M, HVector c);
/// A = subdifferential of f; resolvent = prox_f.
OperatorDesc subdifferential(const ProxSpec& f, double mu,
                             std::optional<double> lip = std::nullopt);

enum class Cone { NonPositive, NonNegative, Zero };

/// Resolvent of the cone-shifted identity: w / (1 + mu) projected coordinate
/// wise onto the normal cone of the declared cone (R_- -> R_+, R_+ -> R_-,
/// {0} -> R).
HVector resolvent_cone_shift(const HVector& w, double mu,
                             const std::vector<Cone>& cones);
OperatorDesc cone_shift_operator(double mu, std::vector<Cone> cones);

struct SkewResolvent {
  HVector u;
  HVector v;
};

/// Resolvent of the skew block [[0, C^*], [-C, 0]] evaluated at (p, q):
/// u = (Id + C^*C)^{-1}(p - C^*q), v = q + C u.
SkewResolvent resolvent_skew(const HVector& p, const HVector& q,
                             const LinearMap& C);

/// Skew block operator on R^{cols + rows}. `norm` is a known bound on ||C||;
/// estimated by power iteration when absent.
OperatorDesc skew_block_operator(std::shared_ptr<const LinearMap> C,
                                 std::optional<double> norm = std::nullopt);

/// Block-diagonal operator (A_u, A_v) on R^{du + dv} from the two component
/// resolvents.
OperatorDesc pair_operator(OperatorKind kind, Index du, VectorMap resolvent_u,
                           Index dv, VectorMap resolvent_v, double mu,
                           std::optional<double> lip);

}  // namespace minlift
