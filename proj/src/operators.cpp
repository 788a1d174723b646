#include "minlift/operators.hpp"

#include "minlift/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace minlift {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw UsageError(std::string(what) + " must be positive and finite");
  }
}

void require_nonnegative(double value, const char* what) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw UsageError(std::string(what) + " must be non-negative and finite");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Proximal operators

HVector ProxSpec::apply(const HVector& w) const {
  require_dim(w, dim, "prox");
  return prox(w);
}

HVector prox_quadratic_shift(const HVector& w, const HVector& b) {
  require_dim(w, b.size(), "prox_quadratic_shift");
  return 0.5 * (w + b);
}

HVector prox_scaled_square(const HVector& w, double lambda) {
  require_positive(lambda, "prox_scaled_square: lambda");
  return w / (1.0 + lambda);
}

HVector prox_iso(const HVector& v, double lambda2, double lambda3) {
  if (v.size() % 2 != 0) throw UsageError("prox_iso: odd length");
  require_positive(lambda2, "prox_iso: lambda2");
  require_nonnegative(lambda3, "prox_iso: lambda3");
  const Index m = v.size() / 2;
  const double scale = 1.0 / (1.0 + lambda3);
  HVector out(v.size());
  for (Index i = 0; i < m; ++i) {
    const double a = v[i];
    const double b = v[m + i];
    const double norm = std::hypot(a, b);
    const double factor = norm > lambda2 ? (1.0 - lambda2 / norm) * scale : 0.0;
    out[i] = factor * a;
    out[m + i] = factor * b;
  }
  return out;
}

HVector prox_conjugate(const ProxSpec& f, const HVector& w) {
  return w - f.apply(w);
}

ProxSpec make_zero_function(Index dim) {
  ProxSpec f;
  f.kind = ProxKind::Zero;
  f.dim = dim;
  f.prox = [](const HVector& w) { return w; };
  f.value = [](const HVector&) { return 0.0; };
  // Conjugate of 0 is the indicator of {0}.
  f.conjugate = [](const HVector& v) { return v.isZero(0.0) ? 0.0 : kInf; };
  f.gradient_lipschitz = 0.0;
  return f;
}

ProxSpec make_quadratic_shift(HVector b) {
  require_finite(b, "make_quadratic_shift");
  ProxSpec f;
  f.kind = ProxKind::QuadraticShift;
  f.dim = b.size();
  f.prox = [b](const HVector& w) { return prox_quadratic_shift(w, b); };
  f.value = [b](const HVector& u) { return 0.5 * (u - b).squaredNorm(); };
  f.conjugate = [b](const HVector& v) {
    return 0.5 * v.squaredNorm() + v.dot(b);
  };
  f.strong_convexity = 1.0;
  f.gradient_lipschitz = 1.0;
  return f;
}

ProxSpec make_scaled_square(Index dim, double lambda) {
  require_positive(lambda, "make_scaled_square: lambda");
  ProxSpec f;
  f.kind = ProxKind::ScaledSquare;
  f.dim = dim;
  f.prox = [lambda](const HVector& w) { return prox_scaled_square(w, lambda); };
  f.value = [lambda](const HVector& u) { return 0.5 * lambda * u.squaredNorm(); };
  f.conjugate = [lambda](const HVector& v) {
    return 0.5 * v.squaredNorm() / lambda;
  };
  f.strong_convexity = lambda;
  f.gradient_lipschitz = lambda;
  return f;
}

ProxSpec make_iso_norm(Index pixels, double lambda2, double lambda3) {
  require_positive(lambda2, "make_iso_norm: lambda2");
  require_nonnegative(lambda3, "make_iso_norm: lambda3");
  ProxSpec f;
  f.kind = ProxKind::IsoNorm;
  f.dim = 2 * pixels;
  f.prox = [lambda2, lambda3](const HVector& w) {
    return prox_iso(w, lambda2, lambda3);
  };
  f.value = [pixels, lambda2, lambda3](const HVector& v) {
    double iso = 0.0;
    for (Index i = 0; i < pixels; ++i) iso += std::hypot(v[i], v[pixels + i]);
    return lambda2 * iso + 0.5 * lambda3 * v.squaredNorm();
  };
  // Per pixel: sup_x <w, x> - l2 |x| - (l3/2)|x|^2 = (|w| - l2)_+^2 / (2 l3),
  // or the indicator of the l2-ball when l3 = 0. The ball membership test
  // admits a relative rounding slack of 1e-12.
  f.conjugate = [pixels, lambda2, lambda3](const HVector& w) {
    double total = 0.0;
    for (Index i = 0; i < pixels; ++i) {
      const double excess = std::hypot(w[i], w[pixels + i]) - lambda2;
      if (excess <= 0.0) continue;
      if (lambda3 == 0.0) {
        if (excess <= 1e-12 * lambda2) continue;
        return kInf;
      }
      total += excess * excess / (2.0 * lambda3);
    }
    return total;
  };
  f.strong_convexity = lambda3;
  return f;
}

ProxSpec make_custom(Index dim, VectorMap prox, ScalarMap value,
                     ScalarMap conjugate) {
  if (!prox) throw UsageError("make_custom: prox evaluator required");
  ProxSpec f;
  f.kind = ProxKind::Custom;
  f.dim = dim;
  f.prox = std::move(prox);
  f.value = std::move(value);
  f.conjugate = std::move(conjugate);
  return f;
}

// ---------------------------------------------------------------------------
// Operators

const char* to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Zero: return "zero";
    case OperatorKind::ScaledIdentity: return "scaled-identity";
    case OperatorKind::Affine: return "affine";
    case OperatorKind::Subdifferential: return "subdifferential";
    case OperatorKind::GradientMap: return "gradient-map";
    case OperatorKind::SkewBlock: return "skew-block";
    case OperatorKind::ConeShift: return "cone-shift";
  }
  return "unknown";
}

HVector OperatorDesc::resolve(const HVector& w) const {
  require_dim(w, dim, "resolvent");
  return resolvent(w);
}

OperatorDesc zero_operator(Index dim) {
  OperatorDesc op;
  op.kind = OperatorKind::Zero;
  op.dim = dim;
  op.lip = 0.0;
  op.resolvent = [](const HVector& w) { return w; };
  op.value = [](const HVector& x) { return HVector::Zero(x.size()).eval(); };
  return op;
}

OperatorDesc scaled_identity(Index dim, double mu) {
  require_nonnegative(mu, "scaled_identity: mu");
  OperatorDesc op;
  op.kind = OperatorKind::ScaledIdentity;
  op.dim = dim;
  op.mu = mu;
  op.lip = mu;
  op.resolvent = [mu](const HVector& w) { return (w / (1.0 + mu)).eval(); };
  op.value = [mu](const HVector& x) { return (mu * x).eval(); };
  return op;
}

OperatorDesc affine_operator(Eigen::MatrixXd M, HVector c) {
  if (M.rows() != M.cols()) throw UsageError("affine_operator: M not square");
  require_dim(c, M.rows(), "affine_operator: c");
  const Index d = M.rows();

  const Eigen::MatrixXd sym = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym,
                                                      Eigen::EigenvaluesOnly);
  double mu = eig.eigenvalues().minCoeff();
  const double lip = d > 0 ? Eigen::JacobiSVD<Eigen::MatrixXd>(M)
                                 .singularValues()(0)
                           : 0.0;
  const double slack = 1e-12 * std::max(1.0, lip);
  if (mu < -slack) throw UsageError("affine_operator: M is not monotone");
  mu = std::max(mu, 0.0);

  auto lu = std::make_shared<const Eigen::PartialPivLU<Eigen::MatrixXd>>(
      Eigen::MatrixXd::Identity(d, d) + M);
  auto matrix = std::make_shared<const Eigen::MatrixXd>(std::move(M));

  OperatorDesc op;
  op.kind = OperatorKind::Affine;
  op.dim = d;
  op.mu = mu;
  op.lip = lip;
  op.resolvent = [lu, c](const HVector& w) {
    return HVector(lu->solve(w - c));
  };
  op.value = [matrix, c](const HVector& x) { return HVector(*matrix * x + c); };
  return op;
}

OperatorDesc subdifferential(const ProxSpec& f, double mu,
                             std::optional<double> lip) {
  require_nonnegative(mu, "subdifferential: mu");
  OperatorDesc op;
  op.kind = OperatorKind::Subdifferential;
  op.dim = f.dim;
  op.mu = mu;
  op.lip = lip;
  op.resolvent = f.prox;
  return op;
}

HVector resolvent_cone_shift(const HVector& w, double mu,
                             const std::vector<Cone>& cones) {
  require_nonnegative(mu, "resolvent_cone_shift: mu");
  if (static_cast<Index>(cones.size()) != w.size()) {
    throw UsageError("resolvent_cone_shift: one cone per coordinate required");
  }
  HVector out = w / (1.0 + mu);
  for (Index i = 0; i < out.size(); ++i) {
    switch (cones[i]) {
      case Cone::NonPositive: out[i] = std::max(out[i], 0.0); break;
      case Cone::NonNegative: out[i] = std::min(out[i], 0.0); break;
      case Cone::Zero: break;
    }
  }
  return out;
}

OperatorDesc cone_shift_operator(double mu, std::vector<Cone> cones) {
  require_nonnegative(mu, "cone_shift_operator: mu");
  OperatorDesc op;
  op.kind = OperatorKind::ConeShift;
  op.dim = static_cast<Index>(cones.size());
  op.mu = mu;
  op.resolvent = [mu, cones = std::move(cones)](const HVector& w) {
    return resolvent_cone_shift(w, mu, cones);
  };
  return op;
}

SkewResolvent resolvent_skew(const HVector& p, const HVector& q,
                             const LinearMap& C) {
  require_dim(p, C.cols(), "resolvent_skew: p");
  require_dim(q, C.rows(), "resolvent_skew: q");
  SkewResolvent out;
  out.u = solve_identity_plus_gram(C, p - C.adjoint(q)).x;
  out.v = q + C.apply(out.u);
  return out;
}

OperatorDesc skew_block_operator(std::shared_ptr<const LinearMap> C,
                                 std::optional<double> norm) {
  if (!C) throw UsageError("skew_block_operator: null map");
  const double c_norm = norm ? *norm : estimate_operator_norm(*C);
  const Index d1 = C->cols();
  const Index d2 = C->rows();
  OperatorDesc op;
  op.kind = OperatorKind::SkewBlock;
  op.dim = d1 + d2;
  op.lip = c_norm;
  op.resolvent = [C, d1, d2](const HVector& w) {
    const SkewResolvent r = resolvent_skew(w.head(d1), w.tail(d2), *C);
    HVector out(d1 + d2);
    out << r.u, r.v;
    return out;
  };
  op.value = [C, d1, d2](const HVector& x) {
    HVector out(d1 + d2);
    out << C->adjoint(x.tail(d2)), -C->apply(x.head(d1));
    return out;
  };
  return op;
}

OperatorDesc pair_operator(OperatorKind kind, Index du, VectorMap resolvent_u,
                           Index dv, VectorMap resolvent_v, double mu,
                           std::optional<double> lip) {
  OperatorDesc op;
  op.kind = kind;
  op.dim = du + dv;
  op.mu = mu;
  op.lip = lip;
  op.resolvent = [du, dv, ru = std::move(resolvent_u),
                  rv = std::move(resolvent_v)](const HVector& w) {
    HVector out(du + dv);
    out << ru(w.head(du)), rv(w.tail(dv));
    return out;
  };
  return op;
}

}  // namespace minlift
