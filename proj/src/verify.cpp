#include "minlift/verify.hpp"

#include "minlift/diagnostics.hpp"
#include "minlift/errors.hpp"
#include "minlift/imaging.hpp"
#include "minlift/operators.hpp"
#include "minlift/primal_dual.hpp"
#include "minlift/splitting.hpp"
#include "minlift/synthetic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <utility>

namespace minlift {

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

// Tracks the worst observed value of a quantity that must stay below a bound.
class Worst {
 public:
  explicit Worst(std::string label, double bound)
      : label_(std::move(label)), bound_(bound) {}

  void see(double value) {
    if (!(value <= worst_)) worst_ = std::isnan(value) ? INFINITY : value;
  }
  bool ok() const { return worst_ <= bound_; }
  std::string str() const {
    std::ostringstream out;
    out << label_ << " worst " << worst_ << " (bound " << bound_ << ")";
    return out.str();
  }

 private:
  std::string label_;
  double bound_;
  double worst_ = -INFINITY;
};

Outcome from(std::initializer_list<const Worst*> checks) {
  Outcome out;
  for (const Worst* w : checks) {
    out.passed = out.passed && w->ok();
    if (!out.detail.empty()) out.detail += "; ";
    out.detail += w->str();
  }
  return out;
}

struct Context {
  std::uint64_t seed;
  bool corrupt_prox;

  ProxSpec quadratic(const HVector& b) const {
    ProxSpec f = make_quadratic_shift(b);
    if (corrupt_prox) {
      f.prox = [b](const HVector& w) {
        return HVector(prox_quadratic_shift(w, b).array() + 1e-3);
      };
    }
    return f;
  }
};

double golden_min(const std::function<double(double)>& phi, double lo,
                  double hi, double tol) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = phi(c), fd = phi(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = phi(d);
    }
  }
  return 0.5 * (a + b);
}

// argmin_u f(u) + 1/2 ||w - u||^2 for d in {1, 2} by (nested) golden section.
HVector brute_force_prox(const ScalarMap& f, const HVector& w, double radius) {
  constexpr double tol = 1e-11;
  const auto objective = [&](const HVector& u) {
    return f(u) + 0.5 * (w - u).squaredNorm();
  };
  HVector u = w;
  if (w.size() == 1) {
    u[0] = golden_min([&](double t) { u[0] = t; return objective(u); },
                      w[0] - radius, w[0] + radius, tol);
    return u;
  }
  const auto inner = [&](double t0) {
    HVector v(2);
    v[0] = t0;
    v[1] = golden_min([&](double t1) { v[1] = t1; return objective(v); },
                      w[1] - radius, w[1] + radius, tol);
    return v;
  };
  const double best0 = golden_min([&](double t0) { return objective(inner(t0)); },
                                  w[0] - radius, w[0] + radius, tol);
  return inner(best0);
}

std::vector<std::pair<std::string, ProxSpec>> prox_catalog(const Context& ctx,
                                                           Index dim,
                                                           NormalStream& rng) {
  std::vector<std::pair<std::string, ProxSpec>> out;
  out.emplace_back("zero", make_zero_function(dim));
  out.emplace_back("quadratic-shift", ctx.quadratic(random_vector(dim, rng)));
  out.emplace_back("scaled-square", make_scaled_square(dim, 0.1 + 3.0 * rng.uniform()));
  if (dim % 2 == 0) {
    out.emplace_back("iso", make_iso_norm(dim / 2, 0.1 + rng.uniform(),
                                          rng.uniform() < 0.3 ? 0.0 : rng.uniform()));
  }
  return out;
}

// Resolvents catalogued by the operators module.
std::vector<std::pair<std::string, OperatorDesc>> resolvent_catalog(
    const Context& ctx, Index dim, NormalStream& rng) {
  std::vector<std::pair<std::string, OperatorDesc>> out;
  out.emplace_back("zero", zero_operator(dim));
  out.emplace_back("scaled-identity", scaled_identity(dim, 2.0 * rng.uniform()));
  out.emplace_back("affine",
                   affine_operator(random_monotone_matrix(dim, 3.0 * rng.uniform(), rng),
                                   random_vector(dim, rng)));
  for (auto& [name, f] : prox_catalog(ctx, dim, rng)) {
    out.emplace_back("prox-" + name, subdifferential(f, f.strong_convexity));
  }
  std::vector<Cone> cones;
  for (Index j = 0; j < dim; ++j) {
    cones.push_back(static_cast<Cone>(static_cast<int>(rng.uniform() * 3.0)));
  }
  out.emplace_back("cone-shift", cone_shift_operator(rng.uniform(), cones));
  const Index rows = 1 + static_cast<Index>(rng.uniform() * 4.0);
  const Index cols = dim - rows;
  if (cols >= 1) {
    Eigen::MatrixXd C(rows, cols);
    for (Index i = 0; i < C.size(); ++i) C.data()[i] = rng.next();
    out.emplace_back("skew-block",
                     skew_block_operator(std::make_shared<DenseMap>(C)));
  }
  return out;
}

LiftedPoint random_lifted(int count, Index dim, NormalStream& rng,
                          double scale = 1.0) {
  return LiftedPoint(count, dim, random_vector(count * dim, rng, scale));
}

// ---------------------------------------------------------------------------
// operators

Outcome suite_firm_nonexpansive(const Context& ctx) {
  NormalStream rng(ctx.seed);
  Worst w("firm-nonexpansive excess", 1e-12);
  for (int sample = 0; sample < 1000; ++sample) {
    const Index dim = 2 + 2 * static_cast<Index>(rng.uniform() * 3.0);
    for (const auto& [name, op] : resolvent_catalog(ctx, dim, rng)) {
      const HVector x = random_vector(dim, rng, 3.0);
      const HVector y = random_vector(dim, rng, 3.0);
      const HVector d = op.resolve(x) - op.resolve(y);
      // ||Jx - Jy||^2 <= <Jx - Jy, x - y>
      w.see((d.squaredNorm() - d.dot(x - y)) / std::max(1.0, (x - y).squaredNorm()));
    }
  }
  return from({&w});
}

Outcome suite_moreau(const Context& ctx) {
  NormalStream rng(ctx.seed + 1);
  Worst decomposition("prox_f + prox_f* - w (ulps of ||w||)", 4.0);
  Worst closed("prox_f* vs closed form", 1e-10);
  Worst young("Fenchel-Young equality", 1e-10);
  for (int sample = 0; sample < 500; ++sample) {
    const Index pixels = 1 + static_cast<Index>(rng.uniform() * 4.0);
    const Index dim = 2 * pixels;
    const HVector w = random_vector(dim, rng, 2.0);

    const HVector b = random_vector(dim, rng);
    const double lambda = 0.1 + 3.0 * rng.uniform();
    const double l2 = 0.1 + rng.uniform();
    const double l3 = rng.uniform() < 0.3 ? 0.0 : rng.uniform();

    // Conjugate proxes coded from the conjugate functions directly:
    //   (1/2||.-b||^2)^*(y) = 1/2||y||^2 + <b,y>      -> (w - b)/2
    //   (l/2||.||^2)^*(y)   = ||y||^2/(2l)            -> l w/(1+l)
    //   iso^* per pixel     = (|y| - l2)_+^2 / (2 l3) -> radial shrink to
    //                         (l3|w| + l2)/(1 + l3) outside the l2-ball
    const auto iso_conj_prox = [&](const HVector& v) {
      HVector out = v;
      for (Index i = 0; i < pixels; ++i) {
        const double r = std::hypot(v[i], v[pixels + i]);
        if (r <= l2) continue;
        const double target = (l3 * r + l2) / (1.0 + l3);
        out[i] *= target / r;
        out[pixels + i] *= target / r;
      }
      return out;
    };
    const std::vector<std::pair<ProxSpec, HVector>> cases = {
        {ctx.quadratic(b), 0.5 * (w - b)},
        {make_scaled_square(dim, lambda), lambda * w / (1.0 + lambda)},
        {make_iso_norm(pixels, l2, l3), iso_conj_prox(w)},
    };
    for (const auto& [f, expected] : cases) {
      const HVector p = f.apply(w);
      const HVector pc = prox_conjugate(f, w);
      decomposition.see((p + pc - w).lpNorm<Eigen::Infinity>() /
                        (std::numeric_limits<double>::epsilon() * std::max(1.0, w.lpNorm<Eigen::Infinity>())));
      closed.see((pc - expected).norm() / (1.0 + w.norm()));
      // f(p) + f^*(w - p) = <p, w - p> holds exactly at p = prox_f(w).
      const double fy = f.value(p) + f.conjugate(w - p) - p.dot(w - p);
      young.see(std::isfinite(fy) ? std::abs(fy) / (1.0 + w.squaredNorm()) : INFINITY);
    }
  }
  return from({&decomposition, &closed, &young});
}

Outcome suite_prox_oracle(const Context& ctx) {
  NormalStream rng(ctx.seed + 2);
  Worst w("prox vs golden-section minimiser", 1e-6);
  for (int sample = 0; sample < 40; ++sample) {
    for (Index dim : {1, 2}) {
      for (const auto& [name, f] : prox_catalog(ctx, dim, rng)) {
        const HVector x = random_vector(dim, rng, 2.0);
        // The minimiser lies within ||x|| + ||prox_f(0)|| + 1 of x.
        const double radius = 4.0 + 2.0 * x.norm() + 2.0 * f.prox(HVector::Zero(dim)).norm();
        const HVector brute = brute_force_prox(f.value, x, radius);
        w.see((f.apply(x) - brute).norm());
      }
    }
  }
  return from({&w});
}

Outcome suite_skew_resolvent(const Context& ctx) {
  NormalStream rng(ctx.seed + 3);
  Worst w("block equation residual", 1e-10);
  for (int sample = 0; sample < 200; ++sample) {
    const Index rows = 1 + static_cast<Index>(rng.uniform() * 8.0);
    const Index cols = 1 + static_cast<Index>(rng.uniform() * 8.0);
    Eigen::MatrixXd C(rows, cols);
    for (Index i = 0; i < C.size(); ++i) C.data()[i] = 2.0 * rng.next();
    const DenseMap map(C);
    const HVector p = random_vector(cols, rng);
    const HVector q = random_vector(rows, rng);
    const SkewResolvent r = resolvent_skew(p, q, map);
    // u + C^T v = p and v - C u = q.
    const double scale = std::hypot(p.norm(), q.norm());
    w.see((r.u + C.transpose() * r.v - p).norm() / scale);
    w.see((r.v - C * r.u - q).norm() / scale);
  }
  return from({&w});
}

// ---------------------------------------------------------------------------
// splitting

Outcome suite_mt_dr_equivalence(const Context& ctx) {
  NormalStream rng(ctx.seed + 4);
  Worst w("n=2 minimal lifting vs relaxed DR", 1e-12);
  for (int sample = 0; sample < 1000; ++sample) {
    const Index dim = 1 + static_cast<Index>(rng.uniform() * 6.0);
    const auto ops = make_mixed_family(2, dim, ctx.seed * 7919 + sample);
    const double gamma = 0.01 + 0.98 * rng.uniform();
    const SplitProblem problem(ops, gamma);
    const HVector z = random_vector(dim, rng, 3.0);
    const HVector mt = mt_apply(problem, LiftedPoint(1, dim, z)).next.flat();
    const HVector dr = (1.0 - gamma) * z + gamma * dr_apply(ops[0], ops[1], z);
    w.see((mt - dr).norm() / std::max(1.0, z.norm()));
  }
  return from({&w});
}

Outcome suite_consensus(const Context& ctx) {
  Worst spread("max ||x_i - x_1|| at a fixed point", 1e-8);
  Worst sum("||sum y_i|| at a fixed point", 1e-8);
  int qualified = 0;
  for (int sample = 0; sample < 24; ++sample) {
    FamilySpec spec;
    spec.n = 2 + sample % 4;
    spec.dim = 3 + sample % 5;
    spec.which = sample % 2 ? ContractionCase::A : ContractionCase::B;
    spec.seed = ctx.seed * 131 + sample;
    const AffineFamily family = make_affine_family(spec);
    const SplitProblem problem(family.ops, 0.5);
    DriveOptions options;
    options.tol = 1e-15;
    options.scale = 1.0;
    options.max_iter = 20000;
    const DriveResult run = drive(mt_step_fn(problem), HVector::Zero((spec.n - 1) * spec.dim), options);
    const LiftedPoint z(spec.n - 1, spec.dim, run.state);
    if (mt_fixed_point_residual(problem, z).residual > 1e-10) continue;
    ++qualified;
    const MtStep step = mt_apply(problem, z);
    for (int i = 1; i < spec.n; ++i) {
      spread.see((step.shadow.block(i) - step.shadow.block(0)).norm());
    }
    const BlockVector y = implied_operator_values(z, step.shadow);
    HVector total = HVector::Zero(spec.dim);
    for (int i = 0; i < spec.n; ++i) total += y.block(i);
    sum.see(total.norm());
  }
  Outcome out = from({&spread, &sum});
  out.detail += "; " + std::to_string(qualified) + "/24 fixed points reached";
  out.passed = out.passed && qualified >= 20;
  return out;
}

Outcome suite_mt_nonexpansive(const Context& ctx) {
  NormalStream rng(ctx.seed + 5);
  Worst w("||Tz - Tzbar|| / ||z - zbar|| - 1", 1e-12);
  for (int sample = 0; sample < 500; ++sample) {
    const int n = 2 + static_cast<int>(rng.uniform() * 5.0);
    const Index dim = 1 + static_cast<Index>(rng.uniform() * 8.0);
    std::vector<OperatorDesc> ops;
    if (sample % 2 == 0) {
      FamilySpec spec{n, dim, 0.0, 1.0 + 2.0 * rng.uniform(), ContractionCase::A,
                      ctx.seed * 17 + sample};
      ops = make_affine_family(spec).ops;
    } else {
      ops = make_mixed_family(n, dim, ctx.seed * 23 + sample);
    }
    const SplitProblem problem(ops, 0.05 + 0.9 * rng.uniform());
    const LiftedPoint z = random_lifted(n - 1, dim, rng, 3.0);
    const LiftedPoint zb = random_lifted(n - 1, dim, rng, 3.0);
    const double num = (mt_apply(problem, z).next.flat() - mt_apply(problem, zb).next.flat()).norm();
    w.see(num / (z.flat() - zb.flat()).norm() - 1.0);
  }
  return from({&w});
}

Outcome suite_counterexamples(const Context&) {
  Worst a("first family fixed-point residual", 1e-14);
  Worst b("second family fixed-point residual", 1e-14);
  const std::vector<double> ts = {-7.5, -3.0, -1.0, -0.25, 0.0, 0.5, 2.0, 11.0};
  for (double gamma : {0.1, 0.5, 0.9}) {
    const SplitProblem pa(zero_family(), gamma);
    for (double t : ts) {
      HVector flat(2);
      flat << t, t;
      a.see(mt_fixed_point_residual(pa, LiftedPoint(2, 1, flat)).residual);
    }
    for (double mu : {0.25, 1.0, 4.0}) {
      const SplitProblem pb(cone_family(mu), gamma);
      for (double t : ts) {
        HVector flat(2);
        flat << -std::abs(t), 0.0;
        b.see(mt_fixed_point_residual(pb, LiftedPoint(2, 1, flat)).residual);
      }
    }
  }
  return from({&a, &b});
}

// ---------------------------------------------------------------------------
// diagnostics

Outcome suite_descent(const Context& ctx) {
  NormalStream rng(ctx.seed + 6);
  Worst w("descent slack deficit / scale", 1e-10);
  for (int sample = 0; sample < 1000; ++sample) {
    const int n = 2 + sample % 5;
    const Index dim = 1 + static_cast<Index>(rng.uniform() * 8.0);
    const auto ops = make_mixed_family(n, dim, ctx.seed * 104729 + sample);
    const SplitProblem problem(ops, 0.01 + 0.98 * rng.uniform());
    const LiftedPoint z = random_lifted(n - 1, dim, rng, 3.0);
    const LiftedPoint zb = random_lifted(n - 1, dim, rng, 3.0);
    const double scale = 1.0 + (z.flat() - zb.flat()).squaredNorm();
    w.see(-check_descent_inequality(problem, z, zb) / scale);
  }
  return from({&w});
}

Outcome suite_chains(const Context&) {
  Worst eps("-eps'", 0.0);
  Worst alpha("-alpha'", 0.0);
  bool strict = true;
  for (int n = 2; n <= 10; ++n) {
    const double e = epsilon_chain(n, best_eps2(n)).prime;
    eps.see(-e);
    strict = strict && e > 0.0;
    for (int g = 1; g <= 9; ++g) {
      for (double mu : {0.1, 1.0, 10.0}) {
        const double a = alpha_chain(n, 0.1 * g, mu).prime;
        alpha.see(-a);
        strict = strict && a > 0.0;
      }
    }
  }
  Outcome out = from({&eps, &alpha});
  out.passed = out.passed && strict;
  return out;
}

Outcome suite_beta_range(const Context&) {
  bool ok = true;
  int checked = 0;
  std::string bad;
  for (int n = 2; n <= 10; ++n) {
    for (int g = 1; g <= 9; ++g) {
      for (double mu : {0.1, 1.0, 10.0}) {
        for (double L : {mu, 2.0 * mu, 10.0 * mu + 1.0}) {
          for (auto which : {ContractionCase::A, ContractionCase::B}) {
            const double beta = theoretical_beta(n, 0.1 * g, mu, L, which).beta;
            ++checked;
            if (!(beta > 0.0 && beta < 1.0)) {
              ok = false;
              bad = "beta=" + std::to_string(beta) + " at n=" + std::to_string(n);
            }
          }
        }
      }
    }
  }
  return {ok, std::to_string(checked) + " admissible inputs" + (bad.empty() ? "" : "; " + bad)};
}

Outcome suite_contraction(const Context& ctx) {
  NormalStream rng(ctx.seed + 8);
  Worst w("one-step ratio - beta", 1e-9);
  for (auto which : {ContractionCase::A, ContractionCase::B}) {
    for (double gamma : {0.3, 0.5, 0.7}) {
      for (int s = 0; s < 10; ++s) {
        FamilySpec spec;
        spec.which = which;
        spec.n = 3 + s % 3;
        spec.dim = 6 + s;
        spec.seed = ctx.seed * 7 + s;
        const AffineFamily family = make_affine_family(spec);
        const SplitProblem problem(family.ops, gamma);
        const double beta =
            theoretical_beta(spec.n, gamma, family.mu, family.L, which).beta;
        for (int t = 0; t < 20; ++t) {
          const LiftedPoint z = random_lifted(spec.n - 1, spec.dim, rng);
          const LiftedPoint zb = random_lifted(spec.n - 1, spec.dim, rng);
          const double ratio =
              (mt_apply(problem, z).next.flat() - mt_apply(problem, zb).next.flat()).norm() /
              (z.flat() - zb.flat()).norm();
          w.see(ratio - beta);
        }
      }
    }
  }
  return from({&w});
}

// ---------------------------------------------------------------------------
// primal_dual

PDProblem random_pd_problem(int n, NormalStream& rng) {
  const Index d1 = 1 + static_cast<Index>(rng.uniform() * 4.0);
  const Index d2 = 1 + static_cast<Index>(rng.uniform() * 4.0);
  Eigen::MatrixXd C(d2, d1);
  for (Index i = 0; i < C.size(); ++i) C.data()[i] = rng.next();
  PDProblem problem;
  problem.C = std::make_shared<DenseMap>(C);
  problem.alpha = 1.0;
  problem.sigma = 0.2 + rng.uniform();
  problem.tau = 0.2 + rng.uniform();
  problem.beta_g = 0.2 + rng.uniform();
  problem.gamma = 0.05 + 0.9 * rng.uniform();
  for (int i = 2; i <= n; ++i) {
    const bool last = i == n;
    problem.f.push_back(last ? make_scaled_square(d1, problem.sigma)
                             : make_quadratic_shift(random_vector(d1, rng)));
    problem.g.push_back(last ? make_scaled_square(d2, 1.0 / problem.beta_g)
                             : make_scaled_square(d2, problem.tau));
  }
  problem.validate();
  return problem;
}

Outcome suite_pd_equivalence(const Context& ctx) {
  NormalStream rng(ctx.seed + 9);
  Worst w("pd_step vs mt_apply", 1e-12);
  for (int n : {2, 3, 4}) {
    for (int s = 0; s < 10; ++s) {
      PDProblem problem = random_pd_problem(n, rng);
      const SplitProblem split(assemble_operators(problem), problem.gamma);
      for (int t = 0; t < 10; ++t) {
        PDState state = PDState::zeros(problem);
        state.p.flat() = random_vector(state.p.flat().size(), rng);
        state.q.flat() = random_vector(state.q.flat().size(), rng);
        const LiftedPoint z = to_lifted(state);
        const PDStepResult pd = pd_step(problem, state);
        const HVector mt = mt_apply(split, z).next.flat();
        w.see((to_lifted(pd.next).flat() - mt).norm() / std::max(1.0, z.flat().norm()));
      }
    }
  }
  return from({&w});
}

Outcome suite_pd_optimality(const Context& ctx) {
  NormalStream rng(ctx.seed + 10);
  Worst w("|u - closed-form optimum|", 1e-8);
  for (int s = 0; s < 20; ++s) {
    const double b = 2.0 * rng.next();
    const double c = 0.2 + 2.0 * rng.uniform();
    const double l1 = 0.05 + rng.uniform();
    const double l3 = 0.05 + rng.uniform();
    const double l4 = 0.05 + rng.uniform();
    PDProblem problem;
    problem.C = std::make_shared<DenseMap>(Eigen::MatrixXd::Constant(1, 1, c));
    problem.f = {make_quadratic_shift(HVector::Constant(1, b)), make_scaled_square(1, l1)};
    problem.g = {make_scaled_square(1, l3), make_scaled_square(1, l4)};
    problem.sigma = l1;
    problem.tau = l3;
    problem.beta_g = 1.0 / l4;
    problem.gamma = 0.5;
    problem.validate();
    DriveOptions options;
    options.tol = 1e-15;
    options.scale = 1.0;
    options.max_iter = 200000;
    const DriveResult run = drive(pd_step_fn(problem), HVector::Zero(4), options);
    const double u = pd_shadow(problem, run.state).first[0];
    // Infimal convolution of (l3/2)v^2 and (l4/2)v^2 is (kappa/2)v^2.
    const double kappa = l3 * l4 / (l3 + l4);
    w.see(std::abs(u - b / (1.0 + l1 + kappa * c * c)));
  }
  return from({&w});
}

Outcome suite_pd_rate(const Context& ctx) {
  const ImageGray clean = shepp_logan_phantom(24);
  DenoiseParams params;
  params.seed = ctx.seed;
  const ImageGray noisy = add_gaussian_noise(clean, params.noise_sigma, params.seed);
  DenoiseOptions options;
  options.with_gap = false;
  const DenoiseRun run = run_denoise(noisy, params, options);
  const RateReport report = fit_rate(run.trace);
  std::ostringstream detail;
  detail << "rate " << report.fitted_rate << ", r^2 " << report.r_squared
         << " over " << report.points << " points";
  const bool ok = report.points >= 10 && report.fitted_rate < 1.0 && report.r_squared >= 0.95;
  return {ok, detail.str()};
}

// ---------------------------------------------------------------------------
// imaging

Eigen::MatrixXd dense_gradient(int M) {
  Eigen::MatrixXd D1 = Eigen::MatrixXd::Zero(M, M);
  for (int i = 0; i + 1 < M; ++i) {
    D1(i, i) = -1.0;
    D1(i, i + 1) = 1.0;
  }
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(M, M);
  // Row-major pixels: index r*M + c. Horizontal differences act on c.
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2 * M * M, M * M);
  for (int r = 0; r < M; ++r) {
    for (int c = 0; c < M; ++c) {
      for (int k = 0; k < M; ++k) {
        D(r * M + c, r * M + k) = D1(c, k) * I(r, r);
        D(M * M + r * M + c, k * M + c) = D1(r, k);
      }
    }
  }
  return D;
}

Outcome suite_gradient_dense(const Context& ctx) {
  NormalStream rng(ctx.seed + 11);
  Worst w("matrix-free vs dense", 1e-9);
  for (int M = 1; M <= 4; ++M) {
    const Eigen::MatrixXd D = dense_gradient(M);
    const Eigen::MatrixXd S = Eigen::MatrixXd::Identity(M * M, M * M) + D.transpose() * D;
    for (int t = 0; t < 10; ++t) {
      const HVector u = random_vector(M * M, rng);
      const HVector y = random_vector(2 * M * M, rng);
      w.see((discrete_gradient_apply(ImageGray(M, u)) - D * u).norm());
      w.see((discrete_gradient_adjoint(y, M) - D.transpose() * y).norm());
      w.see((solve_identity_plus_DtD(u, M) - S.ldlt().solve(u)).norm());
    }
  }
  return from({&w});
}

Outcome suite_gradient_norm(const Context&) {
  Worst w("||D||^2", 8.0);
  for (int M : {8, 16, 32, 64}) {
    const double norm = estimate_operator_norm(DiscreteGradient(M));
    w.see(norm * norm);
  }
  return from({&w});
}

Outcome suite_denoise_pipeline(const Context& ctx) {
  const ImageGray clean = shepp_logan_phantom(16);
  DenoiseParams params;
  params.seed = ctx.seed;
  params.max_iter = 60;
  const ImageGray noisy = add_gaussian_noise(clean, params.noise_sigma, params.seed);
  const ImageGray again = add_gaussian_noise(clean, params.noise_sigma, params.seed);
  const DenoiseRun a = run_denoise(noisy, params);
  const DenoiseRun b = run_denoise(again, params);
  const bool same = noisy.pixels == again.pixels && a.restored.pixels == b.restored.pixels &&
                    a.trace.iterations() == b.trace.iterations();
  const bool in_range =
      a.restored.pixels.minCoeff() >= 0.0 && a.restored.pixels.maxCoeff() <= 1.0;
  return {same && in_range, std::string(same ? "deterministic" : "non-deterministic") +
                                (in_range ? ", pixels in [0,1]" : ", pixels out of range")};
}

using SuiteFn = Outcome (*)(const Context&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites = {
      {"firm-nonexpansive", suite_firm_nonexpansive},
      {"moreau", suite_moreau},
      {"prox-oracle", suite_prox_oracle},
      {"skew-resolvent", suite_skew_resolvent},
      {"mt-dr-equivalence", suite_mt_dr_equivalence},
      {"consensus", suite_consensus},
      {"mt-nonexpansive", suite_mt_nonexpansive},
      {"counterexamples", suite_counterexamples},
      {"descent", suite_descent},
      {"chains", suite_chains},
      {"beta-range", suite_beta_range},
      {"contraction", suite_contraction},
      {"pd-equivalence", suite_pd_equivalence},
      {"pd-optimality", suite_pd_optimality},
      {"pd-rate", suite_pd_rate},
      {"gradient-dense", suite_gradient_dense},
      {"gradient-norm", suite_gradient_norm},
      {"denoise-pipeline", suite_denoise_pipeline},
  };
  return suites;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& entry : registry()) names.push_back(entry.first);
  return names;
}

std::vector<SuiteResult> run_verification(const VerifyOptions& options) {
  const auto& suites = registry();
  if (options.suite) {
    const bool known = std::any_of(suites.begin(), suites.end(), [&](const auto& s) {
      return s.first == *options.suite;
    });
    if (!known) throw UsageError("unknown suite: " + *options.suite);
  }
  const Context ctx{options.seed, options.corrupt_prox};
  std::vector<SuiteResult> results;
  for (const auto& [name, fn] : suites) {
    if (options.suite && *options.suite != name) continue;
    SuiteResult result;
    result.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome outcome = fn(ctx);
      result.passed = outcome.passed;
      result.detail = outcome.detail;
    } catch (const std::exception& e) {
      result.passed = false;
      result.detail = std::string("exception: ") + e.what();
    }
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(result));
  }
  return results;
}

}  // namespace minlift
