#include "minlift/imaging.hpp"

#include "minlift/diagnostics.hpp"
#include "minlift/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace minlift {

ImageGray::ImageGray(int side, HVector values) : M(side), pixels(std::move(values)) {
  if (side < 1) throw UsageError("ImageGray: side must be >= 1");
  require_dim(pixels, Index(side) * side, "ImageGray");
}

ImageGray ImageGray::filled(int side, double value) {
  return ImageGray(side, HVector::Constant(Index(side) * side, value));
}

ImageGray clamp01(const ImageGray& img) {
  return ImageGray(img.M, img.pixels.cwiseMax(0.0).cwiseMin(1.0));
}

// ---------------------------------------------------------------------------
// Discrete gradient

DiscreteGradient::DiscreteGradient(int side) : side_(side) {
  if (side < 1) throw UsageError("DiscreteGradient: side must be >= 1");
}

HVector DiscreteGradient::apply(const HVector& u) const {
  require_dim(u, cols(), "DiscreteGradient::apply");
  const Index M = side_;
  const Index m = M * M;
  HVector y = HVector::Zero(2 * m);
  for (Index r = 0; r < M; ++r) {
    for (Index c = 0; c + 1 < M; ++c) {
      y[r * M + c] = u[r * M + c + 1] - u[r * M + c];
    }
  }
  for (Index r = 0; r + 1 < M; ++r) {
    for (Index c = 0; c < M; ++c) {
      y[m + r * M + c] = u[(r + 1) * M + c] - u[r * M + c];
    }
  }
  return y;
}

HVector DiscreteGradient::adjoint(const HVector& y) const {
  require_dim(y, rows(), "DiscreteGradient::adjoint");
  const Index M = side_;
  const Index m = M * M;
  HVector u = HVector::Zero(m);
  for (Index r = 0; r < M; ++r) {
    for (Index c = 0; c + 1 < M; ++c) {
      const double h = y[r * M + c];
      u[r * M + c] -= h;
      u[r * M + c + 1] += h;
    }
  }
  for (Index r = 0; r + 1 < M; ++r) {
    for (Index c = 0; c < M; ++c) {
      const double v = y[m + r * M + c];
      u[r * M + c] -= v;
      u[(r + 1) * M + c] += v;
    }
  }
  return u;
}

HVector discrete_gradient_apply(const ImageGray& u) {
  return DiscreteGradient(u.M).apply(u.pixels);
}

HVector discrete_gradient_adjoint(const HVector& y, int side) {
  return DiscreteGradient(side).adjoint(y);
}

HVector solve_identity_plus_DtD(const HVector& rhs, int side) {
  return solve_identity_plus_gram(DiscreteGradient(side), rhs).x;
}

// ---------------------------------------------------------------------------
// Noise

HVector gaussian_noise(Index count, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw UsageError("gaussian_noise: sigma must be >= 0");
  NormalStream normal(seed);
  HVector out(count);
  for (Index i = 0; i < count; ++i) out[i] = sigma * normal.next();
  return out;
}

ImageGray add_gaussian_noise(const ImageGray& img, double sigma,
                             std::uint64_t seed) {
  if (!(sigma >= 0.0)) {
    throw UsageError("add_gaussian_noise: sigma must be >= 0");
  }
  if (sigma == 0.0) return img;
  return clamp01(
      ImageGray(img.M, img.pixels + gaussian_noise(img.size(), sigma, seed)));
}

// ---------------------------------------------------------------------------
// Phantom

ImageGray shepp_logan_phantom(int side) {
  if (side < 1) throw UsageError("shepp_logan_phantom: side must be >= 1");
  struct Ellipse {
    double value, a, b, x0, y0, phi_deg;
  };
  // Modified (higher contrast) Shepp-Logan head.
  static constexpr std::array<Ellipse, 10> kEllipses{{
      {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
      {-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0},
      {-0.2, 0.11, 0.31, 0.22, 0.0, -18.0},
      {-0.2, 0.16, 0.41, -0.22, 0.0, 18.0},
      {0.1, 0.21, 0.25, 0.0, 0.35, 0.0},
      {0.1, 0.046, 0.046, 0.0, 0.1, 0.0},
      {0.1, 0.046, 0.046, 0.0, -0.1, 0.0},
      {0.1, 0.046, 0.023, -0.08, -0.605, 0.0},
      {0.1, 0.023, 0.023, 0.0, -0.606, 0.0},
      {0.1, 0.023, 0.046, 0.06, -0.605, 0.0},
  }};
  HVector px = HVector::Zero(Index(side) * side);
  for (int r = 0; r < side; ++r) {
    const double y = 1.0 - (2.0 * r + 1.0) / side;
    for (int c = 0; c < side; ++c) {
      const double x = -1.0 + (2.0 * c + 1.0) / side;
      double value = 0.0;
      for (const Ellipse& e : kEllipses) {
        const double phi = e.phi_deg * std::numbers::pi / 180.0;
        const double dx = x - e.x0;
        const double dy = y - e.y0;
        const double xr = dx * std::cos(phi) + dy * std::sin(phi);
        const double yr = -dx * std::sin(phi) + dy * std::cos(phi);
        if ((xr * xr) / (e.a * e.a) + (yr * yr) / (e.b * e.b) <= 1.0) {
          value += e.value;
        }
      }
      px[Index(r) * side + c] = std::clamp(value, 0.0, 1.0);
    }
  }
  return ImageGray(side, std::move(px));
}

// ---------------------------------------------------------------------------
// Denoising problem

void DenoiseParams::validate() const {
  if (!(lambda1 > 0.0 && lambda2 > 0.0 && lambda3 > 0.0 && lambda4 > 0.0)) {
    throw UsageError("denoise: lambda1..lambda4 must be positive");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw UsageError("denoise: gamma must lie in (0, 1)");
  }
  if (!(noise_sigma >= 0.0)) throw UsageError("denoise: sigma must be >= 0");
  if (!(tol > 0.0)) throw UsageError("denoise: tol must be positive");
  if (max_iter < 1) throw UsageError("denoise: max_iter must be >= 1");
}

PDProblem build_denoise_problem(const ImageGray& noisy,
                                const DenoiseParams& params) {
  params.validate();
  const Index m = noisy.size();
  PDProblem problem;
  problem.C = std::make_shared<DiscreteGradient>(noisy.M);
  problem.f = {make_quadratic_shift(noisy.pixels),
               make_scaled_square(m, params.lambda1)};
  problem.g = {make_iso_norm(m, params.lambda2, params.lambda3),
               make_scaled_square(2 * m, params.lambda4)};
  problem.alpha = 1.0;
  problem.sigma = params.lambda1;
  problem.tau = params.lambda3;
  problem.beta_g = params.lambda4;
  problem.gamma = params.gamma;
  problem.validate();
  return problem;
}

const char* to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::MinimalLifting: return "mt";
    case Algorithm::ProductDR: return "dr-product";
  }
  return "unknown";
}

namespace {

struct Solver {
  StepFn step;
  HVector z0;
  // Primal-dual shadow (u, v) of a flat state.
  std::function<std::pair<HVector, HVector>(const HVector&)> shadow;
};

Solver make_solver(const PDProblem& problem, Algorithm algorithm) {
  const Index d1 = problem.primal_dim();
  const Index d2 = problem.dual_dim();
  const int n = problem.n();
  if (algorithm == Algorithm::MinimalLifting) {
    return {pd_step_fn(problem), HVector::Zero((n - 1) * (d1 + d2)),
            [problem](const HVector& z) { return pd_shadow(problem, z); }};
  }
  const auto ops = assemble_operators(problem);
  return {dr_product_step_fn(ops), HVector::Zero(n * (d1 + d2)),
          [n, d1, d2](const HVector& z) {
            HVector mean = HVector::Zero(d1 + d2);
            for (int i = 0; i < n; ++i) mean += z.segment(i * (d1 + d2), d1 + d2);
            mean /= double(n);
            return std::pair<HVector, HVector>(mean.head(d1), mean.tail(d2));
          }};
}

}  // namespace

DenoiseRun run_denoise(const ImageGray& noisy, const DenoiseParams& params,
                       const DenoiseOptions& options) {
  const PDProblem problem = build_denoise_problem(noisy, params);
  const Solver solver = make_solver(problem, options.algorithm);

  DriveOptions base;
  base.tol = params.tol;
  base.max_iter = params.max_iter;
  base.scale = double(noisy.size());
  base.stop_on_tol = !options.fixed_iterations;

  DenoiseRun run;
  DriveResult main = drive(solver.step, solver.z0, base);

  if (options.with_reference) {
    const int k = main.trace.iterations();
    const int total = std::max(200, 10 * k);
    DriveOptions extend;
    extend.tol = params.tol;
    extend.max_iter = std::max(1, total - k);
    extend.stop_on_tol = false;
    // The main run is a prefix of the reference run, so continue from it.
    DriveResult ref = total > k ? drive(solver.step, main.state, extend) : main;
    run.reference = ref.state;
    run.reference_iterations = total;

    DriveOptions traced = base;
    traced.reference = run.reference;
    if (options.with_gap) {
      const auto [ustar, vstar] = solver.shadow(run.reference);
      traced.gap = [&problem, &solver, ustar = ustar,
                    vstar = vstar](const HVector& z) {
        const auto [u, v] = solver.shadow(z);
        return primal_dual_gap(u, v, ustar, vstar, problem);
      };
    }
    main = drive(solver.step, solver.z0, traced);
  }

  run.trace = std::move(main.trace);
  run.final_state = std::move(main.state);
  run.restored = clamp01(ImageGray(noisy.M, solver.shadow(run.final_state).first));
  return run;
}

}  // namespace minlift
