// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when
// any criterion fails.

#include "oracles.hpp"

#include "minlift/diagnostics.hpp"
#include "minlift/imaging.hpp"
#include "minlift/primal_dual.hpp"
#include "minlift/splitting.hpp"
#include "minlift/synthetic.hpp"
#include "minlift/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace minlift;

namespace {

struct Verdict {
  bool passed = true;
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget_s;  // <= 0: no runtime bound
  std::function<Verdict()> run;
};

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "; ") + p;
  return out;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

LiftedPoint random_lifted(int blocks, Index dim, NormalStream& rng, double scale) {
  return LiftedPoint(blocks, dim, random_vector(blocks * dim, rng, scale));
}

Verdict descent() {
  NormalStream rng(101);
  double worst = -INFINITY;
  for (int draw = 0; draw < 1000; ++draw) {
    const int n = 2 + draw % 5;
    const Index dim = 1 + static_cast<Index>(rng.uniform() * 8.0);
    const SplitProblem problem(make_mixed_family(n, dim, 7919 + draw), 0.01 + 0.98 * rng.uniform());
    const LiftedPoint z = random_lifted(n - 1, dim, rng, 3.0);
    const LiftedPoint zb = random_lifted(n - 1, dim, rng, 3.0);
    const double scale = 1.0 + (z.flat() - zb.flat()).squaredNorm();
    worst = std::max(worst, -check_descent_inequality(problem, z, zb) / scale);
  }
  return {worst <= 1e-10, "draws=1000 max(-slack/scale)=" + num(worst) + " bound=1e-10"};
}

Verdict contraction() {
  NormalStream rng(202);
  double worst_ratio_excess = -INFINITY;
  double worst_fit_excess = -INFINITY;
  double worst_r2 = INFINITY;
  int failures = 0;
  for (auto which : {ContractionCase::A, ContractionCase::B}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      FamilySpec spec;
      spec.which = which;
      spec.seed = seed;
      const AffineFamily family = make_affine_family(spec);
      const LiftedPoint fixed = affine_fixed_point(family);
      for (double gamma : {0.3, 0.5, 0.7}) {
        const double beta = theoretical_beta(3, gamma, 1.0, 2.0, which).beta;
        const SplitProblem problem(family.ops, gamma);
        for (int t = 0; t < 10; ++t) {
          const LiftedPoint z = random_lifted(2, 20, rng, 1.0);
          const LiftedPoint zb = random_lifted(2, 20, rng, 1.0);
          const double ratio =
              (mt_apply(problem, z).next.flat() - mt_apply(problem, zb).next.flat()).norm() /
              (z.flat() - zb.flat()).norm();
          worst_ratio_excess = std::max(worst_ratio_excess, ratio - beta);
        }
        DriveOptions opt;
        opt.tol = 1e-10;
        opt.scale = 1.0;
        opt.max_iter = 5000;
        opt.reference = fixed.flat();
        const DriveResult run = drive(mt_step_fn(problem), HVector::Zero(40), opt);
        try {
          const RateReport r = fit_rate(run.trace);
          worst_fit_excess = std::max(worst_fit_excess, r.fitted_rate - beta);
          worst_r2 = std::min(worst_r2, r.r_squared);
        } catch (const std::exception&) {
          ++failures;
        }
      }
    }
  }
  const bool ok = worst_ratio_excess <= 1e-9 && worst_fit_excess <= 0.02 && worst_r2 >= 0.95 &&
                  failures == 0;
  return {ok, join({"instances=120 max(ratio-beta)=" + num(worst_ratio_excess),
                    "max(fitted-beta)=" + num(worst_fit_excess) + " bound=0.02",
                    "min r2=" + num(worst_r2), "unfittable=" + std::to_string(failures)})};
}

Verdict oracle_equivalence() {
  double worst_limit = 0.0;
  int unconverged = 0;
  for (int n = 2; n <= 6; ++n) {
    for (auto which : {ContractionCase::A, ContractionCase::B}) {
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        FamilySpec spec;
        spec.n = n;
        spec.dim = 8;
        spec.which = which;
        spec.seed = 300 + 10 * n + seed;
        const AffineFamily family = make_affine_family(spec);
        const SplitProblem problem(family.ops, 0.5);
        DriveOptions opt;
        opt.tol = 1e-14;
        opt.scale = 1.0;
        opt.max_iter = 20000;
        const DriveResult run = drive(mt_step_fn(problem), HVector::Zero((n - 1) * 8), opt);
        if (run.trace.status != DriveStatus::Converged) ++unconverged;
        const MtStep s = mt_apply(problem, LiftedPoint(n - 1, 8, run.state));
        const HVector x = oracle::affine_zero(family.M, family.c);
        worst_limit = std::max(worst_limit, (HVector(s.shadow.block(0)) - x).norm());
      }
    }
  }

  NormalStream rng(303);
  double worst_dr = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const Index dim = 1 + t % 6;
    const auto ops = make_mixed_family(2, dim, 40000 + t);
    const double gamma = 0.01 + 0.98 * rng.uniform();
    const HVector z = random_vector(dim, rng, 3.0);
    const HVector x1 = ops[0].resolvent(z);
    const HVector x2 = ops[1].resolvent(2.0 * x1 - z);
    const HVector relaxed = z + gamma * (x2 - x1);
    const HVector mt = mt_apply(SplitProblem(ops, gamma), LiftedPoint(1, dim, z)).next.flat();
    worst_dr = std::max(worst_dr, (mt - relaxed).norm() / std::max(1.0, z.norm()));
  }
  const bool ok = worst_limit <= 1e-8 && unconverged == 0 && worst_dr <= 1e-12;
  return {ok, join({"families=30 max|x-x*|=" + num(worst_limit) + " unconverged=" +
                        std::to_string(unconverged),
                    "n=2 samples=1000 max|T_MT-T_DR|=" + num(worst_dr)})};
}

Verdict counterexamples() {
  double worst = 0.0;
  int points = 0;
  const std::vector<double> ts = {-100.0, -7.5, -1.0, -1e-3, 0.0, 1e-3, 0.5, 3.0, 42.0};
  for (double gamma : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (double t : ts) {
      HVector flat(2);
      flat << t, t;
      worst = std::max(worst, mt_fixed_point_residual(SplitProblem(zero_family(), gamma),
                                                      LiftedPoint(2, 1, flat))
                                  .residual);
      ++points;
      for (double mu : {0.1, 1.0, 10.0}) {
        flat << -std::abs(t), 0.0;
        worst = std::max(worst, mt_fixed_point_residual(SplitProblem(cone_family(mu), gamma),
                                                        LiftedPoint(2, 1, flat))
                                    .residual);
        ++points;
      }
    }
  }
  return {worst <= 1e-14, "points=" + std::to_string(points) + " max residual=" + num(worst)};
}

PDProblem random_pd_problem(int n, NormalStream& rng) {
  const Index rows = 2 * (1 + static_cast<Index>(rng.uniform() * 2.0));
  const Index cols = 2 + static_cast<Index>(rng.uniform() * 4.0);
  Eigen::MatrixXd C(rows, cols);
  for (Index i = 0; i < C.size(); ++i) C.data()[i] = rng.next();
  PDProblem p;
  p.C = std::make_shared<DenseMap>(C);
  p.sigma = 0.1 + rng.uniform();
  p.tau = 0.1 + rng.uniform();
  p.beta_g = 0.1 + rng.uniform();
  p.gamma = 0.05 + 0.9 * rng.uniform();
  for (int i = 2; i <= n; ++i) {
    if (i == n) {
      p.f.push_back(make_scaled_square(cols, p.sigma));
      p.g.push_back(make_scaled_square(rows, 1.0 / p.beta_g));
    } else {
      p.f.push_back(make_quadratic_shift(random_vector(cols, rng)));
      p.g.push_back(make_iso_norm(rows / 2, 0.3, p.tau));
    }
  }
  p.validate();
  return p;
}

Verdict pd_consistency() {
  NormalStream rng(505);
  double worst = 0.0;
  int states = 0;
  for (int n : {2, 3, 4}) {
    for (int instance = 0; instance < 4; ++instance) {
      const PDProblem problem = random_pd_problem(n, rng);
      const SplitProblem split(assemble_operators(problem), problem.gamma);
      for (int t = 0; t < 100; ++t) {
        PDState state = PDState::zeros(problem);
        state.p.flat() = random_vector(state.p.flat().size(), rng, 2.0);
        state.q.flat() = random_vector(state.q.flat().size(), rng, 2.0);
        const HVector pd = to_lifted(pd_step(problem, state).next).flat();
        const HVector mt = mt_apply(split, to_lifted(state)).next.flat();
        worst = std::max(worst, (pd - mt).norm());
        ++states;
      }
    }
  }
  return {worst <= 1e-12, "states=" + std::to_string(states) + " max|pd-mt|=" + num(worst)};
}

Verdict prox_suites() {
  bool ok = true;
  std::vector<std::string> parts;
  for (const char* name : {"moreau", "prox-oracle", "firm-nonexpansive"}) {
    VerifyOptions opt;
    opt.suite = name;
    for (const SuiteResult& r : run_verification(opt)) {
      ok = ok && r.passed;
      parts.push_back(r.name + (r.passed ? " ok" : " FAILED") + " (" + r.detail + ")");
    }
  }
  return {ok, join(parts)};
}

// Shared by the denoising and gap criteria.
const ImageGray& phantom96() {
  static const ImageGray img = shepp_logan_phantom(96);
  return img;
}

Verdict denoise_trends() {
  const ImageGray& clean = phantom96();
  std::vector<std::string> parts;

  DenoiseParams params;
  params.max_iter = 100;
  const ImageGray noisy = add_gaussian_noise(clean, params.noise_sigma, params.seed);
  DenoiseOptions fixed;
  fixed.fixed_iterations = true;
  fixed.with_reference = false;
  fixed.with_gap = false;
  const auto snr_at = [&](double gamma) {
    DenoiseParams p = params;
    p.gamma = gamma;
    const ImageGray out = run_denoise(noisy, p, fixed).restored;
    return snr({clean.pixels.data(), size_t(clean.size())}, {out.pixels.data(), size_t(out.size())});
  };
  const double hi = snr_at(0.99), lo = snr_at(0.01);
  const bool snr_ok = hi >= lo + 5.0;
  parts.push_back("(i) snr(0.99)=" + num(hi) + " snr(0.01)=" + num(lo) + (snr_ok ? " ok" : " FAILED"));

  DenoiseOptions plain;
  plain.with_reference = false;
  plain.with_gap = false;
  double mt_total = 0.0, dr_total = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    DenoiseParams p;
    p.seed = seed;
    const ImageGray in = add_gaussian_noise(clean, p.noise_sigma, seed);
    plain.algorithm = Algorithm::MinimalLifting;
    mt_total += run_denoise(in, p, plain).trace.iterations();
    plain.algorithm = Algorithm::ProductDR;
    dr_total += run_denoise(in, p, plain).trace.iterations();
  }
  const bool iter_ok = mt_total < dr_total;
  parts.push_back("(ii) mean iterations mt=" + num(mt_total / 10) + " dr=" + num(dr_total / 10) +
                  (iter_ok ? " ok" : " FAILED"));

  DenoiseOptions traced;
  traced.fixed_iterations = true;
  traced.with_gap = false;
  const DenoiseRun run = run_denoise(noisy, params, traced);
  const RateReport rate = fit_rate(run.trace);
  const bool fit_ok = rate.r_squared >= 0.95;
  parts.push_back("(iii) 100-step distance fit rate=" + num(rate.fitted_rate) +
                  " r2=" + num(rate.r_squared) + (fit_ok ? " ok" : " FAILED"));
  return {snr_ok && iter_ok && fit_ok, join(parts)};
}

Verdict gap_decay() {
  DenoiseParams params;
  params.max_iter = 100;
  const ImageGray noisy = add_gaussian_noise(phantom96(), params.noise_sigma, params.seed);
  DenoiseOptions traced;
  traced.fixed_iterations = true;
  const std::vector<double> gaps = run_denoise(noisy, params, traced).trace.gaps();

  // Transient window: the first 10% of the trace, as in the rate fit.
  const size_t start = gaps.size() / 10;
  int increases = 0;
  double worst_rise = 0.0;
  for (size_t k = start + 1; k < gaps.size(); ++k) {
    const double rise = gaps[k] - gaps[k - 1];
    if (rise > 1e-12 * std::abs(gaps[k - 1])) {
      ++increases;
      worst_rise = std::max(worst_rise, rise / std::abs(gaps[k - 1]));
    }
  }
  const bool monotone = increases == 0;

  std::vector<double> magnitude(gaps.size());
  std::transform(gaps.begin(), gaps.end(), magnitude.begin(), [](double g) { return std::abs(g); });
  bool envelope = false;
  std::string fit = "envelope unfittable";
  try {
    const RateReport r = fit_rate(magnitude);
    envelope = r.fitted_rate < 1.0 && r.r_squared >= 0.95;
    fit = "envelope rate=" + num(r.fitted_rate) + " r2=" + num(r.r_squared);
  } catch (const std::exception&) {
  }
  return {monotone && envelope,
          join({"nonincreasing after k=" + std::to_string(start) + ": increases=" +
                    std::to_string(increases) + " max relative rise=" + num(worst_rise) +
                    (monotone ? " ok" : " FAILED"),
                fit + (envelope ? " ok" : " FAILED")})};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"descent-inequality", 10.0, descent},
      {"contraction-certification", 30.0, contraction},
      {"oracle-equivalence", 0.0, oracle_equivalence},
      {"counterexamples", 0.0, counterexamples},
      {"pd-mt-consistency", 0.0, pd_consistency},
      {"moreau-prox-suites", 0.0, prox_suites},
      {"denoising-trends", 180.0, denoise_trends},
      {"gap-decay", 0.0, gap_decay},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0 && seconds >= c.budget_s) {
      v.passed = false;
      v.detail += "; runtime exceeds " + num(c.budget_s) + " s";
    }
    if (!v.passed) ++failed;
    std::printf("%s %s %.2fs %s\n", v.passed ? "PASS" : "FAIL", c.name.c_str(), seconds,
                v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
