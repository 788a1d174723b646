#include "minlift/diagnostics.hpp"

#include "minlift/errors.hpp"
#include "minlift/primal_dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace minlift {

double check_descent_inequality(const SplitProblem& problem,
                                const LiftedPoint& z, const LiftedPoint& zbar) {
  const MtStep a = mt_apply(problem, z);
  const MtStep b = mt_apply(problem, zbar);
  const int n = problem.size();
  const double g = problem.gamma();

  const auto dx = [&](int i) -> HVector {
    return a.shadow.block(i) - b.shadow.block(i);
  };

  double rhs = (z.flat() - zbar.flat()).squaredNorm();
  for (int i = 0; i < n; ++i) {
    rhs -= 2.0 * g * problem.op(i).mu * dx(i).squaredNorm();
  }
  double lhs = (a.next.flat() - b.next.flat()).squaredNorm();
  for (int i = 0; i < n - 1; ++i) {
    lhs += g * (1.0 - g) * (dx(i) - dx(i + 1)).squaredNorm();
  }
  lhs += g * (dx(n - 1) - dx(0)).squaredNorm();
  return rhs - lhs;
}

Chain epsilon_chain(int n, double eps2) {
  if (n < 2) throw UsageError("epsilon_chain: n must be >= 2");
  if (!(eps2 > 1.0 && eps2 < 2.0)) {
    throw UsageError("epsilon_chain: eps2 must lie in (1, 2)");
  }
  Chain chain;
  if (n == 2) {
    chain.prime = 1.0;
    return chain;
  }
  // values[j] = eps_{j+2}, j = 0..n-3
  chain.values.push_back(eps2);
  for (int i = 3; i <= n - 1; ++i) {
    chain.values.push_back(std::sqrt(2.0 - 1.0 / chain.values.back()));
  }
  double prime = 2.0 - eps2;
  for (std::size_t j = 0; j + 1 < chain.values.size(); ++j) {
    prime = std::min(prime,
                     2.0 - 1.0 / chain.values[j] - chain.values[j + 1]);
  }
  prime = std::min(prime, 1.0 - 1.0 / chain.values.back());
  chain.prime = prime;
  return chain;
}

double best_eps2(int n) {
  double best = 1.05;
  double best_prime = -1.0;
  for (int step = 1; step <= 19; ++step) {
    const double eps2 = 1.0 + 0.05 * step;
    const double prime = epsilon_chain(n, eps2).prime;
    if (prime > best_prime) {
      best_prime = prime;
      best = eps2;
    }
  }
  return best;
}

Chain alpha_chain(int n, double gamma, double mu) {
  if (n < 2) throw UsageError("alpha_chain: n must be >= 2");
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw UsageError("alpha_chain: gamma must lie in (0, 1)");
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw UsageError("alpha_chain: mu must be positive");
  }
  // Built backwards from alpha_{n-1}, then reversed to alpha_1..alpha_{n-1}.
  std::vector<double> backwards{1.0 + 2.0 * mu / (1.0 - gamma)};
  for (int i = n - 1; i >= 2; --i) {
    backwards.push_back(std::sqrt(2.0 - 1.0 / backwards.back()));
  }
  Chain chain;
  chain.values.assign(backwards.rbegin(), backwards.rend());
  double prime = 1.0 - 1.0 / chain.values.front();
  for (std::size_t j = 1; j < chain.values.size(); ++j) {
    prime = std::min(prime,
                     2.0 - 1.0 / chain.values[j] - chain.values[j - 1]);
  }
  chain.prime = prime;
  return chain;
}

double lipschitz_eta(double L, double eps_prime) {
  if (!(L >= 0.0) || !std::isfinite(L)) {
    throw UsageError("lipschitz_eta: L must be finite and non-negative");
  }
  if (!(eps_prime > 0.0)) throw UsageError("lipschitz_eta: eps' must be > 0");
  const double denom = 1.0 + L / std::sqrt(eps_prime);
  return 1.0 / (denom * denom);
}

double contraction_factor_a(double gamma, double alpha_prime, double eta) {
  return 1.0 - gamma * (1.0 - gamma) * alpha_prime * eta;
}

double contraction_factor_b(double gamma, double mu, double eta) {
  return 1.0 - 2.0 * gamma * mu * eta;
}

RateBound theoretical_beta(int n, double gamma, double mu, double L,
                           ContractionCase which, std::optional<double> eps2) {
  if (n < 2) throw UsageError("theoretical_beta: n must be >= 2");
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw UsageError("theoretical_beta: gamma must lie in (0, 1)");
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw UsageError("theoretical_beta: mu must be positive");
  }
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw UsageError("theoretical_beta: L must be positive");
  }
  if (which == ContractionCase::B && mu > L) {
    throw UsageError(
        "theoretical_beta: a mu-strongly monotone L-Lipschitz operator needs "
        "mu <= L");
  }
  RateBound bound;
  bound.eps2 = eps2 ? *eps2 : best_eps2(n);
  bound.eps_prime = epsilon_chain(n, bound.eps2).prime;
  bound.eta = lipschitz_eta(L, bound.eps_prime);
  if (which == ContractionCase::A) {
    bound.alpha_prime = alpha_chain(n, gamma, mu).prime;
    bound.beta = contraction_factor_a(gamma, bound.alpha_prime, bound.eta);
  } else {
    bound.beta = contraction_factor_b(gamma, mu, bound.eta);
  }
  return bound;
}

RateReport fit_rate(std::span<const double> distances) {
  const std::size_t skip = distances.size() / 10;
  std::vector<double> ks;
  std::vector<double> logs;
  for (std::size_t i = skip; i < distances.size(); ++i) {
    const double d = distances[i];
    if (std::isfinite(d) && d > 0.0) {
      ks.push_back(double(i + 1));
      logs.push_back(std::log(d));
    }
  }
  if (ks.size() < 10) {
    throw UsageError("fit_rate: need at least 10 positive distances, got " +
                     std::to_string(ks.size()));
  }
  const double count = double(ks.size());
  double mk = 0.0, ml = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    mk += ks[i];
    ml += logs[i];
  }
  mk /= count;
  ml /= count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    sxx += (ks[i] - mk) * (ks[i] - mk);
    sxy += (ks[i] - mk) * (logs[i] - ml);
    syy += (logs[i] - ml) * (logs[i] - ml);
  }
  const double slope = sxy / sxx;
  RateReport report;
  report.fitted_rate = std::exp(slope);
  report.points = static_cast<int>(ks.size());
  if (syy <= 1e-300) {
    report.r_squared = 1.0;
  } else {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const double pred = ml + slope * (ks[i] - mk);
      ss_res += (logs[i] - pred) * (logs[i] - pred);
    }
    report.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return report;
}

RateReport fit_rate(const IterationTrace& trace) {
  const std::vector<double> d = trace.distances();
  return fit_rate(std::span<const double>(d));
}

double primal_dual_gap(const HVector& u, const HVector& v,
                       const HVector& ustar, const HVector& vstar,
                       const PDProblem& problem) {
  require_dim(u, problem.primal_dim(), "primal_dual_gap: u");
  require_dim(ustar, problem.primal_dim(), "primal_dual_gap: u*");
  require_dim(v, problem.dual_dim(), "primal_dual_gap: v");
  require_dim(vstar, problem.dual_dim(), "primal_dual_gap: v*");
  for (const auto& f : problem.f) {
    if (!f.value) throw UsageError("primal_dual_gap: f_i without a value");
  }
  for (const auto& g : problem.g) {
    if (!g.conjugate) {
      throw UsageError("primal_dual_gap: g_i without a closed-form conjugate");
    }
  }
  const auto f_sum = [&](const HVector& x) {
    double s = 0.0;
    for (const auto& f : problem.f) s += f.value(x);
    return s;
  };
  const auto g_conj_sum = [&](const HVector& y) {
    double s = 0.0;
    for (const auto& g : problem.g) s += g.conjugate(y);
    return s;
  };
  const double first =
      f_sum(u) + problem.C->apply(u).dot(vstar) - g_conj_sum(vstar);
  const double second =
      f_sum(ustar) + problem.C->apply(ustar).dot(v) - g_conj_sum(v);
  return first - second;
}

double snr(std::span<const double> original, std::span<const double> restored) {
  if (original.size() != restored.size()) {
    throw UsageError("snr: image sizes differ");
  }
  double signal = 0.0, error = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    signal += original[i] * original[i];
    const double e = original[i] - restored[i];
    error += e * e;
  }
  if (signal == 0.0) throw UsageError("snr: original image is zero");
  if (error == 0.0) return kSnrCap;
  return std::min(kSnrCap, 10.0 * std::log10(signal / error));
}

}  // namespace minlift
