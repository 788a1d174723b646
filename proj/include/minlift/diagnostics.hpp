#pragma once

#include "minlift/hvector.hpp"
#include "minlift/splitting.hpp"

#include <optional>
#include <span>
#include <vector>

namespace minlift {

struct PDProblem;

/// Right-hand side minus left-hand side of the one-step descent inequality
/// for T_MT at the pair (z, zbar). Non-negative up to rounding whenever the
/// mu metadata of the operators is valid.
double check_descent_inequality(const SplitProblem& problem,
                                const LiftedPoint& z, const LiftedPoint& zbar);

struct Chain {
  std::vector<double> values;
  double prime = 0.0;
};

/// eps_2 = eps2, eps_{i+1} = sqrt(2 - 1/eps_i) up to eps_{n-1}, and
/// eps' = min{2 - eps_2, 2 - 1/eps_i - eps_{i+1}, 1 - 1/eps_{n-1}}.
/// For n = 2 the chain is empty and eps' = 1.
Chain epsilon_chain(int n, double eps2);

/// eps2 on the grid {1.05, 1.10, ..., 1.95} that maximises eps'.
double best_eps2(int n);

/// alpha_{n-1} = 1 + 2 mu / (1 - gamma), alpha_{i-1} = sqrt(2 - 1/alpha_i),
/// alpha' = min{1 - 1/alpha_1, 2 - 1/alpha_i - alpha_{i-1}}.
/// `values` holds alpha_1, ..., alpha_{n-1}.
Chain alpha_chain(int n, double gamma, double mu);

enum class ContractionCase { A, B };

/// eta = 1 / (1 + L / sqrt(eps'))^2.
double lipschitz_eta(double L, double eps_prime);
/// beta = 1 - gamma (1 - gamma) alpha' eta.
double contraction_factor_a(double gamma, double alpha_prime, double eta);
/// beta = 1 - 2 gamma mu eta.
double contraction_factor_b(double gamma, double mu, double eta);

struct RateBound {
  double beta = 1.0;
  double eta = 0.0;
  double eps_prime = 0.0;
  double alpha_prime = 0.0;  // 0 in case (b)
  double eps2 = 0.0;
};

/// Certified bound ||T z - T zbar||^2 <= beta ||z - zbar||^2 under
/// case (a) (first n-1 operators L-Lipschitz, last mu-strongly monotone) or
/// case (b) (first n-1 mu-strongly monotone and L-Lipschitz).
/// eps2 defaults to best_eps2(n).
RateBound theoretical_beta(int n, double gamma, double mu, double L,
                           ContractionCase which,
                           std::optional<double> eps2 = std::nullopt);

struct RateReport {
  double fitted_rate = 1.0;
  double r_squared = 0.0;
  std::optional<double> theoretical_beta;
  double eps_prime = 0.0;
  double alpha_prime = 0.0;
  double eta = 0.0;
  int points = 0;
};

/// Least-squares fit of log d_k against k over the trace tail (first 10% of
/// the points dropped). Needs at least 10 positive finite distances.
RateReport fit_rate(std::span<const double> distances);
RateReport fit_rate(const IterationTrace& trace);

/// G(u, v) = L(u, v*) - L(u*, v) with L(u, v) = sum f_i(u) + <Cu, v> -
/// sum g_i^*(v). Every f_i needs `value` and every g_i needs `conjugate`.
double primal_dual_gap(const HVector& u, const HVector& v,
                       const HVector& ustar, const HVector& vstar,
                       const PDProblem& problem);

inline constexpr double kSnrCap = 300.0;

/// 20 log10(||original|| / ||original - restored||), capped at kSnrCap.
double snr(std::span<const double> original, std::span<const double> restored);

}  // namespace minlift
