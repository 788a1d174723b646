#pragma once

#include "minlift/hvector.hpp"
#include "minlift/operators.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace minlift {

/// n maximally monotone operators on a common space plus the step size.
class SplitProblem {
 public:
  SplitProblem(std::vector<OperatorDesc> ops, double gamma);

  int size() const { return static_cast<int>(ops_.size()); }
  Index dim() const { return ops_.front().dim; }
  double gamma() const { return gamma_; }
  const OperatorDesc& op(int i) const { return ops_[i]; }
  const std::vector<OperatorDesc>& ops() const { return ops_; }

 private:
  std::vector<OperatorDesc> ops_;
  double gamma_;
};

struct MtStep {
  LiftedPoint next;
  ShadowTuple shadow;
};

/// One application of the minimal-lifting operator:
///   x_1 = J_1(z_1)
///   x_i = J_i(z_i + x_{i-1} - z_{i-1}),   2 <= i <= n-1
///   x_n = J_n(x_1 + x_{n-1} - z_{n-1})
///   z_i^+ = z_i + gamma (x_{i+1} - x_i)
MtStep mt_apply(const SplitProblem& problem, const LiftedPoint& z);

/// Douglas-Rachford: z + J_2(2 J_1(z) - z) - J_1(z).
HVector dr_apply(const OperatorDesc& A1, const OperatorDesc& A2,
                 const HVector& z);

struct DrProductStep {
  BlockVector next;
  HVector shadow;  // diagonal projection (average) of the input
};

/// Douglas-Rachford on H^n for 0 in (N_Delta + A)(x): first resolvent is the
/// averaging projection onto the diagonal, second is componentwise J_{A_i}.
DrProductStep dr_product_apply(const std::vector<OperatorDesc>& ops,
                               const BlockVector& Z);

struct FixedPointResidual {
  double residual = 0.0;   // ||T(z) - z||
  double consensus = 0.0;  // max_i ||x_i - x_1||
};

FixedPointResidual mt_fixed_point_residual(const SplitProblem& problem,
                                           const LiftedPoint& z);

/// Operator values y_i in A_i(x_i) implied by the resolvent steps of mt_apply.
/// They sum to x_1 - x_n.
BlockVector implied_operator_values(const LiftedPoint& z, const ShadowTuple& x);

// ---------------------------------------------------------------------------
// Fixed-point driver
// ---------------------------------------------------------------------------

enum class DriveStatus { Converged, MaxIter, Diverged };

const char* to_string(DriveStatus status);

struct TraceRecord {
  int k = 0;
  double change = 0.0;       // ||z^k - z^{k-1}|| / scale
  double dist = 0.0;         // ||z^k - reference|| / scale, NaN if absent
  double gap = 0.0;          // NaN if absent
  double elapsed_ms = 0.0;   // cumulative time spent in the step map
};

struct IterationTrace {
  std::vector<TraceRecord> records;
  DriveStatus status = DriveStatus::MaxIter;
  double scale = 1.0;

  int iterations() const { return static_cast<int>(records.size()); }
  std::vector<double> distances() const;
  std::vector<double> gaps() const;
};

using StepFn = std::function<HVector(const HVector&)>;

struct DriveOptions {
  double tol = 1e-4;
  int max_iter = 500;
  /// Normalisation m of the step change and distance. <= 0 means the total
  /// scalar dimension of the state.
  double scale = 0.0;
  /// Stop on the change criterion. When false the driver runs exactly
  /// max_iter steps (unless it diverges).
  bool stop_on_tol = true;
  std::optional<HVector> reference;
  std::function<double(const HVector&)> gap;
};

struct DriveResult {
  HVector state;
  IterationTrace trace;
};

/// Banach iteration z^{k+1} = step(z^k) with tracing. A non-finite state
/// halts with DriveStatus::Diverged rather than throwing.
DriveResult drive(const StepFn& step, HVector z0, const DriveOptions& options);

/// Convenience: the minimal-lifting step as a flat-state map.
StepFn mt_step_fn(const SplitProblem& problem);
/// Convenience: the product-space DR step as a flat-state map.
StepFn dr_product_step_fn(const std::vector<OperatorDesc>& ops);

}  // namespace minlift
