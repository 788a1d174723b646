#include "minlift/splitting.hpp"

#include "minlift/errors.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace minlift {

SplitProblem::SplitProblem(std::vector<OperatorDesc> ops, double gamma)
    : ops_(std::move(ops)), gamma_(gamma) {
  if (ops_.size() < 2) throw UsageError("SplitProblem: need n >= 2 operators");
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw UsageError("SplitProblem: gamma must lie in (0, 1)");
  }
  for (const auto& op : ops_) {
    if (op.dim != ops_.front().dim) {
      throw UsageError("SplitProblem: operators act on different spaces");
    }
    if (!op.resolvent) throw UsageError("SplitProblem: missing resolvent");
  }
}

namespace {

void check_lifted(const SplitProblem& problem, const LiftedPoint& z) {
  if (z.count() != problem.size() - 1 || z.dim() != problem.dim()) {
    throw UsageError("mt_apply: lifted point has " + std::to_string(z.count()) +
                     " blocks of dimension " + std::to_string(z.dim()) +
                     ", expected " + std::to_string(problem.size() - 1) +
                     " of dimension " + std::to_string(problem.dim()));
  }
}

}  // namespace

MtStep mt_apply(const SplitProblem& problem, const LiftedPoint& z) {
  check_lifted(problem, z);
  const int n = problem.size();
  const Index d = problem.dim();

  ShadowTuple x(n, d);
  x.block(0) = problem.op(0).resolve(z.block(0));
  for (int i = 1; i < n - 1; ++i) {
    x.block(i) =
        problem.op(i).resolve(z.block(i) + x.block(i - 1) - z.block(i - 1));
  }
  x.block(n - 1) = problem.op(n - 1).resolve(x.block(0) + x.block(n - 2) -
                                             z.block(n - 2));

  LiftedPoint next = z;
  for (int i = 0; i < n - 1; ++i) {
    next.block(i) += problem.gamma() * (x.block(i + 1) - x.block(i));
  }
  return {std::move(next), std::move(x)};
}

HVector dr_apply(const OperatorDesc& A1, const OperatorDesc& A2,
                 const HVector& z) {
  const HVector x1 = A1.resolve(z);
  const HVector x2 = A2.resolve(2.0 * x1 - z);
  return z + x2 - x1;
}

DrProductStep dr_product_apply(const std::vector<OperatorDesc>& ops,
                               const BlockVector& Z) {
  const int n = static_cast<int>(ops.size());
  if (n < 2) throw UsageError("dr_product_apply: need n >= 2 operators");
  if (Z.count() != n || Z.dim() != ops.front().dim) {
    throw UsageError("dr_product_apply: state shape does not match operators");
  }
  HVector mean = HVector::Zero(Z.dim());
  for (int i = 0; i < n; ++i) mean += Z.block(i);
  mean /= double(n);

  BlockVector next = Z;
  for (int i = 0; i < n; ++i) {
    const HVector reflected = 2.0 * mean - Z.block(i);
    next.block(i) += ops[i].resolve(reflected) - mean;
  }
  return {std::move(next), std::move(mean)};
}

BlockVector implied_operator_values(const LiftedPoint& z,
                                    const ShadowTuple& x) {
  const int n = x.count();
  if (z.count() != n - 1 || z.dim() != x.dim()) {
    throw UsageError("implied_operator_values: shape mismatch");
  }
  BlockVector y(n, x.dim());
  y.block(0) = z.block(0) - x.block(0);
  for (int i = 1; i < n - 1; ++i) {
    y.block(i) = z.block(i) - z.block(i - 1) + x.block(i - 1) - x.block(i);
  }
  y.block(n - 1) = x.block(0) + x.block(n - 2) - x.block(n - 1) - z.block(n - 2);
  return y;
}

FixedPointResidual mt_fixed_point_residual(const SplitProblem& problem,
                                           const LiftedPoint& z) {
  const MtStep step = mt_apply(problem, z);
  FixedPointResidual out;
  out.residual = (step.next.flat() - z.flat()).norm();
  for (int i = 1; i < step.shadow.count(); ++i) {
    out.consensus = std::max(
        out.consensus, (step.shadow.block(i) - step.shadow.block(0)).norm());
  }
  return out;
}

// ---------------------------------------------------------------------------

const char* to_string(DriveStatus status) {
  switch (status) {
    case DriveStatus::Converged: return "converged";
    case DriveStatus::MaxIter: return "max-iter";
    case DriveStatus::Diverged: return "diverged";
  }
  return "unknown";
}

std::vector<double> IterationTrace::distances() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.dist);
  return out;
}

std::vector<double> IterationTrace::gaps() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.gap);
  return out;
}

DriveResult drive(const StepFn& step, HVector z0, const DriveOptions& options) {
  if (!(options.tol > 0.0)) throw UsageError("drive: tol must be positive");
  if (options.max_iter < 1) throw UsageError("drive: max_iter must be >= 1");
  if (options.reference) {
    require_dim(*options.reference, z0.size(), "drive: reference");
  }
  require_finite(z0, "drive: initial state");

  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  using Clock = std::chrono::steady_clock;

  DriveResult result;
  result.trace.scale =
      options.scale > 0.0 ? options.scale : double(std::max<Index>(z0.size(), 1));
  const double scale = result.trace.scale;
  result.trace.records.reserve(std::min(options.max_iter, 4096));

  HVector z = std::move(z0);
  double elapsed_ms = 0.0;
  result.trace.status = DriveStatus::MaxIter;
  for (int k = 1; k <= options.max_iter; ++k) {
    const auto start = Clock::now();
    HVector next = step(z);
    elapsed_ms +=
        std::chrono::duration<double, std::milli>(Clock::now() - start).count();

    TraceRecord rec;
    rec.k = k;
    rec.elapsed_ms = elapsed_ms;
    if (!next.allFinite()) {
      rec.change = kNaN;
      rec.dist = kNaN;
      rec.gap = kNaN;
      result.trace.records.push_back(rec);
      result.trace.status = DriveStatus::Diverged;
      break;
    }
    rec.change = (next - z).norm() / scale;
    rec.dist = options.reference ? (next - *options.reference).norm() / scale
                                 : kNaN;
    rec.gap = options.gap ? options.gap(next) : kNaN;
    result.trace.records.push_back(rec);
    z = std::move(next);
    if (options.stop_on_tol && rec.change <= options.tol) {
      result.trace.status = DriveStatus::Converged;
      break;
    }
  }
  result.state = std::move(z);
  return result;
}

StepFn mt_step_fn(const SplitProblem& problem) {
  const int blocks = problem.size() - 1;
  const Index d = problem.dim();
  return [problem, blocks, d](const HVector& flat) {
    return mt_apply(problem, LiftedPoint(blocks, d, flat)).next.flat();
  };
}

StepFn dr_product_step_fn(const std::vector<OperatorDesc>& ops) {
  const int n = static_cast<int>(ops.size());
  if (n < 2) throw UsageError("dr_product_step_fn: need n >= 2 operators");
  const Index d = ops.front().dim;
  return [ops, n, d](const HVector& flat) {
    return dr_product_apply(ops, BlockVector(n, d, flat)).next.flat();
  };
}

}  // namespace minlift
