#include "minlift/primal_dual.hpp"

#include "minlift/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace minlift {

void PDProblem::validate() {
  if (!C) throw UsageError("PDProblem: linear map C is required");
  if (f.empty() || f.size() != g.size()) {
    throw UsageError("PDProblem: need f_2..f_n and g_2..g_n with n >= 2");
  }
  for (const auto& fi : f) {
    if (fi.dim != C->cols() || !fi.prox) {
      throw UsageError("PDProblem: f_i must act on the domain of C");
    }
  }
  for (const auto& gi : g) {
    if (gi.dim != C->rows() || !gi.prox) {
      throw UsageError("PDProblem: g_i must act on the range of C");
    }
  }
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw UsageError("PDProblem: gamma must lie in (0, 1)");
  }
  if (!(sigma > 0.0) || !(beta_g > 0.0)) {
    throw UsageError("PDProblem: sigma and beta_g must be positive");
  }
  if (n() > 2 && (!(tau > 0.0) || !(alpha >= 0.0))) {
    throw UsageError("PDProblem: tau must be positive and alpha non-negative");
  }
  if (!(c_norm > 0.0)) c_norm = estimate_operator_norm(*C);
}

PDState PDState::zeros(const PDProblem& problem) {
  const int blocks = problem.n() - 1;
  return {BlockVector(blocks, problem.primal_dim()),
          BlockVector(blocks, problem.dual_dim())};
}

PDStepResult pd_step(const PDProblem& problem, const PDState& state) {
  const int n = problem.n();
  const Index d1 = problem.primal_dim();
  const Index d2 = problem.dual_dim();
  if (state.p.count() != n - 1 || state.q.count() != n - 1 ||
      state.p.dim() != d1 || state.q.dim() != d2) {
    throw UsageError("pd_step: state shape does not match the problem");
  }
  const auto& p = state.p;
  const auto& q = state.q;

  BlockVector u(n, d1);
  BlockVector v(n, d2);
  const SkewResolvent first = resolvent_skew(p.block(0), q.block(0), *problem.C);
  u.block(0) = first.u;
  v.block(0) = first.v;
  for (int i = 1; i < n - 1; ++i) {
    u.block(i) =
        problem.f[i - 1].apply(p.block(i) + u.block(i - 1) - p.block(i - 1));
    v.block(i) = prox_conjugate(problem.g[i - 1],
                                q.block(i) + v.block(i - 1) - q.block(i - 1));
  }
  u.block(n - 1) = problem.f[n - 2].apply(u.block(0) + u.block(n - 2) -
                                          p.block(n - 2));
  v.block(n - 1) = prox_conjugate(problem.g[n - 2], v.block(0) +
                                                        v.block(n - 2) -
                                                        q.block(n - 2));

  PDState next = state;
  for (int i = 0; i < n - 1; ++i) {
    next.p.block(i) += problem.gamma * (u.block(i + 1) - u.block(i));
    next.q.block(i) += problem.gamma * (v.block(i + 1) - v.block(i));
  }
  return {std::move(next), std::move(u), std::move(v)};
}

std::vector<OperatorDesc> assemble_operators(const PDProblem& problem) {
  PDProblem checked = problem;
  checked.validate();
  const int n = checked.n();
  const Index d1 = checked.primal_dim();
  const Index d2 = checked.dual_dim();

  const auto conjugate_prox = [](const ProxSpec& g) -> VectorMap {
    return [g](const HVector& w) { return prox_conjugate(g, w); };
  };

  std::vector<OperatorDesc> ops;
  ops.reserve(n);
  ops.push_back(skew_block_operator(checked.C, checked.c_norm));
  const double middle_lip = std::max(checked.alpha, 1.0 / checked.tau);
  for (int i = 1; i < n - 1; ++i) {
    ops.push_back(pair_operator(OperatorKind::GradientMap, d1, checked.f[i - 1].prox,
                                d2, conjugate_prox(checked.g[i - 1]), 0.0,
                                middle_lip));
  }
  ops.push_back(pair_operator(OperatorKind::Subdifferential, d1,
                              checked.f[n - 2].prox, d2,
                              conjugate_prox(checked.g[n - 2]),
                              std::min(checked.sigma, 1.0 / checked.beta_g),
                              std::nullopt));
  return ops;
}

LiftedPoint to_lifted(const PDState& state) {
  const Index d1 = state.p.dim();
  const Index d2 = state.q.dim();
  LiftedPoint z(state.p.count(), d1 + d2);
  for (int i = 0; i < state.p.count(); ++i) {
    z.block(i).head(d1) = state.p.block(i);
    z.block(i).tail(d2) = state.q.block(i);
  }
  return z;
}

PDState from_lifted(const LiftedPoint& z, Index primal_dim, Index dual_dim) {
  if (z.dim() != primal_dim + dual_dim) {
    throw UsageError("from_lifted: block dimension mismatch");
  }
  PDState state{BlockVector(z.count(), primal_dim),
                BlockVector(z.count(), dual_dim)};
  for (int i = 0; i < z.count(); ++i) {
    state.p.block(i) = z.block(i).head(primal_dim);
    state.q.block(i) = z.block(i).tail(dual_dim);
  }
  return state;
}

StepFn pd_step_fn(const PDProblem& problem) {
  const int blocks = problem.n() - 1;
  const Index d1 = problem.primal_dim();
  const Index d2 = problem.dual_dim();
  return [problem, blocks, d1, d2](const HVector& flat) {
    const PDState state = from_lifted(LiftedPoint(blocks, d1 + d2, flat), d1, d2);
    return to_lifted(pd_step(problem, state).next).flat();
  };
}

std::pair<HVector, HVector> pd_shadow(const PDProblem& problem,
                                      const HVector& flat_state) {
  const int n = problem.n();
  const Index d1 = problem.primal_dim();
  const Index d2 = problem.dual_dim();
  const PDState state =
      from_lifted(LiftedPoint(n - 1, d1 + d2, flat_state), d1, d2);
  const PDStepResult step = pd_step(problem, state);
  return {step.u.block(n - 1), step.v.block(n - 1)};
}

}  // namespace minlift
