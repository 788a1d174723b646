#pragma once

#include "minlift/hvector.hpp"
#include "minlift/linear_map.hpp"
#include "minlift/operators.hpp"
#include "minlift/splitting.hpp"

#include <memory>
#include <vector>

namespace minlift {

/// min_u sum_{i=2}^n f_i(u) + (g_2 box ... box g_n)(C u)
///
/// `f` and `g` hold f_2..f_n and g_2..g_n. The constants are those of the
/// standing assumptions: alpha bounds the gradient Lipschitz constant of
/// f_2..f_{n-1}, sigma the strong convexity of f_n, tau the strong convexity
/// of g_2..g_{n-1}, beta_g the gradient Lipschitz constant of g_n.
struct PDProblem {
  std::shared_ptr<const LinearMap> C;
  std::vector<ProxSpec> f;
  std::vector<ProxSpec> g;
  double alpha = 1.0;
  double sigma = 1.0;
  double tau = 1.0;
  double beta_g = 1.0;
  double gamma = 0.5;
  double c_norm = 0.0;

  /// Number of operators n (= f.size() + 1).
  int n() const { return static_cast<int>(f.size()) + 1; }
  Index primal_dim() const { return C->cols(); }
  Index dual_dim() const { return C->rows(); }

  /// Checks sizes and constants; fills c_norm by power iteration if unset.
  void validate();
};

/// Algorithm state: p_1..p_{n-1} in H_1 and q_1..q_{n-1} in H_2.
struct PDState {
  BlockVector p;
  BlockVector q;

  static PDState zeros(const PDProblem& problem);
};

struct PDStepResult {
  PDState next;
  BlockVector u;  // u_1..u_n
  BlockVector v;  // v_1..v_n
};

PDStepResult pd_step(const PDProblem& problem, const PDState& state);

/// A_1 = skew block of C, A_i = (grad f_i, grad g_i^*), A_n = (df_n, dg_n^*)
/// on H_1 x H_2, with the Lipschitz and strong-monotonicity metadata implied
/// by the problem constants.
std::vector<OperatorDesc> assemble_operators(const PDProblem& problem);

/// z_i = (p_i, q_i) in H_1 x H_2.
LiftedPoint to_lifted(const PDState& state);
PDState from_lifted(const LiftedPoint& z, Index primal_dim, Index dual_dim);

/// Flat state map for the driver; the flat layout is to_lifted(state).flat().
StepFn pd_step_fn(const PDProblem& problem);

/// Shadow (u_n, v_n) of the flat state, for gap evaluation.
std::pair<HVector, HVector> pd_shadow(const PDProblem& problem,
                                      const HVector& flat_state);

}  // namespace minlift
