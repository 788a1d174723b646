#pragma once

#include "minlift/diagnostics.hpp"
#include "minlift/hvector.hpp"
#include "minlift/operators.hpp"
#include "minlift/random.hpp"
#include "minlift/splitting.hpp"

#include <cstdint>
#include <vector>

namespace minlift {

/// n affine operators A_i(x) = M_i x + c_i with known constants.
struct AffineFamily {
  std::vector<Eigen::MatrixXd> M;
  std::vector<HVector> c;
  std::vector<OperatorDesc> ops;
  double mu = 0.0;
  double L = 0.0;

  int n() const { return static_cast<int>(M.size()); }
  Index dim() const { return M.front().rows(); }
};

struct FamilySpec {
  int n = 3;
  Index dim = 20;
  double mu = 1.0;
  double L = 2.0;
  ContractionCase which = ContractionCase::B;
  std::uint64_t seed = 1;
};

/// Random monotone matrix G with ||G||_2 = norm and a singular symmetric part.
Eigen::MatrixXd random_monotone_matrix(Index dim, double norm,
                                       NormalStream& rng);

/// Case (a): A_1..A_{n-1} monotone with ||M_i|| = L, A_n = mu Id + G.
/// Case (b): A_1..A_{n-1} = mu Id + G_i with ||M_i|| <= L, A_n monotone.
/// mu = 0 yields a family without strong monotonicity.
AffineFamily make_affine_family(const FamilySpec& spec);

/// The unique zero of sum A_i by a dense linear solve.
HVector affine_zero(const AffineFamily& family);

/// The fixed point of T_MT: z_i = x* + sum_{j <= i} A_j(x*).
LiftedPoint affine_fixed_point(const AffineFamily& family);

/// Operators of mixed type on R^dim with random moduli mu_i >= 0: scaled
/// identities, affine maps, cone shifts and iso-norm subdifferentials.
std::vector<OperatorDesc> make_mixed_family(int n, Index dim,
                                            std::uint64_t seed);

/// A_1 = A_2 = A_3 = 0 on R.
std::vector<OperatorDesc> zero_family();
/// A_1 = mu Id + N_{R_-}, A_2 = mu Id + N_{R_+}, A_3 = mu Id + N_{0} on R.
std::vector<OperatorDesc> cone_family(double mu);

HVector random_vector(Index dim, NormalStream& rng, double scale = 1.0);

}  // namespace minlift
