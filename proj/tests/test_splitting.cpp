#include "oracles.hpp"

#include "minlift/errors.hpp"
#include "minlift/splitting.hpp"
#include "minlift/synthetic.hpp"

#include <doctest.h>

#include <cmath>

using namespace minlift;

namespace {

LiftedPoint lifted(std::initializer_list<double> values) {
  HVector flat(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) flat[i++] = x;
  return LiftedPoint(static_cast<int>(flat.size()), 1, flat);
}

std::vector<OperatorDesc> zeros(int n, Index d = 1) {
  return std::vector<OperatorDesc>(n, zero_operator(d));
}

std::vector<OperatorDesc> identities(int n, Index d = 1) {
  return std::vector<OperatorDesc>(n, scaled_identity(d, 1.0));
}

}  // namespace

TEST_CASE("SplitProblem validates its inputs") {
  CHECK_THROWS_AS(SplitProblem(zeros(1), 0.5), UsageError);
  CHECK_THROWS_AS(SplitProblem(zeros(3), 0.0), UsageError);
  CHECK_THROWS_AS(SplitProblem(zeros(3), 1.0), UsageError);
  std::vector<OperatorDesc> mixed = {zero_operator(1), zero_operator(2)};
  CHECK_THROWS_AS(SplitProblem(mixed, 0.5), UsageError);
}

TEST_CASE("mt_apply examples") {
  SUBCASE("zero operators fix (1, 1)") {
    const MtStep s = mt_apply(SplitProblem(zeros(3), 0.4), lifted({1.0, 1.0}));
    CHECK(s.next.flat() == lifted({1.0, 1.0}).flat());
    CHECK(s.shadow.flat() == lifted({1.0, 1.0, 1.0}).flat());
  }
  SUBCASE("zero operators at (1, 0)") {
    const double g = 0.3;
    const MtStep s = mt_apply(SplitProblem(zeros(3), g), lifted({1.0, 0.0}));
    CHECK(s.shadow.flat() == lifted({1.0, 0.0, 1.0}).flat());
    CHECK(s.next.flat()[0] == doctest::Approx(1.0 - g));
    CHECK(s.next.flat()[1] == doctest::Approx(g));
  }
  SUBCASE("n = 2 with identity operators") {
    const double g = 0.6;
    const MtStep s = mt_apply(SplitProblem(identities(2), g), lifted({1.0}));
    CHECK(s.shadow.flat()[0] == doctest::Approx(0.5));
    CHECK(s.shadow.flat()[1] == doctest::Approx(0.0));
    CHECK(s.next.flat()[0] == doctest::Approx(1.0 - g / 2.0));
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(mt_apply(SplitProblem(zeros(3), 0.5), lifted({1.0})), UsageError);
  }
}

TEST_CASE("dr_apply examples") {
  const HVector z = HVector::Constant(1, 1.0);
  CHECK(dr_apply(zero_operator(1), zero_operator(1), z)[0] == 1.0);
  CHECK(dr_apply(scaled_identity(1, 1.0), scaled_identity(1, 1.0), z)[0] == doctest::Approx(0.5));
  CHECK(dr_apply(scaled_identity(1, 1.0), zero_operator(1), HVector::Constant(1, 2.0))[0] ==
        doctest::Approx(1.0));
}

TEST_CASE("n = 2 minimal lifting is relaxed Douglas-Rachford") {
  NormalStream rng(21);
  for (int t = 0; t < 200; ++t) {
    const auto ops = make_mixed_family(2, 3, 100 + t);
    const double g = 0.05 + 0.9 * rng.uniform();
    const HVector z = random_vector(3, rng, 2.0);
    const HVector mt = mt_apply(SplitProblem(ops, g), LiftedPoint(1, 3, z)).next.flat();
    const HVector dr = (1.0 - g) * z + g * dr_apply(ops[0], ops[1], z);
    CHECK((mt - dr).norm() <= 1e-12 * std::max(1.0, z.norm()));
  }
}

TEST_CASE("dr_product_apply examples") {
  SUBCASE("diagonal point with zero operators is fixed") {
    BlockVector Z(3, 2);
    for (int i = 0; i < 3; ++i) Z.block(i) << 1.5, -2.0;
    const DrProductStep s = dr_product_apply(zeros(3, 2), Z);
    CHECK(s.next.flat() == Z.flat());
  }
  SUBCASE("n = 2 zero operators at (1, 0)") {
    BlockVector Z(2, 1, lifted({1.0, 0.0}).flat());
    const DrProductStep s = dr_product_apply(zeros(2), Z);
    CHECK(s.next.flat()[0] == doctest::Approx(0.5));
    CHECK(s.next.flat()[1] == doctest::Approx(0.5));
    CHECK(s.shadow[0] == doctest::Approx(0.5));
  }
  SUBCASE("n = 3 identities at (3, 0, 0)") {
    BlockVector Z(3, 1, lifted({3.0, 0.0, 0.0}).flat());
    const DrProductStep s = dr_product_apply(identities(3), Z);
    const std::vector<double> expected = oracle::dr_product_identity({3.0, 0.0, 0.0});
    for (int i = 0; i < 3; ++i) CHECK(s.next.flat()[i] == doctest::Approx(expected[i]));
    CHECK(s.next.flat()[0] == doctest::Approx(1.5));
  }
}

TEST_CASE("mt_fixed_point_residual examples") {
  for (double t : {-3.0, 0.0, 2.5}) {
    CHECK(mt_fixed_point_residual(SplitProblem(zero_family(), 0.5), lifted({t, t})).residual ==
          0.0);
  }
  CHECK(mt_fixed_point_residual(SplitProblem(cone_family(1.0), 0.5), lifted({-1.0, 0.0}))
            .residual == 0.0);
  const FixedPointResidual r =
      mt_fixed_point_residual(SplitProblem(identities(3), 0.5), lifted({0.0, 0.0}));
  CHECK(r.residual == 0.0);
  CHECK(r.consensus == 0.0);
}

TEST_CASE("implied operator values sum to x_1 - x_n") {
  NormalStream rng(4);
  const auto ops = make_mixed_family(4, 2, 77);
  const SplitProblem problem(ops, 0.5);
  const LiftedPoint z(3, 2, random_vector(6, rng));
  const MtStep s = mt_apply(problem, z);
  const BlockVector y = implied_operator_values(z, s.shadow);
  HVector total = HVector::Zero(2);
  for (int i = 0; i < 4; ++i) total += y.block(i);
  CHECK((total - (s.shadow.block(0) - s.shadow.block(3))).norm() < 1e-12);
}

TEST_CASE("drive examples") {
  SUBCASE("identity step converges at k = 1") {
    const DriveResult r = drive([](const HVector& z) { return z; }, HVector::Constant(3, 2.0), {});
    CHECK(r.trace.status == DriveStatus::Converged);
    CHECK(r.trace.iterations() == 1);
    CHECK(r.trace.records[0].change == 0.0);
    CHECK(std::isnan(r.trace.records[0].dist));
  }
  SUBCASE("halving map decays geometrically") {
    DriveOptions opt;
    opt.tol = 1e-4;
    opt.reference = HVector::Zero(1);
    const DriveResult r = drive([](const HVector& z) { return HVector(z / 2.0); },
                                HVector::Constant(1, 1.0), opt);
    CHECK(r.trace.status == DriveStatus::Converged);
    CHECK(std::abs(r.state[0]) <= 2e-4);
    for (int k = 1; k < r.trace.iterations(); ++k) {
      CHECK(r.trace.records[k].dist / r.trace.records[k - 1].dist == doctest::Approx(0.5));
      CHECK(r.trace.records[k].k == r.trace.records[k - 1].k + 1);
    }
  }
  SUBCASE("non-finite state is reported, not thrown") {
    const DriveResult r = drive([](const HVector& z) { return HVector(z * 1e300); },
                                HVector::Constant(1, 1e10), {});
    CHECK(r.trace.status == DriveStatus::Diverged);
  }
  SUBCASE("budget exhaustion") {
    DriveOptions opt;
    opt.max_iter = 5;
    opt.tol = 1e-30;
    const DriveResult r = drive([](const HVector& z) { return HVector(z * 0.9); },
                                HVector::Constant(1, 1.0), opt);
    CHECK(r.trace.status == DriveStatus::MaxIter);
    CHECK(r.trace.iterations() == 5);
  }
  SUBCASE("non-finite start is a usage error") {
    CHECK_THROWS_AS(drive([](const HVector& z) { return z; }, HVector::Constant(1, NAN), {}),
                    UsageError);
  }
}

TEST_CASE("minimal lifting limit matches the dense solve on affine families") {
  for (int n = 2; n <= 5; ++n) {
    for (auto which : {ContractionCase::A, ContractionCase::B}) {
      FamilySpec spec;
      spec.n = n;
      spec.dim = 6;
      spec.which = which;
      spec.seed = 40 + n;
      const AffineFamily family = make_affine_family(spec);
      DriveOptions opt;
      opt.tol = 1e-14;
      opt.scale = 1.0;
      opt.max_iter = 20000;
      const DriveResult r = drive(mt_step_fn(SplitProblem(family.ops, 0.5)),
                                  HVector::Zero((n - 1) * 6), opt);
      CHECK(r.trace.status == DriveStatus::Converged);
      const MtStep s = mt_apply(SplitProblem(family.ops, 0.5), LiftedPoint(n - 1, 6, r.state));
      const HVector x = oracle::affine_zero(family.M, family.c);
      CHECK((HVector(s.shadow.block(0)) - x).norm() <= 1e-8);
    }
  }
}

TEST_CASE("product-space DR limit matches the dense solve") {
  FamilySpec spec;
  spec.n = 3;
  spec.dim = 5;
  spec.seed = 8;
  const AffineFamily family = make_affine_family(spec);
  DriveOptions opt;
  opt.tol = 1e-14;
  opt.scale = 1.0;
  opt.max_iter = 50000;
  const DriveResult r = drive(dr_product_step_fn(family.ops), HVector::Zero(15), opt);
  CHECK(r.trace.status == DriveStatus::Converged);
  const DrProductStep s = dr_product_apply(family.ops, BlockVector(3, 5, r.state));
  CHECK((s.shadow - oracle::affine_zero(family.M, family.c)).norm() <= 1e-8);
}

TEST_CASE("consensus at the affine fixed point") {
  FamilySpec spec;
  spec.n = 4;
  spec.dim = 3;
  const AffineFamily family = make_affine_family(spec);
  const SplitProblem problem(family.ops, 0.7);
  const LiftedPoint z = affine_fixed_point(family);
  const FixedPointResidual r = mt_fixed_point_residual(problem, z);
  CHECK(r.residual <= 1e-10);
  CHECK(r.consensus <= 1e-8);
}
