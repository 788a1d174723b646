#include "minlift/diagnostics.hpp"
#include "minlift/errors.hpp"
#include "minlift/imaging.hpp"
#include "minlift/operators.hpp"
#include "minlift/primal_dual.hpp"
#include "minlift/splitting.hpp"
#include "minlift/synthetic.hpp"
#include "minlift/verify.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace minlift;

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Blocks as rows.
RowMatrix blocks(const BlockVector& b) {
  RowMatrix out(b.count(), b.dim());
  for (int i = 0; i < b.count(); ++i) out.row(i) = b.block(i).transpose();
  return out;
}

BlockVector from_rows(const RowMatrix& m) {
  BlockVector b(static_cast<int>(m.rows()), m.cols());
  for (Index i = 0; i < m.rows(); ++i) b.block(static_cast<int>(i)) = m.row(i).transpose();
  return b;
}

RowMatrix image_array(const ImageGray& img) {
  return Eigen::Map<const RowMatrix>(img.pixels.data(), img.M, img.M);
}

ImageGray array_image(const RowMatrix& a) {
  if (a.rows() != a.cols()) throw UsageError("image must be square");
  return ImageGray(static_cast<int>(a.rows()),
                   Eigen::Map<const HVector>(a.data(), a.size()));
}

py::dict trace_dict(const IterationTrace& t) {
  std::vector<double> change, dist, gap, elapsed;
  for (const TraceRecord& r : t.records) {
    change.push_back(r.change);
    dist.push_back(r.dist);
    gap.push_back(r.gap);
    elapsed.push_back(r.elapsed_ms);
  }
  py::dict d;
  d["status"] = to_string(t.status);
  d["iterations"] = t.iterations();
  d["change"] = change;
  d["dist"] = dist;
  d["gap"] = gap;
  d["elapsed_ms"] = elapsed;
  return d;
}

py::dict rate_dict(const RateReport& r) {
  py::dict d;
  d["fitted_rate"] = r.fitted_rate;
  d["r_squared"] = r.r_squared;
  d["points"] = r.points;
  return d;
}

ContractionCase parse_case(const std::string& s) {
  if (s == "a") return ContractionCase::A;
  if (s == "b") return ContractionCase::B;
  throw UsageError("case must be 'a' or 'b'");
}

Algorithm parse_algorithm(const std::string& s) {
  if (s == "mt") return Algorithm::MinimalLifting;
  if (s == "dr-product") return Algorithm::ProductDR;
  throw UsageError("algorithm must be 'mt' or 'dr-product'");
}

Cone parse_cone(const std::string& s) {
  if (s == "nonpositive") return Cone::NonPositive;
  if (s == "nonnegative") return Cone::NonNegative;
  if (s == "zero") return Cone::Zero;
  throw UsageError("cone must be 'nonpositive', 'nonnegative' or 'zero'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = MINLIFT_VERSION;

  // proximal maps
  py::class_<ProxSpec>(m, "ProxSpec")
      .def_readonly("dim", &ProxSpec::dim)
      .def_readonly("strong_convexity", &ProxSpec::strong_convexity)
      .def("prox", &ProxSpec::apply)
      .def("value", [](const ProxSpec& f, const HVector& u) { return f.value(u); })
      .def("conjugate", [](const ProxSpec& f, const HVector& v) { return f.conjugate(v); })
      .def("prox_conjugate", [](const ProxSpec& f, const HVector& w) { return prox_conjugate(f, w); });
  m.def("make_zero_function", &make_zero_function, py::arg("dim"));
  m.def("make_quadratic_shift", &make_quadratic_shift, py::arg("b"));
  m.def("make_scaled_square", &make_scaled_square, py::arg("dim"), py::arg("lam"));
  m.def("make_iso_norm", &make_iso_norm, py::arg("pixels"), py::arg("lambda2"), py::arg("lambda3"));
  m.def("prox_quadratic_shift", &prox_quadratic_shift, py::arg("w"), py::arg("b"));
  m.def("prox_scaled_square", &prox_scaled_square, py::arg("w"), py::arg("lam"));
  m.def("prox_iso", &prox_iso, py::arg("v"), py::arg("lambda2"), py::arg("lambda3"));

  // operators
  py::class_<OperatorDesc>(m, "Operator")
      .def_property_readonly("kind", [](const OperatorDesc& o) { return to_string(o.kind); })
      .def_readonly("dim", &OperatorDesc::dim)
      .def_readonly("mu", &OperatorDesc::mu)
      .def_readonly("lip", &OperatorDesc::lip)
      .def("resolvent", &OperatorDesc::resolve);
  m.def("zero_operator", &zero_operator, py::arg("dim"));
  m.def("scaled_identity", &scaled_identity, py::arg("dim"), py::arg("mu"));
  m.def("affine_operator", &affine_operator, py::arg("M"), py::arg("c"));
  m.def("subdifferential", &subdifferential, py::arg("f"), py::arg("mu"),
        py::arg("lip") = std::nullopt);
  m.def(
      "cone_shift_operator",
      [](double mu, const std::vector<std::string>& cones) {
        std::vector<Cone> parsed;
        for (const auto& c : cones) parsed.push_back(parse_cone(c));
        return cone_shift_operator(mu, parsed);
      },
      py::arg("mu"), py::arg("cones"));
  m.def(
      "skew_block_operator",
      [](const Eigen::MatrixXd& C) { return skew_block_operator(std::make_shared<DenseMap>(C)); },
      py::arg("C"));

  // splitting
  py::class_<SplitProblem>(m, "SplitProblem")
      .def(py::init<std::vector<OperatorDesc>, double>(), py::arg("ops"), py::arg("gamma"))
      .def_property_readonly("n", &SplitProblem::size)
      .def_property_readonly("dim", &SplitProblem::dim)
      .def_property_readonly("gamma", &SplitProblem::gamma);
  m.def(
      "mt_apply",
      [](const SplitProblem& p, const RowMatrix& z) {
        const MtStep s = mt_apply(p, from_rows(z));
        return py::make_tuple(blocks(s.next), blocks(s.shadow));
      },
      py::arg("problem"), py::arg("z"),
      "One minimal-lifting step. z has n-1 rows; returns (next, shadow) with n shadow rows.");
  m.def("dr_apply", &dr_apply, py::arg("A1"), py::arg("A2"), py::arg("z"));
  m.def(
      "dr_product_apply",
      [](const std::vector<OperatorDesc>& ops, const RowMatrix& Z) {
        const DrProductStep s = dr_product_apply(ops, from_rows(Z));
        return py::make_tuple(blocks(s.next), s.shadow);
      },
      py::arg("ops"), py::arg("Z"));
  m.def(
      "fixed_point_residual",
      [](const SplitProblem& p, const RowMatrix& z) {
        const FixedPointResidual r = mt_fixed_point_residual(p, from_rows(z));
        return py::make_tuple(r.residual, r.consensus);
      },
      py::arg("problem"), py::arg("z"));
  m.def(
      "mt_solve",
      [](const SplitProblem& p, double tol, int max_iter, std::optional<RowMatrix> reference) {
        DriveOptions opt;
        opt.tol = tol;
        opt.max_iter = max_iter;
        opt.scale = 1.0;
        if (reference) opt.reference = from_rows(*reference).flat();
        const int blocks_n = p.size() - 1;
        DriveResult r = drive(mt_step_fn(p), HVector::Zero(blocks_n * p.dim()), opt);
        const LiftedPoint z(blocks_n, p.dim(), r.state);
        return py::make_tuple(blocks(z), blocks(mt_apply(p, z).shadow), trace_dict(r.trace));
      },
      py::arg("problem"), py::arg("tol") = 1e-10, py::arg("max_iter") = 5000,
      py::arg("reference") = std::nullopt,
      "Iterates from zero. Returns (z, shadow, trace) with unnormalised changes.");

  // diagnostics
  m.def(
      "descent_slack",
      [](const SplitProblem& p, const RowMatrix& z, const RowMatrix& zb) {
        return check_descent_inequality(p, from_rows(z), from_rows(zb));
      },
      py::arg("problem"), py::arg("z"), py::arg("zbar"));
  m.def(
      "epsilon_chain",
      [](int n, double eps2) {
        const Chain c = epsilon_chain(n, eps2);
        return py::make_tuple(c.values, c.prime);
      },
      py::arg("n"), py::arg("eps2"));
  m.def(
      "alpha_chain",
      [](int n, double gamma, double mu) {
        const Chain c = alpha_chain(n, gamma, mu);
        return py::make_tuple(c.values, c.prime);
      },
      py::arg("n"), py::arg("gamma"), py::arg("mu"));
  m.def("best_eps2", &best_eps2, py::arg("n"));
  m.def(
      "theoretical_beta",
      [](int n, double gamma, double mu, double L, const std::string& which) {
        const RateBound b = theoretical_beta(n, gamma, mu, L, parse_case(which));
        py::dict d;
        d["beta"] = b.beta;
        d["eta"] = b.eta;
        d["eps_prime"] = b.eps_prime;
        d["alpha_prime"] = b.alpha_prime;
        d["eps2"] = b.eps2;
        return d;
      },
      py::arg("n"), py::arg("gamma"), py::arg("mu"), py::arg("L"), py::arg("case"));
  m.def(
      "fit_rate",
      [](const std::vector<double>& d) { return rate_dict(fit_rate(d)); }, py::arg("distances"));
  m.def(
      "snr",
      [](const HVector& a, const HVector& b) {
        return snr({a.data(), size_t(a.size())}, {b.data(), size_t(b.size())});
      },
      py::arg("original"), py::arg("restored"));

  // synthetic families
  m.def(
      "affine_family",
      [](int n, Index dim, double mu, double L, const std::string& which, std::uint64_t seed) {
        FamilySpec spec{n, dim, mu, L, parse_case(which), seed};
        const AffineFamily f = make_affine_family(spec);
        return py::make_tuple(f.ops, f.M, f.c, affine_zero(f));
      },
      py::arg("n") = 3, py::arg("dim") = 20, py::arg("mu") = 1.0, py::arg("L") = 2.0,
      py::arg("case") = "b", py::arg("seed") = 1,
      "Returns (ops, matrices, offsets, zero of the sum).");

  // imaging
  m.def(
      "shepp_logan_phantom", [](int side) { return image_array(shepp_logan_phantom(side)); },
      py::arg("side"));
  m.def(
      "add_gaussian_noise",
      [](const RowMatrix& img, double sigma, std::uint64_t seed) {
        return image_array(add_gaussian_noise(array_image(img), sigma, seed));
      },
      py::arg("image"), py::arg("sigma"), py::arg("seed"));
  m.def(
      "gradient", [](const RowMatrix& img) { return discrete_gradient_apply(array_image(img)); },
      py::arg("image"));
  m.def("gradient_adjoint", &discrete_gradient_adjoint, py::arg("y"), py::arg("side"));
  m.def(
      "load_pgm", [](const std::string& path) { return image_array(load_pgm(path)); },
      py::arg("path"));
  m.def(
      "save_pgm",
      [](const RowMatrix& img, const std::string& path) { save_pgm(array_image(img), path); },
      py::arg("image"), py::arg("path"));
  m.def(
      "denoise",
      [](const RowMatrix& noisy, double gamma, std::vector<double> lambdas, double tol,
         int max_iter, const std::string& algorithm, bool fixed_iterations, bool with_reference,
         bool with_gap) {
        if (lambdas.size() != 4) throw UsageError("lambdas must have four entries");
        DenoiseParams p;
        p.gamma = gamma;
        p.lambda1 = lambdas[0];
        p.lambda2 = lambdas[1];
        p.lambda3 = lambdas[2];
        p.lambda4 = lambdas[3];
        p.tol = tol;
        p.max_iter = max_iter;
        DenoiseOptions opt;
        opt.algorithm = parse_algorithm(algorithm);
        opt.fixed_iterations = fixed_iterations;
        opt.with_reference = with_reference;
        opt.with_gap = with_gap && opt.algorithm == Algorithm::MinimalLifting;
        DenoiseRun run;
        {
          py::gil_scoped_release release;
          run = run_denoise(array_image(noisy), p, opt);
        }
        return py::make_tuple(image_array(run.restored), trace_dict(run.trace));
      },
      py::arg("noisy"), py::arg("gamma") = 0.99,
      py::arg("lambdas") = std::vector<double>{0.01, 0.05, 1e-4, 10.0}, py::arg("tol") = 1e-4,
      py::arg("max_iter") = 500, py::arg("algorithm") = "mt", py::arg("fixed_iterations") = false,
      py::arg("with_reference") = true, py::arg("with_gap") = true,
      "Returns (restored image, trace).");

  // invariant suites
  m.def("suite_names", &suite_names);
  m.def(
      "verify",
      [](std::optional<std::string> suite, std::uint64_t seed) {
        VerifyOptions opt;
        opt.suite = suite;
        opt.seed = seed;
        py::list out;
        for (const SuiteResult& r : run_verification(opt))
          out.append(py::make_tuple(r.name, r.passed, r.detail));
        return out;
      },
      py::arg("suite") = std::nullopt, py::arg("seed") = 7,
      "Returns a list of (name, passed, detail).");
}
