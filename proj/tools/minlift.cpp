// minlift: denoise, compare, synthetic and verify front end.
//
// Exit codes: 0 success / converged, 1 I/O or format error, 2 iteration
// budget exhausted, 3 verification failure, 64 usage error.

#include "minlift/diagnostics.hpp"
#include "minlift/errors.hpp"
#include "minlift/imaging.hpp"
#include "minlift/synthetic.hpp"
#include "minlift/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace minlift;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitMaxIter = 2;
constexpr int kExitVerify = 3;
constexpr int kExitUsage = 64;

std::string fmt(double value) {
  if (std::isnan(value)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

// Canonical "key=value" record of every parameter that affects the output.
class ConfigRecord {
 public:
  explicit ConfigRecord(std::string command) : command_(std::move(command)) {}

  void add(const std::string& key, const std::string& value) { items_[key] = value; }
  void add(const std::string& key, double value) { items_[key] = fmt(value); }

  std::string canonical() const {
    std::string out = command_;
    for (const auto& [k, v] : items_) out += ";" + k + "=" + v;
    return out;
  }

  // 64-bit FNV-1a of the canonical form.
  std::uint64_t hash() const {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : canonical()) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return h;
  }

  std::string header(std::uint64_t seed) const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "# minlift %s config=%016llx seed=%llu\n",
                  MINLIFT_VERSION, static_cast<unsigned long long>(hash()),
                  static_cast<unsigned long long>(seed));
    return buf;
  }

 private:
  std::string command_;
  std::map<std::string, std::string> items_;
};

// Writes to a file, or stdout for "-" / empty.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path, std::ios::binary);
    if (!file_) throw std::runtime_error("cannot open " + path + " for writing");
  }
  std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct ImageArgs {
  std::string input;
  int size = 96;
  double sigma = 0.05;
  DenoiseParams params;
};

void add_image_flags(CLI::App& cmd, ImageArgs& a) {
  cmd.add_option("--input", a.input, "Clean square PGM (P2/P5, maxval 255); default: phantom");
  cmd.add_option("--size", a.size, "Phantom side length when --input is absent")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--gamma", a.params.gamma, "Step size in (0,1)")->capture_default_str();
  cmd.add_option("--lambda1", a.params.lambda1)->capture_default_str();
  cmd.add_option("--lambda2", a.params.lambda2)->capture_default_str();
  cmd.add_option("--lambda3", a.params.lambda3)->capture_default_str();
  cmd.add_option("--lambda4", a.params.lambda4)->capture_default_str();
  cmd.add_option("--sigma", a.sigma, "Noise standard deviation")->capture_default_str();
  cmd.add_option("--seed", a.params.seed, "Noise seed")->capture_default_str();
  cmd.add_option("--tol", a.params.tol, "Stopping threshold on the change / m")
      ->capture_default_str();
  cmd.add_option("--max-iter", a.params.max_iter)->capture_default_str();
}

void record_image_flags(ConfigRecord& rec, const ImageArgs& a) {
  rec.add("input", a.input.empty() ? "phantom:" + std::to_string(a.size) : a.input);
  rec.add("gamma", a.params.gamma);
  rec.add("lambda1", a.params.lambda1);
  rec.add("lambda2", a.params.lambda2);
  rec.add("lambda3", a.params.lambda3);
  rec.add("lambda4", a.params.lambda4);
  rec.add("sigma", a.sigma);
  rec.add("tol", a.params.tol);
  rec.add("max_iter", double(a.params.max_iter));
}

ImageGray load_clean(const ImageArgs& a) {
  return a.input.empty() ? shepp_logan_phantom(a.size) : load_pgm(a.input);
}

void validate_image_args(ImageArgs& a) {
  if (!(a.sigma >= 0.0)) throw UsageError("--sigma must be >= 0");
  a.params.noise_sigma = a.sigma;
  a.params.validate();
}

// Blank fields when the trace is too short to fit.
std::optional<RateReport> try_fit(std::span<const double> series) {
  try {
    return fit_rate(series);
  } catch (const UsageError&) {
    return std::nullopt;
  }
}

double image_snr(const ImageGray& clean, const ImageGray& other) {
  return snr({clean.pixels.data(), size_t(clean.size())},
             {other.pixels.data(), size_t(other.size())});
}

// ---------------------------------------------------------------------------

int cmd_denoise(ImageArgs a, const std::string& output, const std::string& trace_path,
                const std::string& algorithm) {
  validate_image_args(a);
  const Algorithm alg = algorithm == "dr-product" ? Algorithm::ProductDR
                                                  : Algorithm::MinimalLifting;
  const ImageGray clean = load_clean(a);
  const ImageGray noisy = add_gaussian_noise(clean, a.sigma, a.params.seed);

  DenoiseOptions options;
  options.algorithm = alg;
  const DenoiseRun run = run_denoise(noisy, a.params, options);

  if (!output.empty()) save_pgm(run.restored, output);
  ConfigRecord rec("denoise");
  record_image_flags(rec, a);
  rec.add("algorithm", to_string(alg));
  if (!trace_path.empty()) {
    Sink sink(trace_path);
    std::ostream& out = sink.out();
    out << rec.header(a.params.seed);
    out << "k,norm_change,dist_to_ref,gap,elapsed_ms\n";
    for (const TraceRecord& r : run.trace.records) {
      out << r.k << ',' << fmt(r.change) << ',' << fmt(r.dist) << ',' << fmt(r.gap)
          << ',' << fmt(r.elapsed_ms) << '\n';
    }
  }
  const auto dist = run.trace.distances();
  const auto rate = try_fit(dist);
  std::printf(
      "iterations=%d status=%s snr_noisy=%.4f snr=%.4f fitted_rate=%s r_squared=%s "
      "reference_iterations=%d\n",
      run.trace.iterations(), to_string(run.trace.status), image_snr(clean, noisy),
      image_snr(clean, run.restored), rate ? fmt(rate->fitted_rate).c_str() : "",
      rate ? fmt(rate->r_squared).c_str() : "", run.reference_iterations);
  switch (run.trace.status) {
    case DriveStatus::Converged: return kExitOk;
    case DriveStatus::MaxIter: return kExitMaxIter;
    case DriveStatus::Diverged: break;
  }
  std::fprintf(stderr, "minlift: iteration diverged\n");
  return kExitMaxIter;
}

// ---------------------------------------------------------------------------

int thread_cap() {
  int cap = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("MINLIFT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) {
      throw UsageError("MINLIFT_THREADS must be a positive integer");
    }
    cap = static_cast<int>(v);
  }
  return cap;
}

struct RepeatResult {
  int iterations[2] = {0, 0};
  double distance[2] = {0.0, 0.0};
  double seconds[2] = {0.0, 0.0};
  bool converged[2] = {false, false};
};

int cmd_compare(ImageArgs a, const std::string& output, int repeats) {
  validate_image_args(a);
  if (repeats < 1) throw UsageError("--repeats must be >= 1");
  const ImageGray clean = load_clean(a);
  const std::string name =
      a.input.empty() ? "phantom" : std::filesystem::path(a.input).stem().string();
  const Algorithm algs[2] = {Algorithm::MinimalLifting, Algorithm::ProductDR};

  std::vector<RepeatResult> results(repeats);
  std::vector<std::string> errors(repeats);
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int r = next++; r < repeats; r = next++) {
      try {
        DenoiseParams params = a.params;
        params.seed = a.params.seed + std::uint64_t(r);
        const ImageGray noisy = add_gaussian_noise(clean, a.sigma, params.seed);
        for (int j = 0; j < 2; ++j) {
          DenoiseOptions options;
          options.algorithm = algs[j];
          options.with_gap = false;
          const DenoiseRun run = run_denoise(noisy, params, options);
          const TraceRecord& last = run.trace.records.back();
          results[r].iterations[j] = run.trace.iterations();
          results[r].distance[j] = last.dist;
          results[r].seconds[j] = last.elapsed_ms / 1000.0;
          results[r].converged[j] = run.trace.status == DriveStatus::Converged;
        }
      } catch (const std::exception& e) {
        errors[r] = e.what();
      }
    }
  };
  const int threads = std::min(thread_cap(), repeats);
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (!e.empty()) throw std::runtime_error(e);
  }

  ConfigRecord rec("compare");
  record_image_flags(rec, a);
  rec.add("repeats", double(repeats));
  Sink sink(output);
  std::ostream& out = sink.out();
  out << rec.header(a.params.seed);
  out << "image,M,algorithm,repeats,mean_iterations,mean_distance,mean_time_s\n";
  bool all_converged = true;
  for (int j = 0; j < 2; ++j) {
    double it = 0.0, dist = 0.0, sec = 0.0;
    for (const RepeatResult& r : results) {
      it += r.iterations[j];
      dist += r.distance[j];
      sec += r.seconds[j];
      all_converged = all_converged && r.converged[j];
    }
    out << name << ',' << clean.M << ',' << to_string(algs[j]) << ',' << repeats << ','
        << fmt(it / repeats) << ',' << fmt(dist / repeats) << ',' << fmt(sec / repeats)
        << '\n';
  }
  return all_converged ? kExitOk : kExitMaxIter;
}

// ---------------------------------------------------------------------------

struct SyntheticArgs {
  int n = 3;
  int dim = 20;
  double mu = 1.0;
  double lip = 2.0;
  double gamma = 0.5;
  std::string which = "b";
  std::uint64_t seed = 1;
  int repeats = 1;
  double tol = 1e-10;
  int max_iter = 5000;
};

int synthetic_counterexample(const SyntheticArgs& a, std::ostream& out, const ConfigRecord& rec) {
  const bool first = a.which == "zeros";
  if (!first && !(a.mu > 0.0)) throw UsageError("--case cones needs --mu > 0");
  const SplitProblem problem(first ? zero_family() : cone_family(a.mu), a.gamma);
  out << rec.header(a.seed);
  out << "case,gamma,z1,z2,residual,verdict\n";
  int exact = 0;
  for (double t : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    // Second family: the ray R_- x {0}.
    if (!first && t > 0.0) continue;
    HVector z(2);
    z << t, first ? t : 0.0;
    const double res = mt_fixed_point_residual(problem, LiftedPoint(2, 1, z)).residual;
    exact += res == 0.0;
    out << a.which << ',' << fmt(a.gamma) << ',' << fmt(z[0]) << ',' << fmt(z[1]) << ','
        << fmt(res) << ",fixed point\n";
  }
  out << a.which << ',' << fmt(a.gamma) << ",,,,"
      << (exact >= 2 ? "not a contraction" : "inconclusive") << '\n';
  return exact >= 2 ? kExitOk : kExitVerify;
}

int cmd_synthetic(const SyntheticArgs& a, const std::string& output) {
  if (!(a.gamma > 0.0 && a.gamma < 1.0)) throw UsageError("--gamma must lie in (0,1)");
  ConfigRecord rec("synthetic");
  rec.add("n", double(a.n));
  rec.add("dim", double(a.dim));
  rec.add("mu", a.mu);
  rec.add("lip", a.lip);
  rec.add("gamma", a.gamma);
  rec.add("case", a.which);
  rec.add("repeats", double(a.repeats));
  rec.add("tol", a.tol);
  rec.add("max_iter", double(a.max_iter));
  Sink sink(output);
  if (a.which == "zeros" || a.which == "cones") {
    return synthetic_counterexample(a, sink.out(), rec);
  }
  if (a.n < 2) throw UsageError("--n must be >= 2");
  if (a.dim < 1) throw UsageError("--dim must be >= 1");
  if (!(a.mu >= 0.0)) throw UsageError("--mu must be >= 0");
  if (!(a.lip > 0.0)) throw UsageError("--lip must be > 0");
  if (a.repeats < 1) throw UsageError("--repeats must be >= 1");
  const ContractionCase which = a.which == "a" ? ContractionCase::A : ContractionCase::B;
  if (which == ContractionCase::B && a.mu > a.lip) {
    throw UsageError("case b needs --mu <= --lip");
  }

  std::ostream& out = sink.out();
  out << rec.header(a.seed);
  out << "seed,case,n,dim,mu,L,gamma,iterations,status,fitted_rate,r_squared,"
         "theoretical_beta,eps_prime,alpha_prime,eta\n";
  bool all_converged = true;
  for (int r = 0; r < a.repeats; ++r) {
    FamilySpec spec{a.n, a.dim, a.mu, a.lip, which, a.seed + std::uint64_t(r)};
    const AffineFamily family = make_affine_family(spec);
    const SplitProblem problem(family.ops, a.gamma);
    DriveOptions options;
    options.tol = a.tol;
    options.max_iter = a.max_iter;
    options.scale = 1.0;
    // Without strong monotonicity the fixed point need not be unique, so the
    // rate is fitted to the step changes instead of the distances.
    if (a.mu > 0.0) options.reference = affine_fixed_point(family).flat();
    const DriveResult run =
        drive(mt_step_fn(problem), HVector::Zero((a.n - 1) * a.dim), options);
    std::vector<double> series;
    for (const TraceRecord& t : run.trace.records) {
      series.push_back(a.mu > 0.0 ? t.dist : t.change);
    }
    const auto report = try_fit(series);
    std::string beta, eps, alpha, eta;
    if (a.mu > 0.0) {
      const RateBound bound = theoretical_beta(a.n, a.gamma, a.mu, a.lip, which);
      beta = fmt(bound.beta);
      eps = fmt(bound.eps_prime);
      alpha = which == ContractionCase::A ? fmt(bound.alpha_prime) : "";
      eta = fmt(bound.eta);
    }
    all_converged = all_converged && run.trace.status == DriveStatus::Converged;
    out << spec.seed << ',' << a.which << ',' << a.n << ',' << a.dim << ',' << fmt(a.mu)
        << ',' << fmt(a.lip) << ',' << fmt(a.gamma) << ',' << run.trace.iterations() << ','
        << to_string(run.trace.status) << ','
        << (report ? fmt(report->fitted_rate) : "") << ','
        << (report ? fmt(report->r_squared) : "") << ',' << beta << ',' << eps << ','
        << alpha << ',' << eta << '\n';
  }
  return all_converged ? kExitOk : kExitMaxIter;
}

// ---------------------------------------------------------------------------

int cmd_verify(const std::string& suite, std::uint64_t seed, const std::string& fault,
               bool list) {
  if (list) {
    for (const auto& name : suite_names()) std::printf("%s\n", name.c_str());
    return kExitOk;
  }
  VerifyOptions options;
  if (!suite.empty()) options.suite = suite;
  options.seed = seed;
  if (!fault.empty()) {
    if (fault != "prox") throw UsageError("unknown fault: " + fault);
    options.corrupt_prox = true;
  }
  int failed = 0;
  for (const SuiteResult& r : run_verification(options)) {
    std::printf("%s %-18s %7.3fs  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                r.seconds, r.detail.c_str());
    failed += !r.passed;
  }
  if (failed) std::fprintf(stderr, "minlift: %d suite(s) failed\n", failed);
  return failed ? kExitVerify : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal-lifting resolvent splitting: denoising, comparisons, rate studies"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(MINLIFT_VERSION));

  ImageArgs denoise_args;
  std::string denoise_output, denoise_trace, algorithm = "mt";
  CLI::App* denoise = app.add_subcommand("denoise", "Denoise one seeded noisy instance");
  add_image_flags(*denoise, denoise_args);
  denoise->add_option("--output", denoise_output, "Restored image (P5 PGM)");
  denoise->add_option("--trace", denoise_trace, "Per-iteration CSV trace");
  denoise->add_option("--algorithm", algorithm)
      ->check(CLI::IsMember({"mt", "dr-product"}))
      ->capture_default_str();

  ImageArgs compare_args;
  std::string compare_output;
  int repeats = 10;
  CLI::App* compare = app.add_subcommand("compare", "Minimal lifting vs product-space DR");
  add_image_flags(*compare, compare_args);
  compare->add_option("--output", compare_output, "Summary CSV (default stdout)");
  compare->add_option("--repeats", repeats, "Noise instances (seeds seed..seed+R-1)")
      ->capture_default_str();

  SyntheticArgs syn;
  std::string syn_output;
  CLI::App* synthetic = app.add_subcommand("synthetic", "Rate study on random affine families");
  synthetic->add_option("--n", syn.n)->capture_default_str();
  synthetic->add_option("--dim", syn.dim)->capture_default_str();
  synthetic->add_option("--mu", syn.mu)->capture_default_str();
  synthetic->add_option("--lip", syn.lip)->capture_default_str();
  synthetic->add_option("--gamma", syn.gamma)->capture_default_str();
  synthetic->add_option("--case", syn.which)
      ->check(CLI::IsMember({"a", "b", "zeros", "cones"}))
      ->capture_default_str();
  synthetic->add_option("--seed", syn.seed)->capture_default_str();
  synthetic->add_option("--repeats", syn.repeats)->capture_default_str();
  synthetic->add_option("--tol", syn.tol)->capture_default_str();
  synthetic->add_option("--max-iter", syn.max_iter)->capture_default_str();
  synthetic->add_option("--output", syn_output, "CSV (default stdout)");

  std::string suite, fault;
  std::uint64_t verify_seed = 7;
  bool list = false;
  CLI::App* verify = app.add_subcommand("verify", "Run the invariant suites");
  verify->add_option("--suite", suite, "Run only this suite");
  verify->add_option("--seed", verify_seed)->capture_default_str();
  verify->add_flag("--list", list, "List suite names");
  verify->add_option("--inject-fault", fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*denoise) return cmd_denoise(denoise_args, denoise_output, denoise_trace, algorithm);
    if (*compare) return cmd_compare(compare_args, compare_output, repeats);
    if (*synthetic) return cmd_synthetic(syn, syn_output);
    if (*verify) return cmd_verify(suite, verify_seed, fault, list);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "minlift: usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const FormatError& e) {
    std::fprintf(stderr, "minlift: format error: %s\n", e.what());
    return kExitIo;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "minlift: numeric error: %s (residual %g)\n", e.what(), e.residual());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "minlift: %s\n", e.what());
    return kExitIo;
  }
  return kExitUsage;
}
