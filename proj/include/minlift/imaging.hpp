#pragma once

#include "minlift/hvector.hpp"
#include "minlift/linear_map.hpp"
#include "minlift/random.hpp"
#include "minlift/primal_dual.hpp"
#include "minlift/splitting.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace minlift {

/// Square grayscale image, row-major, values nominally in [0, 1].
struct ImageGray {
  int M = 0;
  HVector pixels;

  ImageGray() = default;
  ImageGray(int side, HVector values);
  static ImageGray filled(int side, double value);

  Index size() const { return pixels.size(); }
  double at(int row, int col) const { return pixels[row * M + col]; }
};

/// D = (Id (x) D_1 ; D_1 (x) Id) with forward differences and a zero last row
/// in D_1. Applied matrix-free on row-major M x M images: the first M^2
/// outputs are horizontal differences, the last M^2 vertical ones.
class DiscreteGradient final : public LinearMap {
 public:
  explicit DiscreteGradient(int side);

  int side() const { return side_; }
  Index rows() const override { return 2 * cols(); }
  Index cols() const override { return Index(side_) * side_; }
  HVector apply(const HVector& u) const override;
  HVector adjoint(const HVector& y) const override;

 private:
  int side_;
};

HVector discrete_gradient_apply(const ImageGray& u);
HVector discrete_gradient_adjoint(const HVector& y, int side);
/// (Id + D^T D)^{-1} rhs by matrix-free CG; throws NumericError after 10 m
/// iterations without reaching ||r|| <= 1e-12 ||rhs||.
HVector solve_identity_plus_DtD(const HVector& rhs, int side);

/// Adds N(0, sigma^2) noise (Box-Muller over CounterRng) and clamps to [0,1].
ImageGray add_gaussian_noise(const ImageGray& img, double sigma,
                             std::uint64_t seed);
/// Noise draws before clamping, exposed for statistics checks.
HVector gaussian_noise(Index count, double sigma, std::uint64_t seed);

ImageGray clamp01(const ImageGray& img);

/// P2 or P5, maxval 255, square only.
ImageGray load_pgm(const std::filesystem::path& path);
ImageGray parse_pgm(const std::string& bytes);
/// Writes P5 with round-half-up quantisation of the clamped values.
void save_pgm(const ImageGray& img, const std::filesystem::path& path);
std::string encode_pgm(const ImageGray& img);

/// Modified Shepp-Logan phantom rasterised at side M.
ImageGray shepp_logan_phantom(int side);

struct DenoiseParams {
  double lambda1 = 0.01;
  double lambda2 = 0.05;
  double lambda3 = 0.0001;
  double lambda4 = 10.0;
  double gamma = 0.99;
  double noise_sigma = 0.05;
  std::uint64_t seed = 1;
  double tol = 1e-4;
  int max_iter = 500;

  void validate() const;
};

/// n = 3 instance: f_2 = 1/2||u-b||^2, f_3 = (l1/2)||u||^2,
/// g_2 = l2||v||_iso + (l3/2)||v||^2, g_3 = (l4/2)||v||^2, C = D.
PDProblem build_denoise_problem(const ImageGray& noisy,
                                const DenoiseParams& params);

enum class Algorithm { MinimalLifting, ProductDR };

const char* to_string(Algorithm algorithm);

struct DenoiseRun {
  ImageGray restored;   // clamped shadow u_n (MT) or averaged u (DR)
  IterationTrace trace; // change, distance to reference, gap (MT only)
  HVector final_state;
  HVector reference;    // long-run reference state
  int reference_iterations = 0;
};

struct DenoiseOptions {
  Algorithm algorithm = Algorithm::MinimalLifting;
  bool with_reference = true;
  bool with_gap = true;
  /// Run exactly max_iter iterations regardless of tol.
  bool fixed_iterations = false;
};

/// Runs the chosen solver from zero initialisation. The stopping change is
/// normalised by the pixel count. With a reference, a second run of
/// max(200, 10 k) iterations supplies the approximate fixed point used for
/// distances and (MT) the primal-dual gap.
DenoiseRun run_denoise(const ImageGray& noisy, const DenoiseParams& params,
                       const DenoiseOptions& options = {});

}  // namespace minlift
