#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cartan/cartan_realization.hpp"

namespace cartan {

/// Product quadrature on SO(2) or SO(3) with weights summing to one.
///
/// SO(2): uniform trapezoid in the angle. SO(3): k = Rz(alpha) Ry(beta) Rz(gamma) with
/// trapezoid in alpha and gamma and Gauss-Legendre in cos(beta).
struct QuadratureRule {
  int n = 2;
  std::vector<Eigen::MatrixXd> nodes;
  std::vector<double> weights;
  std::vector<int> axis_counts;  // {angle} or {alpha, cos beta, gamma}
};

/// Per-axis node counts used for a given resolution r: {r} on SO(2), {r, r/2 + 1, r} on SO(3).
std::vector<int> axis_counts(int n, int resolution);

QuadratureRule build_rule(int n, int resolution);

/// Gauss-Legendre nodes and weights on [-1, 1]. Results are cached.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int count);

/// Seeded Haar sampler on SO(n): QR of a Gaussian matrix, R with positive diagonal,
/// then the first column flipped if needed to land in SO(n).
class HaarSampler {
public:
  HaarSampler(int n, std::uint64_t seed);

  [[nodiscard]] int dimension() const noexcept { return n_; }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t counter() const noexcept { return counter_; }

  Eigen::MatrixXd next();

  /// Seed of the i-th independent child stream (splitmix64 of seed + i).
  static std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index);

private:
  int n_;
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::vector<Eigen::MatrixXd> sample(HaarSampler& sampler, std::size_t count);

struct IntegralResult {
  std::complex<double> value{0.0, 0.0};
  double error = 0.0;
  bool flagged = false;  // budget or tolerance not met
  std::size_t evaluations = 0;
  std::string note;
};

enum class Method { Auto, Quadrature, MonteCarlo };

struct IntegrateOptions {
  Method method = Method::Auto;
  int resolution = 0;              // 0 picks one from the oscillation scale
  std::size_t budget = 400000000;  // cap on integrand evaluations
  double tolerance = 0.0;          // flag results whose error estimate exceeds this
  std::size_t samples = 200000;    // Monte Carlo sample count
  std::uint64_t seed = 20240607;
  unsigned threads = 1;
  int nodes_per_period = 4;
};

using KFunction = std::function<std::complex<double>(const Eigen::MatrixXd&)>;

/// Weighted sum over the rule, with error taken from the same sum on the coarse rule.
IntegralResult integrate(const KFunction& f, const QuadratureRule& rule,
                         const QuadratureRule& coarse);

/// Sample mean over `count` Haar samples with its standard error.
IntegralResult integrate(const KFunction& f, HaarSampler& sampler, std::size_t count);

/// Integral over SO(n) by quadrature (n <= 3, resolution and half resolution) or Monte Carlo.
IntegralResult integrate(const KFunction& f, int n, const IntegrateOptions& opts);

/// Integrand  prod_j g_j(k) * exp(i t f(k))  with f and each g_j entry kernels.
struct OscillatoryIntegrand {
  int n = 2;
  EntryKernel phase;
  double t = 0.0;
  std::vector<EntryKernel> amplitudes;
  /// Half of (max f - min f) over K; sets the automatic resolution.
  double phase_half_range = 0.0;

  [[nodiscard]] std::complex<double> operator()(const Eigen::MatrixXd& k) const;
};

/// Resolution used when none is requested: nodes_per_period nodes per oscillation of
/// t f along each axis, plus padding for the amplitude degree.
int auto_resolution(const OscillatoryIntegrand& in, int nodes_per_period);

/// Integral of an oscillatory integrand over SO(n).
///
/// On SO(3) the outer Euler angle is integrated in closed form (Bessel functions), which is
/// the limit of the trapezoid rule in that angle; the remaining axes use the product rule.
/// Axes along which the integrand is invariant collapse to a single node.
IntegralResult integrate_oscillatory(const OscillatoryIntegrand& in, const IntegrateOptions& opts);

}  // namespace cartan
