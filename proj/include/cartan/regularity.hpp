#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cartan/cartan_realization.hpp"
#include "cartan/haar.hpp"
#include "cartan/stationary_phase.hpp"

namespace cartan {

// ---------------------------------------------------------------------------------------------
// Decay of phi_{t lambda}(a) in t

struct DecayFitOptions {
  /// Length of the t-window started at each grid point. 0 picks 2 pi / (smallest gap between
  /// the frequencies (w lambda)(a)), one period of the leading-order envelope.
  double window_length = 0.0;
  int samples_per_window = 32;
  int refine_iterations = 12;  // golden-section steps around the sampled maximum
  IntegrateOptions integrate;
};

struct DecayWindow {
  double t_start = 0.0;
  double t_at_max = 0.0;
  double max_abs = 0.0;
  double error = 0.0;
};

struct DecayFit {
  double slope = 0.0;
  double half_width = 0.0;  // two standard errors of the slope
  double intercept = 0.0;
  std::vector<DecayWindow> windows;
  bool flagged = false;  // integrator error above 10% of the signal somewhere
};

/// Least-squares slope of log(max |phi_{t lambda}(a)| over a window) against log t.
DecayFit decay_fit(const CartanData& cd, const Eigen::VectorXd& lambda, const Eigen::VectorXd& a,
                   const std::vector<double>& window_starts, const DecayFitOptions& opts = {});

/// Window length used when DecayFitOptions::window_length is 0.
double envelope_period(const CartanData& cd, const Eigen::VectorXd& lambda,
                       const Eigen::VectorXd& a);

// ---------------------------------------------------------------------------------------------
// Hoelder seminorm scans

enum class Verdict { Bounded, Unbounded, Indeterminate };
std::string to_string(Verdict v);

struct HolderThresholds {
  double flat_factor = 3.0;           // bounded: max / min of the column at most this
  double growth_per_decade = 4.0;     // unbounded: monotone growth at least this per decade
  double monotone_slack = 0.02;       // relative dip tolerated in a monotone column
};

struct HolderRow {
  double h = 0.0;
  double sup_difference = 0.0;        // sup over t of |D^r phi(x) - D^r phi(x + h u)|
  double t_at_sup = 0.0;
  double error = 0.0;                 // integrator error at the maximizing t
  std::vector<double> ratios;         // sup_difference / h^delta, one per exponent
};

struct HolderColumn {
  double exponent = 0.0;
  Verdict verdict = Verdict::Indeterminate;
  double max_over_min = 0.0;
  double growth_per_decade = 0.0;     // geometric mean growth as h shrinks by 10x
  double loglog_slope = 0.0;          // d log(ratio) / d log(h)
  bool monotone = false;
};

struct HolderTable {
  int order = 0;
  Eigen::VectorXd base_point;
  Eigen::VectorXd offset_direction;
  std::vector<double> exponents;
  std::vector<HolderRow> rows;        // sorted by decreasing h
  std::vector<HolderColumn> columns;
  bool flagged = false;
};

struct HolderScanOptions {
  /// Offset direction in a (normalized before use). Empty picks the radial direction of x.
  Eigen::VectorXd direction;
  HolderThresholds thresholds;
  double wall_margin = 1e-9;
  IntegrateOptions integrate;
};

/// Differences of the order-r differential of phi_{t lambda} between x and x + h u, maximized
/// over t in t_grid and over multi-indices of the orthonormal frame of a.
HolderTable holder_scan(const CartanData& cd, const Eigen::VectorXd& lambda, int order,
                        const std::vector<double>& exponents, const Eigen::VectorXd& x,
                        const std::vector<double>& offsets, const std::vector<double>& t_grid,
                        const HolderScanOptions& opts = {});

/// Verdict for one ratio column given offsets in any order.
HolderColumn classify_column(const std::vector<double>& offsets, const std::vector<double>& values,
                             double exponent, const HolderThresholds& th = {});

/// max over frame multi-indices of |D^r phi_{t lambda}(x) - D^r phi_{t lambda}(y)|, with the
/// summed error estimates of the maximizing pair.
std::pair<double, double> differential_gap(const CartanData& cd, const Eigen::VectorXd& lambda,
                                           int order, const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& y, double t,
                                           const IntegrateOptions& opts);

// ---------------------------------------------------------------------------------------------
// Interpolation between the decay bound and the mean value bound

struct InterpolationRow {
  double t = 0.0;
  double h = 0.0;
  double difference = 0.0;
  double error = 0.0;
  double decay_bound = 0.0;     // A t^{-1/2}
  double mean_value_bound = 0.0;  // B t^{1/2} h
  bool calibration = false;
  bool violated = false;
};

struct InterpolationReport {
  double A = 0.0;
  double B = 0.0;
  std::vector<InterpolationRow> rows;
  std::size_t validation_rows = 0;
  std::size_t violations = 0;
  double violation_fraction = 0.0;
  bool passed = false;  // at most 5% of validation rows violate the fitted bound
};

/// Fits A and B on (calibration t) x h and validates on (validation t) x h. Requires
/// kappa - floor(kappa) = 1/2.
InterpolationReport interpolation_check(const CartanData& cd, const Eigen::VectorXd& lambda,
                                        const Eigen::VectorXd& x, const std::vector<double>& h_list,
                                        const std::vector<double>& calibration_t,
                                        const std::vector<double>& validation_t,
                                        const HolderScanOptions& opts = {});

// ---------------------------------------------------------------------------------------------
// Averaged lower bound for exponential sums

/// (1/N) sum_{t=m}^{m+N-1} |S_t(x) - S_t(x + h)|^2 with S_t the normalized leading sum
/// (no power of t) for the product amplitude of the directions.
double averaged_lower_bound(const CartanData& cd, const Eigen::VectorXd& lambda,
                            const Eigen::VectorXd& x, const Eigen::VectorXd& h, long long m,
                            long long N, const std::vector<Eigen::VectorXd>& directions = {});

/// Long-run value of the mean square: sum over terms of |c_w(x)|^2 + |c_w(x + h)|^2.
double averaged_limit(const CartanData& cd, const Eigen::VectorXd& lambda,
                      const Eigen::VectorXd& x, const Eigen::VectorXd& h,
                      const std::vector<Eigen::VectorXd>& directions = {});

struct LowerBoundRow {
  double h = 0.0;
  long long m = 0;
  long long N = 0;
  double mean_square = 0.0;
  double limit = 0.0;
};

struct LowerBoundReport {
  double d = 0.0;       // fitted: N = ceil(d / |h|)
  double delta_prime = 0.0;
  std::vector<LowerBoundRow> rows;
  double floor = 0.0;   // min mean square over the rows
  double spread = 0.0;  // max / min mean square
  bool stable = false;  // floor > 0 and spread <= 2
};

/// Smallest power of two d for which every offset in the list reaches `fraction` of the
/// long-run mean square with N = ceil(d / |h|) and m = ceil(|h|^{-delta'}).
double calibrate_d(const CartanData& cd, const Eigen::VectorXd& lambda, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& direction, const std::vector<double>& h_list,
                   double delta_prime, const std::vector<Eigen::VectorXd>& directions = {},
                   double fraction = 0.5, double d_max = 1 << 20);

LowerBoundReport averaged_lower_bound_scan(const CartanData& cd, const Eigen::VectorXd& lambda,
                                           const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& direction,
                                           const std::vector<double>& h_list, double delta_prime,
                                           const std::vector<Eigen::VectorXd>& directions = {},
                                           double d = 0.0);

}  // namespace cartan
