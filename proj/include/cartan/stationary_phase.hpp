#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "cartan/cartan_realization.hpp"
#include "cartan/haar.hpp"

namespace cartan {

struct ExpansionTerm {
  WeylElement w;
  Eigen::MatrixXd k_w;      // fixed representative of w in K
  double frequency = 0.0;   // (w lambda)(a)
  int sigma = 0;
  std::complex<double> coeff{0.0, 0.0};
};

/// Leading stationary-phase terms of  integral_K g(k) exp(i t <a, Ad(k) H_lambda>) dk,
/// one per coset of W / W_lambda.
struct AsymptoticExpansion {
  Eigen::VectorXd lambda;
  Eigen::VectorXd a;
  std::vector<ExpansionTerm> terms;
  int n_lambda = 0;
  double exponent = 0.0;  // n(lambda) / 2
};

/// -sum over positive roots alpha with <alpha, lambda> != 0 of m(alpha) sgn(<alpha, lambda> (w alpha)(a)).
/// Throws std::domain_error when some (w alpha)(a) vanishes.
int sigma(const RootSystem& rs, const Eigen::VectorXd& lambda, const WeylElement& w,
          const Eigen::VectorXd& a);

/// Volume of SO(n) for the bi-invariant metric in which E_ij - E_ji has length c.
double volume_so(int n, double c);

/// Riemannian volume of K / K_lambda for the quotient metric of -B.
double vol_quotient(const CartanData& cd, const Eigen::VectorXd& lambda);

/// e^{i pi sigma / 4} prod |<alpha, lambda> (w alpha)(a) / (2 pi)|^{-m(alpha)/2} g(k_w) / Vol(K / K_lambda).
std::complex<double> leading_coefficient(const CartanData& cd, const Eigen::VectorXd& lambda,
                                         const Eigen::VectorXd& a, const WeylElement& w,
                                         const KFunction& g);

/// Amplitude prod_j <X_j, Ad(k) H_lambda>; the constant 1 when there are no directions.
KFunction product_amplitude(const CartanData& cd, const Eigen::VectorXd& lambda,
                            const std::vector<Eigen::VectorXd>& directions);

AsymptoticExpansion build_expansion(const CartanData& cd, const Eigen::VectorXd& lambda,
                                    const Eigen::VectorXd& a, const KFunction& g);
AsymptoticExpansion build_expansion(const CartanData& cd, const Eigen::VectorXd& lambda,
                                    const Eigen::VectorXd& a,
                                    const std::vector<Eigen::VectorXd>& directions = {});

/// sum over terms of e^{i t frequency} coeff, without the power of t.
std::complex<double> normalized_sum(const AsymptoticExpansion& exp, double t);

/// t^{-exponent} sum over terms of e^{i t frequency} coeff.
std::complex<double> leading_sum(const AsymptoticExpansion& exp, double t);

struct DecayRow {
  double t = 0.0;
  std::complex<double> exact;
  double exact_error = 0.0;
  std::complex<double> leading;
  double scaled_residual = 0.0;  // |exact - leading| t^{exponent + 1}
  double scaled_error = 0.0;     // exact_error t^{exponent + 1}
  bool flagged = false;
};

struct DecayScan {
  std::vector<DecayRow> rows;
  double exponent = 0.0;
  double ratio = 0.0;   // max / min of the scaled residual on the upper half of the grid
  bool within_error = false;  // every upper-half residual is below twice its error bar
  bool bounded = false;
};

/// Compares the integral (with the product amplitude of the directions) against the leading
/// sum on t_grid. The residual is called bounded when its max/min ratio on the upper half of
/// the grid is at most max_ratio, or when it vanishes within the quadrature error there.
DecayScan error_decay_scan(const CartanData& cd, const Eigen::VectorXd& lambda,
                           const Eigen::VectorXd& a, const std::vector<double>& t_grid,
                           const std::vector<Eigen::VectorXd>& directions = {},
                           const IntegrateOptions& opts = {}, double max_ratio = 10.0);

}  // namespace cartan
