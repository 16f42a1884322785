#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "cartan/cartan_realization.hpp"
#include "cartan/haar.hpp"

namespace cartan {

/// Evaluation point of phi_{t lambda} and, optionally, directions X_1..X_s in a for the
/// s-th differential.
struct SphericalQuery {
  Eigen::VectorXd lambda;
  double t = 1.0;
  Eigen::VectorXd a;
  std::vector<Eigen::VectorXd> directions;
  IntegrateOptions options;

  static constexpr int kMaxOrder = 8;
};

/// (max - min)/2 of (w lambda)(a) over the Weyl group: the half range of the phase.
double phase_half_range(const CartanData& cd, const Eigen::VectorXd& lambda,
                        const Eigen::VectorXd& a);

/// Integral over K of  prod_j <X_j, Ad(k) H_lambda> * exp(i t <a, Ad(k) H_lambda>).
IntegralResult oscillatory_integral(const CartanData& cd, const Eigen::VectorXd& lambda,
                                    const Eigen::VectorXd& a, double t,
                                    const std::vector<Eigen::VectorXd>& directions,
                                    const IntegrateOptions& opts);

/// phi_{t lambda}(a) = integral over K of exp(i t <a, Ad(k) H_lambda>).
IntegralResult spherical_value(const CartanData& cd, const SphericalQuery& q);

/// D^s phi_{t lambda}(a)(X_1, ..., X_s). The phase is linear in a, so the derivative is the
/// integral with the factor prod_j (i t <X_j, Ad(k) H_lambda>) inserted.
IntegralResult spherical_derivative(const CartanData& cd, const SphericalQuery& q);

struct ScalingCheck {
  IntegralResult at_scale;     // lambda at scale t
  IntegralResult scaled_lambda;  // t lambda at scale 1
  bool agrees = false;
};

/// Compares the evaluation at scale t with the evaluation of t lambda at scale 1.
ScalingCheck scaling_identity_check(const CartanData& cd, const Eigen::VectorXd& lambda,
                                    const Eigen::VectorXd& a, double t,
                                    const IntegrateOptions& opts = {});

}  // namespace cartan
