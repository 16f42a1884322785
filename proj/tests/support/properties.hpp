#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cartan/cartan_realization.hpp"

namespace cartan::testing {

struct PropertyOutcome {
  std::string name;
  int cases = 0;
  int failures = 0;
  double worst = 0.0;  // largest observed discrepancy
  std::string first_failure;
  [[nodiscard]] bool ok() const { return cases > 0 && failures == 0; }
};

/// Gaussian element of p in the model used by CartanData.
Eigen::MatrixXd random_p(const CartanData& cd, std::mt19937_64& rng, double scale = 1.0);

/// Point of a whose simple-root values all exceed `margin` times its norm.
Eigen::VectorXd random_regular_a(const CartanData& cd, std::mt19937_64& rng, double scale = 1.0,
                                 double margin = 0.05);

/// Random nonzero covector; every fourth draw lands on a multiple of a fundamental weight.
Eigen::VectorXd random_lambda(const CartanData& cd, std::mt19937_64& rng, double scale = 1.0);

/// Finite-difference Hessian of k -> phase(a, lambda, k_w exp(Y)) in the orthonormal k frame.
Eigen::MatrixXd finite_difference_hessian(const CartanData& cd, const Eigen::VectorXd& a,
                                          const Eigen::VectorXd& lambda, const Eigen::MatrixXd& k_w,
                                          double step = 1e-3);

// Each suite runs `cases` randomized cases drawn from `seed`.
PropertyOutcome kak_property(std::uint64_t seed, int cases);
PropertyOutcome haar_property(std::uint64_t seed, int cases);
PropertyOutcome modulus_property(std::uint64_t seed, int cases);
PropertyOutcome invariance_property(std::uint64_t seed, int cases);
PropertyOutcome scaling_property(std::uint64_t seed, int cases);
PropertyOutcome hessian_property(std::uint64_t seed, int cases);
PropertyOutcome sigma_property(std::uint64_t seed, int cases);

}  // namespace cartan::testing
