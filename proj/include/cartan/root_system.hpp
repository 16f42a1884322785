#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <boost/rational.hpp>

#include "cartan/group_spec.hpp"

namespace cartan {

using Rational = boost::rational<long long>;

/// A restricted root: coordinates of the covector in the working basis of a*.
struct Root {
  Eigen::VectorXd coords;
  int multiplicity = 1;
};

/// Element of the Weyl group. `word` (i1, ..., ik) stands for s_{i1} s_{i2} ... s_{ik};
/// `matrix` acts on a*-coordinates and equals the product of the simple reflections
/// in that order.
struct WeylElement {
  std::vector<int> word;
  Eigen::MatrixXd matrix;
  /// root_permutation[j] is the index of w(root j) in RootSystem::roots().
  std::vector<std::size_t> root_permutation;
};

/// Root data given by hand. The chamber functional is an element H0 of a written in
/// the basis dual to the covector coordinates, so alpha(H0) = alpha.dot(H0).
struct ExplicitRootData {
  std::vector<Root> roots;
  Eigen::VectorXd chamber;
  std::optional<Eigen::MatrixXd> gram;  // identity when absent
};

struct WeylOrbit {
  std::vector<Eigen::VectorXd> orbit;
  std::size_t stabilizer_order = 0;
  /// coset_reps[i] maps lambda to orbit[i].
  std::vector<WeylElement> coset_reps;
};

/// Restricted root system with its Weyl group.
///
/// Roots are held in floating point; the integer data (simple-root expansions,
/// Cartan integers, Weyl permutations of the roots) is recovered exactly by
/// rounding and checked at construction. Everything downstream that must be
/// exact (n(lambda) on rational input, kappa) is computed from the integer data.
class RootSystem {
public:
  explicit RootSystem(const ExplicitRootData& data);

  [[nodiscard]] int rank() const noexcept { return rank_; }
  [[nodiscard]] const std::vector<Root>& roots() const noexcept { return roots_; }
  [[nodiscard]] const std::vector<std::size_t>& positive() const noexcept { return positive_; }
  [[nodiscard]] const std::vector<std::size_t>& simple() const noexcept { return simple_; }
  [[nodiscard]] const Eigen::MatrixXd& gram() const noexcept { return gram_; }
  [[nodiscard]] const Eigen::VectorXd& chamber() const noexcept { return chamber_; }

  [[nodiscard]] const Root& root(std::size_t index) const { return roots_.at(index); }
  [[nodiscard]] const Root& simple_root(int i) const { return roots_.at(simple_.at(i)); }

  /// n_i(alpha) for the p-th positive root (p indexes positive()).
  [[nodiscard]] const std::vector<int>& simple_coefficients(std::size_t p) const
  {
    return coefficients_.at(p);
  }
  /// Cartan integers 2<a_i, a_j>/<a_j, a_j>.
  [[nodiscard]] const std::vector<std::vector<int>>& cartan_matrix() const noexcept
  {
    return cartan_;
  }

  [[nodiscard]] double inner(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const
  {
    return x.dot(gram_ * y);
  }
  [[nodiscard]] double norm(const Eigen::VectorXd& x) const { return std::sqrt(inner(x, x)); }

  /// Matrix of the reflection in the i-th simple root.
  [[nodiscard]] const Eigen::MatrixXd& simple_reflection(int i) const
  {
    return reflections_.at(i);
  }
  [[nodiscard]] const std::vector<WeylElement>& weyl_group() const noexcept { return weyl_; }

  /// Index of the root with these coordinates, if any.
  [[nodiscard]] std::optional<std::size_t> find_root(const Eigen::VectorXd& coords) const;

  /// Largest Weyl group the constructor will enumerate.
  static constexpr std::size_t kMaxWeylOrder = 50000;

private:
  int rank_ = 0;
  std::vector<Root> roots_;
  std::vector<std::size_t> positive_;
  std::vector<std::size_t> simple_;
  std::vector<std::vector<int>> coefficients_;
  std::vector<std::vector<int>> cartan_;
  std::vector<Eigen::MatrixXd> reflections_;
  std::vector<WeylElement> weyl_;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd chamber_;
};

/// Orthonormal basis (for the Killing form 2n tr(XY)) of the traceless diagonal
/// matrices of sl(n); column k holds the diagonal of the k-th basis element.
Eigen::MatrixXd sl_cartan_basis(int n);

/// Root system of a supported real form, in Killing-orthonormal coordinates of a*.
/// sl:n gives A_{n-1} with multiplicities 1 and the decreasing-diagonal chamber;
/// so:n,1 gives A_1 with multiplicity n-1.
RootSystem build_root_system(const GroupSpec& spec);
RootSystem build_root_system(const ExplicitRootData& data);

/// n(lambda): sum of m(alpha) over positive roots with <alpha, lambda> != 0.
/// A pairing counts as zero when |<alpha, lambda>| <= tol * |alpha| * |lambda|.
int n_lambda(const RootSystem& rs, const Eigen::VectorXd& lambda, double tol = 1e-12);

/// Exact n(lambda) for lambda given by its rational pairings <alpha_i, lambda> with
/// the simple roots.
int n_lambda_exact(const RootSystem& rs, const std::vector<Rational>& simple_pairings);

/// kappa = (1/2) min_i sum{ m(alpha) : alpha positive, n_i(alpha) >= 1 }.
Rational kappa(const RootSystem& rs);

/// Covector whose pairings with the simple roots are the given values.
Eigen::VectorXd covector_from_pairings(const RootSystem& rs, const Eigen::VectorXd& pairings);

/// Fundamental weight omega_i: 2<omega_i, alpha_j>/<alpha_j, alpha_j> = delta_ij.
Eigen::VectorXd fundamental_weight(const RootSystem& rs, int i);

/// Orbit of lambda by closure under simple reflections.
WeylOrbit weyl_orbit(const RootSystem& rs, const Eigen::VectorXd& lambda, double tol = 1e-9);

/// Number of Weyl elements fixing lambda, counted directly over the group.
std::size_t stabilizer_order(const RootSystem& rs, const Eigen::VectorXd& lambda,
                             double tol = 1e-9);

}  // namespace cartan
