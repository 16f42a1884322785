#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cartan/group_spec.hpp"
#include "cartan/root_system.hpp"

namespace cartan {

/// An element (x, k) of the motion group p x| K.
///
/// For sl:n, x is a symmetric traceless n x n matrix. For so:n,1, x is a column
/// vector of R^n. In both cases k is an n x n rotation.
struct MotionElement {
  Eigen::MatrixXd x;
  Eigen::MatrixXd k;
};

/// Bases of the root spaces attached to one positive root.
struct RootSpace {
  std::size_t root_index = 0;           // index into RootSystem::roots()
  std::vector<Eigen::MatrixXd> p_basis;  // orthonormal for inner_p
  std::vector<Eigen::MatrixXd> k_basis;  // orthonormal for inner_k, [H, k_j] = alpha(H) p_j
};

/// Weighted sum  sum_ij C(i,j) k(i,j)^power.  Every pairing <X, Ad(k) Y> with X, Y in a
/// has this form, which is what the integrators evaluate on each node.
struct EntryKernel {
  Eigen::MatrixXd coeff;
  int power = 1;

  [[nodiscard]] double operator()(const Eigen::MatrixXd& k) const;
};

struct KakResult {
  Eigen::MatrixXd a;         // in the p-model, inside the closed positive chamber
  Eigen::VectorXd a_coords;  // coordinates in the orthonormal basis of a
  Eigen::MatrixXd k1;        // x = Ad(k1) a
};

/// Matrix model of the Cartan decomposition g = k + p together with a maximal
/// abelian a in p and the induced root data. Inner products come from the Killing
/// form: B(X, Y) = 2n tr(XY) on sl(n), B(X, Y) = (n - 1) tr(XY) on so(n, 1).
class CartanData {
public:
  explicit CartanData(const GroupSpec& spec);

  [[nodiscard]] const GroupSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] const RootSystem& roots() const noexcept { return roots_; }
  [[nodiscard]] int rank() const noexcept { return roots_.rank(); }
  [[nodiscard]] int k_size() const noexcept { return spec_.n; }
  [[nodiscard]] int dim_p() const noexcept { return dim_p_; }
  [[nodiscard]] int dim_k() const noexcept { return dim_k_; }

  [[nodiscard]] const std::vector<Eigen::MatrixXd>& a_basis() const noexcept { return a_basis_; }
  [[nodiscard]] const std::vector<RootSpace>& root_spaces() const noexcept { return root_spaces_; }
  /// Orthonormal basis of k (for -B).
  [[nodiscard]] const std::vector<Eigen::MatrixXd>& k_basis() const noexcept { return k_basis_; }
  /// Root space of the positive root with this index in RootSystem::roots().
  [[nodiscard]] const RootSpace& root_space(std::size_t root_index) const;

  /// Killing form on p-model elements.
  [[nodiscard]] double inner_p(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) const;
  /// -B on k (skew n x n matrices).
  [[nodiscard]] double inner_k(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) const;

  /// Embeddings of p- and k-model elements into g as matrices, and the Killing form,
  /// the Cartan involution and the bracket there.
  [[nodiscard]] Eigen::MatrixXd embed_p(const Eigen::MatrixXd& x) const;
  [[nodiscard]] Eigen::MatrixXd embed_k(const Eigen::MatrixXd& x) const;
  [[nodiscard]] double killing(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) const;
  [[nodiscard]] Eigen::MatrixXd theta(const Eigen::MatrixXd& x) const;
  [[nodiscard]] static Eigen::MatrixXd bracket(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y)
  {
    return x * y - y * x;
  }

  /// Adjoint action of K on the p-model.
  [[nodiscard]] Eigen::MatrixXd ad(const Eigen::MatrixXd& k, const Eigen::MatrixXd& x) const;

  /// Element of a with the given coordinates.
  [[nodiscard]] Eigen::MatrixXd a_element(const Eigen::VectorXd& coords) const;
  /// Orthogonal projection of a p-model element onto a, in coordinates.
  [[nodiscard]] Eigen::VectorXd a_coordinates(const Eigen::MatrixXd& x) const;
  /// H_lambda with B(H_lambda, H) = lambda(H), as coordinates in a.
  [[nodiscard]] Eigen::VectorXd h_lambda(const Eigen::VectorXd& lambda) const;
  /// alpha(H) for the root with this index.
  [[nodiscard]] double root_value(std::size_t root_index, const Eigen::VectorXd& a_coords) const;

  /// The map k -> <X, Ad(k) Y> for X, Y in a given by coordinates.
  [[nodiscard]] EntryKernel pairing_kernel(const Eigen::VectorXd& x_coords,
                                           const Eigen::VectorXd& y_coords) const;

  /// Fixed representative k_w in K of a Weyl element: Ad(k_w) acts on a as w does.
  [[nodiscard]] Eigen::MatrixXd weyl_representative(const WeylElement& w) const;

  /// Checks that g is a well-formed element of this realization (tolerance 1e-10).
  void validate(const MotionElement& g) const;
  [[nodiscard]] MotionElement identity() const;

private:
  GroupSpec spec_;
  RootSystem roots_;
  int dim_p_ = 0;
  int dim_k_ = 0;
  double killing_scale_ = 1.0;
  std::vector<Eigen::MatrixXd> a_basis_;
  std::vector<RootSpace> root_spaces_;
  std::vector<Eigen::MatrixXd> k_basis_;
};

CartanData realize(const GroupSpec& spec);

/// (x, k)(x', k') = (x + Ad(k) x', k k').
MotionElement motion_multiply(const CartanData& cd, const MotionElement& g, const MotionElement& h);
MotionElement motion_inverse(const CartanData& cd, const MotionElement& g);

/// x = Ad(k1) a with a in the closed positive chamber. The k1 returned is a fixed
/// deterministic choice; it is unique only up to the centralizer of a.
KakResult kak_project(const CartanData& cd, const MotionElement& g);

/// True when every positive root exceeds the margin on the projected a.
bool is_regular(const CartanData& cd, const MotionElement& g, double margin = 1e-9);

/// <a, Ad(k) H_lambda>.
double phase_function(const CartanData& cd, const Eigen::VectorXd& a_coords,
                      const Eigen::VectorXd& lambda, const Eigen::MatrixXd& k);

/// Eigenvalues -<alpha, lambda> (w alpha)(a), each repeated m(alpha) times, over positive
/// roots not orthogonal to lambda. Sorted ascending.
std::vector<double> hessian_spectrum(const CartanData& cd, const Eigen::VectorXd& a_coords,
                                     const Eigen::VectorXd& lambda, const WeylElement& w);

/// Matrix exponential of a skew matrix (an element of k) into K.
Eigen::MatrixXd exp_k(const Eigen::MatrixXd& y);

}  // namespace cartan
