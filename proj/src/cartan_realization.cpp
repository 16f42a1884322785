#include "cartan/cartan_realization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace cartan {

namespace {

constexpr double kModelTol = 1e-10;

Eigen::MatrixXd unit_skew(int n, int i, int j, double scale)
{
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, n);
  z(i, j) = scale;
  z(j, i) = -scale;
  return z;
}

Eigen::MatrixXd unit_sym(int n, int i, int j, double scale)
{
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, n);
  z(i, j) = scale;
  z(j, i) = scale;
  return z;
}

bool is_sl(const GroupSpec& spec) { return spec.family == GroupFamily::SpecialLinear; }

}  // namespace

double EntryKernel::operator()(const Eigen::MatrixXd& k) const
{
  if (power == 1) return coeff.cwiseProduct(k).sum();
  return coeff.cwiseProduct(k.cwiseAbs2()).sum();
}

CartanData::CartanData(const GroupSpec& spec) : spec_(spec), roots_(build_root_system(spec))
{
  const int n = spec.n;
  dim_k_ = n * (n - 1) / 2;
  if (is_sl(spec)) {
    dim_p_ = n * (n + 1) / 2 - 1;
    killing_scale_ = 2.0 * n;
    const Eigen::MatrixXd basis = sl_cartan_basis(n);
    for (int k = 0; k < n - 1; ++k) {
      a_basis_.push_back(basis.col(k).asDiagonal());
    }
    const double s = 1.0 / std::sqrt(4.0 * n);
    for (std::size_t p : roots_.positive()) {
      const Eigen::VectorXd& alpha = roots_.root(p).coords;
      bool found = false;
      for (int i = 0; i < n && !found; ++i) {
        for (int j = i + 1; j < n && !found; ++j) {
          if ((basis.row(i) - basis.row(j)).transpose().isApprox(alpha, 1e-12)) {
            root_spaces_.push_back({p, {unit_sym(n, i, j, s)}, {unit_skew(n, i, j, s)}});
            found = true;
          }
        }
      }
      if (!found) throw std::logic_error("sl root without a matching root space");
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) k_basis_.push_back(unit_skew(n, i, j, s));
    }
  } else {
    dim_p_ = n;
    killing_scale_ = n - 1.0;
    const double c = std::sqrt(2.0 * (n - 1));
    Eigen::MatrixXd a1 = Eigen::MatrixXd::Zero(n, 1);
    a1(0, 0) = 1.0 / c;
    a_basis_.push_back(a1);
    RootSpace space;
    space.root_index = roots_.positive().front();
    for (int j = 1; j < n; ++j) {
      Eigen::MatrixXd pj = Eigen::MatrixXd::Zero(n, 1);
      pj(j, 0) = 1.0 / c;
      space.p_basis.push_back(pj);
      space.k_basis.push_back(unit_skew(n, 0, j, 1.0 / c));
    }
    root_spaces_.push_back(std::move(space));
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) k_basis_.push_back(unit_skew(n, i, j, 1.0 / c));
    }
  }
}

const RootSpace& CartanData::root_space(std::size_t root_index) const
{
  for (const auto& rs : root_spaces_) {
    if (rs.root_index == root_index) return rs;
  }
  throw std::invalid_argument("no root space for root " + std::to_string(root_index));
}

double CartanData::inner_p(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) const
{
  // tr(XY) for symmetric X, Y; twice v.w for the off-diagonal blocks of so(n, 1).
  const double dot = x.cwiseProduct(y).sum();
  return is_sl(spec_) ? killing_scale_ * dot : 2.0 * killing_scale_ * dot;
}

double CartanData::inner_k(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) const
{
  return killing_scale_ * x.cwiseProduct(y).sum();
}

Eigen::MatrixXd CartanData::embed_p(const Eigen::MatrixXd& x) const
{
  if (is_sl(spec_)) return x;
  const int n = spec_.n;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n + 1, n + 1);
  g.block(0, n, n, 1) = x;
  g.block(n, 0, 1, n) = x.transpose();
  return g;
}

Eigen::MatrixXd CartanData::embed_k(const Eigen::MatrixXd& x) const
{
  if (is_sl(spec_)) return x;
  const int n = spec_.n;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n + 1, n + 1);
  g.topLeftCorner(n, n) = x;
  return g;
}

double CartanData::killing(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) const
{
  return killing_scale_ * (x * y).trace();
}

Eigen::MatrixXd CartanData::theta(const Eigen::MatrixXd& x) const
{
  if (is_sl(spec_)) return -x.transpose();
  const int n = spec_.n;
  Eigen::VectorXd j = Eigen::VectorXd::Ones(n + 1);
  j[n] = -1.0;
  return j.asDiagonal() * x * j.asDiagonal();
}

Eigen::MatrixXd CartanData::ad(const Eigen::MatrixXd& k, const Eigen::MatrixXd& x) const
{
  if (is_sl(spec_)) return k * x * k.transpose();
  return k * x;
}

Eigen::MatrixXd CartanData::a_element(const Eigen::VectorXd& coords) const
{
  if (coords.size() != rank()) {
    throw std::invalid_argument("expected " + std::to_string(rank()) + " coordinates in a, got " +
                                std::to_string(coords.size()));
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a_basis_.front().rows(), a_basis_.front().cols());
  for (int i = 0; i < rank(); ++i) out += coords[i] * a_basis_[i];
  return out;
}

Eigen::VectorXd CartanData::a_coordinates(const Eigen::MatrixXd& x) const
{
  Eigen::VectorXd out(rank());
  for (int i = 0; i < rank(); ++i) out[i] = inner_p(a_basis_[i], x);
  return out;
}

Eigen::VectorXd CartanData::h_lambda(const Eigen::VectorXd& lambda) const
{
  if (lambda.size() != rank()) {
    throw std::invalid_argument("lambda has " + std::to_string(lambda.size()) +
                                " coordinates, expected " + std::to_string(rank()));
  }
  // a and a* share the orthonormal coordinates, so the Riesz map is the identity.
  return lambda;
}

double CartanData::root_value(std::size_t root_index, const Eigen::VectorXd& a_coords) const
{
  return roots_.root(root_index).coords.dot(a_coords);
}

EntryKernel CartanData::pairing_kernel(const Eigen::VectorXd& x_coords,
                                       const Eigen::VectorXd& y_coords) const
{
  const Eigen::MatrixXd x = a_element(x_coords);
  const Eigen::MatrixXd y = a_element(y_coords);
  EntryKernel kern;
  if (is_sl(spec_)) {
    kern.power = 2;
    kern.coeff = killing_scale_ * x.diagonal() * y.diagonal().transpose();
  } else {
    kern.power = 1;
    kern.coeff = 2.0 * killing_scale_ * x * y.transpose();
  }
  return kern;
}

Eigen::MatrixXd CartanData::weyl_representative(const WeylElement& w) const
{
  const int n = spec_.n;
  if (!is_sl(spec_)) {
    Eigen::MatrixXd k = Eigen::MatrixXd::Identity(n, n);
    if (w.matrix(0, 0) < 0) {
      k(0, 0) = -1.0;
      k(1, 1) = -1.0;
    }
    return k;
  }
  // Track where w sends the entries of a generic diagonal.
  Eigen::VectorXd generic(n);
  for (int i = 0; i < n; ++i) generic[i] = n - 1 - 2.0 * i + 0.1 * i * i;
  generic.array() -= generic.mean();
  const Eigen::VectorXd src = a_element(a_coordinates(generic.asDiagonal().toDenseMatrix()))
                                  .diagonal();
  const Eigen::VectorXd dst = a_element(w.matrix * a_coordinates(src.asDiagonal().toDenseMatrix()))
                                  .diagonal();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    int best = 0;
    for (int j = 1; j < n; ++j) {
      if (std::abs(dst[i] - src[j]) < std::abs(dst[i] - src[best])) best = j;
    }
    k(i, best) = 1.0;
  }
  if (k.determinant() < 0) k.col(0) *= -1.0;
  return k;
}

void CartanData::validate(const MotionElement& g) const
{
  const int n = spec_.n;
  if (g.k.rows() != n || g.k.cols() != n) {
    throw std::invalid_argument("K element must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if ((g.k.transpose() * g.k - Eigen::MatrixXd::Identity(n, n)).lpNorm<Eigen::Infinity>() >
          kModelTol ||
      std::abs(g.k.determinant() - 1.0) > kModelTol) {
    throw std::invalid_argument("K element is not in SO(n)");
  }
  if (is_sl(spec_)) {
    if (g.x.rows() != n || g.x.cols() != n) {
      throw std::invalid_argument("p element must be an n x n matrix");
    }
    const double scale = std::max(1.0, g.x.lpNorm<Eigen::Infinity>());
    if ((g.x - g.x.transpose()).lpNorm<Eigen::Infinity>() > kModelTol * scale ||
        std::abs(g.x.trace()) > kModelTol * scale * n) {
      throw std::invalid_argument("p element must be symmetric and traceless");
    }
  } else if (g.x.rows() != n || g.x.cols() != 1) {
    throw std::invalid_argument("p element must be a vector of length " + std::to_string(n));
  }
}

MotionElement CartanData::identity() const
{
  const int n = spec_.n;
  return {is_sl(spec_) ? Eigen::MatrixXd::Zero(n, n) : Eigen::MatrixXd::Zero(n, 1),
          Eigen::MatrixXd::Identity(n, n)};
}

CartanData realize(const GroupSpec& spec) { return CartanData(spec); }

MotionElement motion_multiply(const CartanData& cd, const MotionElement& g, const MotionElement& h)
{
  if (g.x.rows() != h.x.rows() || g.x.cols() != h.x.cols() || g.k.rows() != h.k.rows()) {
    throw std::invalid_argument("motion elements come from different realizations");
  }
  return {g.x + cd.ad(g.k, h.x), g.k * h.k};
}

MotionElement motion_inverse(const CartanData& cd, const MotionElement& g)
{
  const Eigen::MatrixXd kinv = g.k.transpose();
  return {-cd.ad(kinv, g.x), kinv};
}

KakResult kak_project(const CartanData& cd, const MotionElement& g)
{
  const int n = cd.k_size();
  KakResult out;
  if (cd.spec().family == GroupFamily::SpecialLinear) {
    if (g.x.rows() != n || g.x.cols() != n) throw std::invalid_argument("p element shape");
    const Eigen::MatrixXd sym = 0.5 * (g.x + g.x.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
    Eigen::VectorXd vals = eig.eigenvalues().reverse();
    Eigen::MatrixXd vecs = eig.eigenvectors().rowwise().reverse();
    for (int c = 0; c < n; ++c) {
      for (int r = 0; r < n; ++r) {
        if (std::abs(vecs(r, c)) > 1e-12) {
          if (vecs(r, c) < 0) vecs.col(c) *= -1.0;
          break;
        }
      }
    }
    if (vecs.determinant() < 0) vecs.col(n - 1) *= -1.0;
    out.a = vals.asDiagonal();
    out.k1 = vecs;
  } else {
    if (g.x.rows() != n || g.x.cols() != 1) throw std::invalid_argument("p element shape");
    const Eigen::VectorXd v = g.x.col(0);
    const double r = v.norm();
    out.a = Eigen::MatrixXd::Zero(n, 1);
    out.a(0, 0) = r;
    out.k1 = Eigen::MatrixXd::Identity(n, n);
    if (r > 0) {
      Eigen::VectorXd u = -v / r;
      u[0] += 1.0;
      if (u.norm() > 1e-14) {
        Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n) - 2.0 * u * u.transpose() / u.squaredNorm();
        h.col(1) *= -1.0;  // Householder has det -1; k1 e1 is unchanged
        out.k1 = h;
      }
    }
  }
  out.a_coords = cd.a_coordinates(out.a);
  return out;
}

bool is_regular(const CartanData& cd, const MotionElement& g, double margin)
{
  const KakResult kak = kak_project(cd, g);
  for (std::size_t p : cd.roots().positive()) {
    if (!(cd.root_value(p, kak.a_coords) > margin)) return false;
  }
  return true;
}

double phase_function(const CartanData& cd, const Eigen::VectorXd& a_coords,
                      const Eigen::VectorXd& lambda, const Eigen::MatrixXd& k)
{
  const Eigen::MatrixXd h = cd.a_element(cd.h_lambda(lambda));
  return cd.inner_p(cd.a_element(a_coords), cd.ad(k, h));
}

std::vector<double> hessian_spectrum(const CartanData& cd, const Eigen::VectorXd& a_coords,
                                     const Eigen::VectorXd& lambda, const WeylElement& w)
{
  const RootSystem& rs = cd.roots();
  if (lambda.size() != rs.rank() || a_coords.size() != rs.rank()) {
    throw std::invalid_argument("dimension mismatch in hessian_spectrum");
  }
  if (lambda.norm() == 0.0) throw std::invalid_argument("lambda must be nonzero");
  const double lnorm = rs.norm(lambda);
  std::vector<double> out;
  for (std::size_t p : rs.positive()) {
    const Root& alpha = rs.root(p);
    const double pair = rs.inner(alpha.coords, lambda);
    if (std::abs(pair) <= 1e-12 * rs.norm(alpha.coords) * lnorm) continue;
    const double wa = (w.matrix * alpha.coords).dot(a_coords);
    for (int j = 0; j < alpha.multiplicity; ++j) out.push_back(-pair * wa);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Eigen::MatrixXd exp_k(const Eigen::MatrixXd& y) { return y.exp(); }

}  // namespace cartan
