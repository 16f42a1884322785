#include "cartan/stationary_phase.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cartan/spherical.hpp"

namespace cartan {

namespace {

constexpr double kPi = std::numbers::pi;

double sphere_volume(int dim)  // Vol(S^dim) of the unit sphere
{
  return 2.0 * std::pow(kPi, 0.5 * (dim + 1)) / std::tgamma(0.5 * (dim + 1));
}

void require_nonzero(const RootSystem& rs, const Eigen::VectorXd& lambda)
{
  if (lambda.size() != rs.rank()) throw std::invalid_argument("lambda dimension mismatch");
  if (n_lambda(rs, lambda) == 0) {
    throw std::invalid_argument("lambda must be nonzero");
  }
}

// Length of E_ij - E_ji under -B.
double generator_norm(const CartanData& cd)
{
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(cd.k_size(), cd.k_size());
  z(0, 1) = 1.0;
  z(1, 0) = -1.0;
  return std::sqrt(cd.inner_k(z, z));
}

}  // namespace

int sigma(const RootSystem& rs, const Eigen::VectorXd& lambda, const WeylElement& w,
          const Eigen::VectorXd& a)
{
  require_nonzero(rs, lambda);
  if (a.size() != rs.rank()) throw std::invalid_argument("a dimension mismatch");
  const double lnorm = rs.norm(lambda);
  int out = 0;
  for (std::size_t p : rs.positive()) {
    const Root& alpha = rs.root(p);
    const double pair = rs.inner(alpha.coords, lambda);
    if (std::abs(pair) <= 1e-12 * rs.norm(alpha.coords) * lnorm) continue;
    const double wa = (w.matrix * alpha.coords).dot(a);
    if (std::abs(wa) <= 1e-12 * alpha.coords.norm() * a.norm() || wa == 0.0) {
      throw std::domain_error("a is not regular: a root vanishes on it");
    }
    out -= alpha.multiplicity * ((pair * wa > 0) ? 1 : -1);
  }
  return out;
}

double volume_so(int n, double c)
{
  if (n < 1) throw std::invalid_argument("SO(n) needs n >= 1");
  double vol = 1.0;
  for (int k = 2; k <= n; ++k) vol *= sphere_volume(k - 1);
  return vol * std::pow(c, 0.5 * n * (n - 1));
}

double vol_quotient(const CartanData& cd, const Eigen::VectorXd& lambda)
{
  require_nonzero(cd.roots(), lambda);
  const int n = cd.k_size();
  const double c = generator_norm(cd);
  if (cd.spec().family == GroupFamily::IndefiniteOrthogonal) {
    // K / K_lambda = SO(n) / SO(n-1), the sphere of radius c.
    return std::pow(c, n - 1) * sphere_volume(n - 1);
  }
  // K_lambda = S(O(n_1) x ... x O(n_p)) for the eigenvalue multiplicities of H_lambda.
  Eigen::VectorXd h = cd.a_element(cd.h_lambda(lambda)).diagonal();
  std::sort(h.data(), h.data() + h.size());
  const double tol = 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff());
  std::vector<int> blocks{1};
  for (int i = 1; i < n; ++i) {
    if (h[i] - h[i - 1] <= tol) {
      ++blocks.back();
    } else {
      blocks.push_back(1);
    }
  }
  double stab = std::pow(2.0, static_cast<double>(blocks.size()) - 1.0);
  for (int b : blocks) stab *= volume_so(b, c);
  return volume_so(n, c) / stab;
}

std::complex<double> leading_coefficient(const CartanData& cd, const Eigen::VectorXd& lambda,
                                         const Eigen::VectorXd& a, const WeylElement& w,
                                         const KFunction& g)
{
  const RootSystem& rs = cd.roots();
  const int sig = sigma(rs, lambda, w, a);
  const double lnorm = rs.norm(lambda);
  double amp = 1.0;
  for (std::size_t p : rs.positive()) {
    const Root& alpha = rs.root(p);
    const double pair = rs.inner(alpha.coords, lambda);
    if (std::abs(pair) <= 1e-12 * rs.norm(alpha.coords) * lnorm) continue;
    const double wa = (w.matrix * alpha.coords).dot(a);
    amp *= std::pow(std::abs(pair * wa / (2.0 * kPi)), -0.5 * alpha.multiplicity);
  }
  const std::complex<double> gval = g(cd.weyl_representative(w));
  return std::polar(amp / vol_quotient(cd, lambda), kPi * sig / 4.0) * gval;
}

KFunction product_amplitude(const CartanData& cd, const Eigen::VectorXd& lambda,
                            const std::vector<Eigen::VectorXd>& directions)
{
  std::vector<EntryKernel> kernels;
  const Eigen::VectorXd h = cd.h_lambda(lambda);
  for (const auto& x : directions) kernels.push_back(cd.pairing_kernel(x, h));
  return [kernels](const Eigen::MatrixXd& k) {
    double prod = 1.0;
    for (const auto& kern : kernels) prod *= kern(k);
    return std::complex<double>(prod, 0.0);
  };
}

AsymptoticExpansion build_expansion(const CartanData& cd, const Eigen::VectorXd& lambda,
                                    const Eigen::VectorXd& a, const KFunction& g)
{
  const RootSystem& rs = cd.roots();
  require_nonzero(rs, lambda);
  AsymptoticExpansion exp;
  exp.lambda = lambda;
  exp.a = a;
  exp.n_lambda = n_lambda(rs, lambda);
  exp.exponent = 0.5 * exp.n_lambda;
  const WeylOrbit orbit = weyl_orbit(rs, lambda);
  for (std::size_t i = 0; i < orbit.orbit.size(); ++i) {
    ExpansionTerm term;
    term.w = orbit.coset_reps[i];
    term.k_w = cd.weyl_representative(term.w);
    term.frequency = orbit.orbit[i].dot(a);
    term.sigma = sigma(rs, lambda, term.w, a);
    term.coeff = leading_coefficient(cd, lambda, a, term.w, g);
    exp.terms.push_back(std::move(term));
  }
  return exp;
}

AsymptoticExpansion build_expansion(const CartanData& cd, const Eigen::VectorXd& lambda,
                                    const Eigen::VectorXd& a,
                                    const std::vector<Eigen::VectorXd>& directions)
{
  return build_expansion(cd, lambda, a, product_amplitude(cd, lambda, directions));
}

std::complex<double> normalized_sum(const AsymptoticExpansion& exp, double t)
{
  std::complex<double> sum(0.0);
  for (const auto& term : exp.terms) sum += std::polar(1.0, t * term.frequency) * term.coeff;
  return sum;
}

std::complex<double> leading_sum(const AsymptoticExpansion& exp, double t)
{
  if (!(t > 0)) throw std::invalid_argument("leading_sum needs t > 0");
  return std::pow(t, -exp.exponent) * normalized_sum(exp, t);
}

DecayScan error_decay_scan(const CartanData& cd, const Eigen::VectorXd& lambda,
                           const Eigen::VectorXd& a, const std::vector<double>& t_grid,
                           const std::vector<Eigen::VectorXd>& directions,
                           const IntegrateOptions& opts, double max_ratio)
{
  if (t_grid.empty()) throw std::invalid_argument("empty t grid");
  const AsymptoticExpansion exp = build_expansion(cd, lambda, a, directions);
  DecayScan scan;
  scan.exponent = exp.exponent;
  for (double t : t_grid) {
    if (t < 1.0) throw std::invalid_argument("error_decay_scan needs t >= 1");
    DecayRow row;
    row.t = t;
    const IntegralResult r = oscillatory_integral(cd, lambda, a, t, directions, opts);
    row.exact = r.value;
    row.exact_error = r.error;
    row.flagged = r.flagged;
    row.leading = leading_sum(exp, t);
    const double scale = std::pow(t, exp.exponent + 1.0);
    row.scaled_residual = std::abs(row.exact - row.leading) * scale;
    row.scaled_error = r.error * scale;
    scan.rows.push_back(row);
  }
  const std::size_t half = scan.rows.size() / 2;
  double lo = INFINITY, hi = 0.0;
  scan.within_error = true;
  for (std::size_t i = half; i < scan.rows.size(); ++i) {
    lo = std::min(lo, scan.rows[i].scaled_residual);
    hi = std::max(hi, scan.rows[i].scaled_residual);
    if (scan.rows[i].scaled_residual > 2.0 * scan.rows[i].scaled_error) scan.within_error = false;
  }
  scan.ratio = lo > 0 ? hi / lo : INFINITY;
  scan.bounded = scan.within_error || scan.ratio <= max_ratio;
  return scan;
}

}  // namespace cartan
