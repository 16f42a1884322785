#include "properties.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <sstream>

#include "cartan/haar.hpp"
#include "cartan/spherical.hpp"
#include "cartan/stationary_phase.hpp"

namespace cartan::testing {

namespace {

const CartanData& group(const std::string& name)
{
  static std::map<std::string, CartanData> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, realize(GroupSpec::parse(name))).first;
  return it->second;
}

const std::vector<std::string> kAllGroups{"sl:2", "sl:3", "sl:4", "so:2,1", "so:3,1", "so:4,1"};
// Groups whose K is SO(2) or SO(3), where the product rules apply.
const std::vector<std::string> kQuadratureGroups{"sl:2", "sl:3", "so:2,1", "so:3,1"};

void record(PropertyOutcome& out, double discrepancy, bool failed, const std::string& what)
{
  ++out.cases;
  out.worst = std::max(out.worst, discrepancy);
  if (failed) {
    if (out.failures == 0) out.first_failure = what;
    ++out.failures;
  }
}

std::string describe(const std::string& g, const Eigen::VectorXd& lambda, const Eigen::VectorXd& a,
                     double t = 1.0)
{
  std::ostringstream os;
  os << g << " lambda=[" << lambda.transpose() << "] a=[" << a.transpose() << "] t=" << t;
  return os.str();
}

double uniform(std::mt19937_64& rng, double lo, double hi)
{
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double uniform_scale(std::mt19937_64& rng) { return uniform(rng, 0.5, 2.0); }

// lambda whose root pairings are either zero or at least 5% of |alpha| |lambda|, so that the
// sign of every Hessian eigenvalue is visible above finite-difference noise.
Eigen::VectorXd separated_lambda(const CartanData& cd, std::mt19937_64& rng)
{
  const RootSystem& rs = cd.roots();
  for (;;) {
    const Eigen::VectorXd lambda = random_lambda(cd, rng, uniform_scale(rng));
    bool ok = true;
    for (std::size_t p : rs.positive()) {
      const double pair = std::abs(rs.inner(rs.root(p).coords, lambda));
      const double scale = rs.norm(rs.root(p).coords) * rs.norm(lambda);
      if (pair > 1e-12 * scale && pair < 0.05 * scale) ok = false;
    }
    if (ok) return lambda;
  }
}

}  // namespace

Eigen::MatrixXd random_p(const CartanData& cd, std::mt19937_64& rng, double scale)
{
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(cd.a_basis().front().rows(),
                                            cd.a_basis().front().cols());
  for (const auto& b : cd.a_basis()) x += normal(rng) * b;
  for (const auto& space : cd.root_spaces()) {
    for (const auto& b : space.p_basis) x += normal(rng) * b;
  }
  return x;
}

Eigen::VectorXd random_regular_a(const CartanData& cd, std::mt19937_64& rng, double scale,
                                 double margin)
{
  std::normal_distribution<double> normal(0.0, 1.0);
  const RootSystem& rs = cd.roots();
  for (;;) {
    Eigen::VectorXd a(rs.rank());
    for (int i = 0; i < rs.rank(); ++i) a[i] = normal(rng);
    if (rs.rank() == 1) a[0] = std::abs(a[0]);
    const double norm = a.norm();
    if (norm < 1e-3) continue;
    bool inside = true;
    for (std::size_t s : rs.simple()) {
      if (cd.root_value(s, a) <= margin * norm) inside = false;
    }
    if (inside) return scale * a / norm;
  }
}

Eigen::VectorXd random_lambda(const CartanData& cd, std::mt19937_64& rng, double scale)
{
  const RootSystem& rs = cd.roots();
  if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
    const int i = std::uniform_int_distribution<int>(0, rs.rank() - 1)(rng);
    const Eigen::VectorXd w = fundamental_weight(rs, i);
    return scale * w / w.norm();
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd lambda(rs.rank());
  do {
    for (int i = 0; i < rs.rank(); ++i) lambda[i] = normal(rng);
  } while (lambda.norm() < 1e-3);
  return scale * lambda / lambda.norm();
}

Eigen::MatrixXd finite_difference_hessian(const CartanData& cd, const Eigen::VectorXd& a,
                                          const Eigen::VectorXd& lambda, const Eigen::MatrixXd& k_w,
                                          double step)
{
  const auto& basis = cd.k_basis();
  const int dim = static_cast<int>(basis.size());
  auto f = [&](const Eigen::VectorXd& y) {
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(k_w.rows(), k_w.cols());
    for (int i = 0; i < dim; ++i) gen += y[i] * basis[i];
    return phase_function(cd, a, lambda, k_w * exp_k(gen));
  };
  Eigen::MatrixXd hess(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      const Eigen::VectorXd ei = Eigen::VectorXd::Unit(dim, i) * step;
      const Eigen::VectorXd ej = Eigen::VectorXd::Unit(dim, j) * step;
      const double v = (f(ei + ej) - f(ei - ej) - f(ej - ei) + f(-ei - ej)) / (4.0 * step * step);
      hess(i, j) = hess(j, i) = v;
    }
  }
  return hess;
}

PropertyOutcome kak_property(std::uint64_t seed, int cases)
{
  PropertyOutcome out{"KAK reconstruction/uniqueness/invariance"};
  std::mt19937_64 rng(seed);
  for (int c = 0; c < cases; ++c) {
    const std::string& name = kAllGroups[c % kAllGroups.size()];
    const CartanData& cd = group(name);
    HaarSampler sampler(cd.k_size(), HaarSampler::child_seed(seed, c));
    const Eigen::MatrixXd x = random_p(cd, rng, uniform(rng, 0.1, 3.0));
    const Eigen::MatrixXd k0 = sampler.next();
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());

    const KakResult r = kak_project(cd, {x, cd.identity().k});
    double gap = (cd.ad(r.k1, r.a) - x).cwiseAbs().maxCoeff() / scale;
    const int n = cd.k_size();
    gap = std::max(gap, (r.k1.transpose() * r.k1 - Eigen::MatrixXd::Identity(n, n))
                            .cwiseAbs()
                            .maxCoeff());
    gap = std::max(gap, std::abs(r.k1.determinant() - 1.0));
    gap = std::max(gap, (cd.a_element(r.a_coords) - r.a).cwiseAbs().maxCoeff() / scale);
    for (std::size_t p : cd.roots().positive()) {
      gap = std::max(gap, -cd.root_value(p, r.a_coords) / scale);
    }
    // Moving x along its K-orbit, or changing the K component, leaves a unchanged.
    const KakResult moved = kak_project(cd, {cd.ad(k0, x), k0});
    gap = std::max(gap, (moved.a_coords - r.a_coords).cwiseAbs().maxCoeff() / scale);
    record(out, gap, !(gap <= 1e-9), name);
  }
  return out;
}

PropertyOutcome haar_property(std::uint64_t seed, int cases)
{
  PropertyOutcome out{"Haar normalization and translation invariance"};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  IntegrateOptions opts;
  opts.method = Method::Quadrature;
  opts.resolution = 24;
  for (int c = 0; c < cases; ++c) {
    const int n = 2 + c % 2;
    HaarSampler sampler(n, HaarSampler::child_seed(seed, c));
    const Eigen::MatrixXd k0 = sampler.next();
    const Eigen::MatrixXd A = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return normal(rng); }) *
                              uniform(rng, 0.1, 0.8);
    auto f = [&](const Eigen::MatrixXd& k) {
      return std::exp(std::complex<double>(0.0, (A * k).trace()));
    };
    const IntegralResult base = integrate(f, n, opts);
    const IntegralResult left =
        integrate([&](const Eigen::MatrixXd& k) { return f(k0 * k); }, n, opts);
    const IntegralResult right =
        integrate([&](const Eigen::MatrixXd& k) { return f(k * k0); }, n, opts);
    const IntegralResult one =
        integrate([](const Eigen::MatrixXd&) { return std::complex<double>(1.0); }, n, opts);
    const IntegralResult second =
        integrate([](const Eigen::MatrixXd& k) { return std::complex<double>(k(0, 0) * k(0, 0)); },
                  n, opts);
    double gap = std::max(std::abs(left.value - base.value), std::abs(right.value - base.value));
    gap = std::max(gap, std::abs(one.value - 1.0));
    gap = std::max(gap, std::abs(second.value - 1.0 / n));

    // Sampled moment: E[k_11^2] = 1/n within five standard errors.
    const int draws = 2000;
    double mean = 0.0, sq = 0.0;
    for (int s = 0; s < draws; ++s) {
      const double v = std::pow(sampler.next()(0, 0), 2);
      mean += v / draws;
      sq += v * v / draws;
    }
    const double se = std::sqrt(std::max(sq - mean * mean, 0.0) / draws);
    const bool moment_ok = std::abs(mean - 1.0 / n) <= 5.0 * se;
    std::ostringstream what;
    what << "SO(" << n << ") gap " << gap << " sampled moment " << mean;
    record(out, gap, !(gap <= 1e-9) || !moment_ok, what.str());
  }
  return out;
}

PropertyOutcome modulus_property(std::uint64_t seed, int cases)
{
  PropertyOutcome out{"|phi| <= 1 + err"};
  std::mt19937_64 rng(seed);
  for (int c = 0; c < cases; ++c) {
    const std::string& name = kQuadratureGroups[c % kQuadratureGroups.size()];
    const CartanData& cd = group(name);
    const Eigen::VectorXd lambda = random_lambda(cd, rng, uniform(rng, 0.2, 3.0));
    const Eigen::VectorXd a = random_regular_a(cd, rng, uniform(rng, 0.2, 3.0));
    const double t = uniform(rng, 0.1, 3.0);
    const IntegralResult r = spherical_value(cd, {lambda, t, a, {}, {}});
    const double excess = std::abs(r.value) - 1.0 - r.error;
    record(out, std::max(excess, 0.0), !(excess <= 1e-12) || r.flagged,
           describe(name, lambda, a, t));
  }
  return out;
}

PropertyOutcome invariance_property(std::uint64_t seed, int cases)
{
  PropertyOutcome out{"Weyl and K invariance of phi"};
  std::mt19937_64 rng(seed);
  IntegrateOptions generic;
  generic.method = Method::Quadrature;
  generic.resolution = 40;
  for (int c = 0; c < cases; ++c) {
    const std::string& name = kQuadratureGroups[c % kQuadratureGroups.size()];
    const CartanData& cd = group(name);
    const RootSystem& rs = cd.roots();
    const Eigen::VectorXd lambda = random_lambda(cd, rng, uniform(rng, 0.2, 2.0));
    const Eigen::VectorXd a = random_regular_a(cd, rng, uniform(rng, 0.2, 2.0));
    const auto& weyl = rs.weyl_group();
    const WeylElement& w =
        weyl[std::uniform_int_distribution<std::size_t>(0, weyl.size() - 1)(rng)];

    const IntegralResult base = spherical_value(cd, {lambda, 1.0, a, {}, {}});
    const IntegralResult moved_lambda = spherical_value(cd, {w.matrix * lambda, 1.0, a, {}, {}});
    const IntegralResult moved_a = spherical_value(cd, {lambda, 1.0, w.matrix * a, {}, {}});

    // Direct integral at Ad(k0) a, with no reduction to the chamber.
    HaarSampler sampler(cd.k_size(), HaarSampler::child_seed(seed, c));
    const Eigen::MatrixXd k0 = sampler.next();
    const Eigen::MatrixXd x = cd.ad(k0, cd.a_element(a));
    const Eigen::MatrixXd h = cd.a_element(cd.h_lambda(lambda));
    const IntegralResult direct = integrate(
        [&](const Eigen::MatrixXd& k) {
          return std::exp(std::complex<double>(0.0, cd.inner_p(x, cd.ad(k, h))));
        },
        cd.k_size(), generic);

    const double weyl_gap = std::max(std::abs(moved_lambda.value - base.value) -
                                         moved_lambda.error - base.error,
                                     std::abs(moved_a.value - base.value) - moved_a.error -
                                         base.error);
    const double k_gap = std::abs(direct.value - base.value) - direct.error - base.error;
    const double gap = std::max({weyl_gap, k_gap, 0.0});
    record(out, gap, !(gap <= 1e-10), describe(name, lambda, a));
  }
  return out;
}

PropertyOutcome scaling_property(std::uint64_t seed, int cases)
{
  PropertyOutcome out{"scaling identity"};
  std::mt19937_64 rng(seed);
  for (int c = 0; c < cases; ++c) {
    const std::string& name = kQuadratureGroups[c % kQuadratureGroups.size()];
    const CartanData& cd = group(name);
    const Eigen::VectorXd lambda = random_lambda(cd, rng, uniform(rng, 0.2, 2.0));
    const Eigen::VectorXd a = random_regular_a(cd, rng, uniform(rng, 0.2, 2.0));
    const double t = uniform(rng, 0.5, 8.0);
    const ScalingCheck s = scaling_identity_check(cd, lambda, a, t);
    const double gap = std::abs(s.at_scale.value - s.scaled_lambda.value);
    record(out, gap, !s.agrees, describe(name, lambda, a, t));
  }
  return out;
}

PropertyOutcome hessian_property(std::uint64_t seed, int cases)
{
  PropertyOutcome out{"Hessian spectrum vs finite differences"};
  std::mt19937_64 rng(seed);
  for (int c = 0; c < cases; ++c) {
    const std::string& name = kAllGroups[c % kAllGroups.size()];
    const CartanData& cd = group(name);
    const RootSystem& rs = cd.roots();
    const Eigen::VectorXd lambda = separated_lambda(cd, rng);
    const Eigen::VectorXd a = random_regular_a(cd, rng, uniform_scale(rng));
    const auto& weyl = rs.weyl_group();
    const WeylElement& w =
        weyl[std::uniform_int_distribution<std::size_t>(0, weyl.size() - 1)(rng)];

    const Eigen::MatrixXd hess =
        finite_difference_hessian(cd, a, lambda, cd.weyl_representative(w));
    Eigen::VectorXd numeric = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(hess).eigenvalues();
    std::vector<double> model = hessian_spectrum(cd, a, lambda, w);
    model.resize(numeric.size(), 0.0);  // directions inside K_lambda are flat
    std::sort(model.begin(), model.end());
    double gap = 0.0;
    for (Eigen::Index i = 0; i < numeric.size(); ++i) {
      gap = std::max(gap, std::abs(numeric[i] - model[i]));
    }
    record(out, gap, !(gap <= 1e-4), describe(name, lambda, a));
  }
  return out;
}

PropertyOutcome sigma_property(std::uint64_t seed, int cases)
{
  PropertyOutcome out{"sigma_w vs Hessian signature"};
  std::mt19937_64 rng(seed);
  for (int c = 0; c < cases; ++c) {
    const std::string& name = kAllGroups[c % kAllGroups.size()];
    const CartanData& cd = group(name);
    const RootSystem& rs = cd.roots();
    const Eigen::VectorXd lambda = separated_lambda(cd, rng);
    const Eigen::VectorXd a = random_regular_a(cd, rng, uniform_scale(rng));
    for (const WeylElement& w : rs.weyl_group()) {
      const Eigen::MatrixXd hess =
          finite_difference_hessian(cd, a, lambda, cd.weyl_representative(w));
      const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(hess).eigenvalues();
      // Flat directions come out at O(step^2) ~ 1e-6. The cutoff sits at half the smallest
      // nonzero eigenvalue the root formula predicts, which can be a few 1e-4 near walls.
      double smallest = INFINITY;
      for (double v : hessian_spectrum(cd, a, lambda, w)) {
        if (std::abs(v) > 1e-12) smallest = std::min(smallest, std::abs(v));
      }
      const double cutoff = std::max(1e-5, 0.5 * std::min(smallest, 2e-3));
      int signature = 0;
      for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev[i] > cutoff) ++signature;
        if (ev[i] < -cutoff) --signature;
      }
      const int s = sigma(rs, lambda, w, a);
      record(out, std::abs(s - signature), s != signature, describe(name, lambda, a));
    }
  }
  return out;
}

}  // namespace cartan::testing
