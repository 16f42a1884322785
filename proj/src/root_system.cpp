#include "cartan/root_system.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cartan {

namespace {

constexpr double kMatchTol = 1e-9;

bool same_vector(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double scale)
{
  return (x - y).lpNorm<Eigen::Infinity>() <= kMatchTol * std::max(1.0, scale);
}

std::vector<std::size_t> compose(const std::vector<std::size_t>& outer,
                                 const std::vector<std::size_t>& inner)
{
  std::vector<std::size_t> out(inner.size());
  for (std::size_t j = 0; j < inner.size(); ++j) {
    out[j] = outer[inner[j]];
  }
  return out;
}

}  // namespace

RootSystem::RootSystem(const ExplicitRootData& data) : roots_(data.roots), chamber_(data.chamber)
{
  if (roots_.empty()) {
    throw std::invalid_argument("root system needs at least one root");
  }
  rank_ = static_cast<int>(roots_.front().coords.size());
  if (rank_ < 1) {
    throw std::invalid_argument("roots must have at least one coordinate");
  }
  for (const auto& r : roots_) {
    if (r.coords.size() != rank_) {
      throw std::invalid_argument("roots have inconsistent dimensions");
    }
    if (!r.coords.allFinite() || r.coords.norm() == 0.0) {
      throw std::invalid_argument("roots must be finite and nonzero");
    }
    if (r.multiplicity < 1) {
      throw std::invalid_argument("root multiplicities must be positive");
    }
  }
  if (chamber_.size() != rank_ || !chamber_.allFinite()) {
    throw std::invalid_argument("chamber functional has the wrong dimension");
  }

  gram_ = data.gram.value_or(Eigen::MatrixXd::Identity(rank_, rank_));
  if (gram_.rows() != rank_ || gram_.cols() != rank_) {
    throw std::invalid_argument("gram matrix has the wrong shape");
  }
  if ((gram_ - gram_.transpose()).lpNorm<Eigen::Infinity>() > 1e-12 * gram_.norm()) {
    throw std::invalid_argument("gram matrix must be symmetric");
  }
  if (Eigen::LLT<Eigen::MatrixXd>(gram_).info() != Eigen::Success) {
    throw std::invalid_argument("gram matrix must be positive definite");
  }

  double scale = 0.0;
  for (const auto& r : roots_) scale = std::max(scale, r.coords.lpNorm<Eigen::Infinity>());

  for (std::size_t j = 0; j < roots_.size(); ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      if (same_vector(roots_[j].coords, roots_[k].coords, scale)) {
        throw std::invalid_argument("duplicate root " + std::to_string(j));
      }
    }
  }
  for (std::size_t j = 0; j < roots_.size(); ++j) {
    const auto neg = find_root(-roots_[j].coords);
    if (!neg) {
      throw std::invalid_argument("root data is not closed under negation");
    }
    if (roots_[*neg].multiplicity != roots_[j].multiplicity) {
      throw std::invalid_argument("m(-alpha) differs from m(alpha)");
    }
  }

  for (std::size_t j = 0; j < roots_.size(); ++j) {
    const double v = roots_[j].coords.dot(chamber_);
    if (std::abs(v) <= 1e-12 * roots_[j].coords.norm() * chamber_.norm() || v == 0.0) {
      throw std::invalid_argument("chamber functional vanishes on a root");
    }
    if (v > 0) positive_.push_back(j);
  }

  // A positive root is simple when it is not a sum of two positive roots.
  for (std::size_t p : positive_) {
    bool decomposable = false;
    for (std::size_t a = 0; a < positive_.size() && !decomposable; ++a) {
      for (std::size_t b = a; b < positive_.size() && !decomposable; ++b) {
        const Eigen::VectorXd sum = roots_[positive_[a]].coords + roots_[positive_[b]].coords;
        decomposable = same_vector(sum, roots_[p].coords, scale);
      }
    }
    if (!decomposable) simple_.push_back(p);
  }
  if (static_cast<int>(simple_.size()) != rank_) {
    throw std::invalid_argument("roots do not span a* (found " + std::to_string(simple_.size()) +
                                " simple roots for rank " + std::to_string(rank_) + ")");
  }

  Eigen::MatrixXd simple_cols(rank_, rank_);
  for (int i = 0; i < rank_; ++i) simple_cols.col(i) = roots_[simple_[i]].coords;
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(simple_cols);
  for (std::size_t p : positive_) {
    const Eigen::VectorXd c = lu.solve(roots_[p].coords);
    std::vector<int> n(rank_);
    for (int i = 0; i < rank_; ++i) {
      const double r = std::round(c[i]);
      if (std::abs(c[i] - r) > 1e-8 || r < 0) {
        throw std::invalid_argument("positive root is not a nonnegative integer combination of "
                                    "simple roots");
      }
      n[i] = static_cast<int>(r);
    }
    coefficients_.push_back(std::move(n));
  }

  cartan_.assign(rank_, std::vector<int>(rank_));
  reflections_.reserve(rank_);
  for (int i = 0; i < rank_; ++i) {
    const Eigen::VectorXd& ai = roots_[simple_[i]].coords;
    for (int j = 0; j < rank_; ++j) {
      const Eigen::VectorXd& aj = roots_[simple_[j]].coords;
      const double v = 2.0 * inner(ai, aj) / inner(aj, aj);
      cartan_[i][j] = static_cast<int>(std::lround(v));
      if (std::abs(v - cartan_[i][j]) > 1e-8) {
        throw std::invalid_argument("non-integral Cartan number; not a root system");
      }
    }
    const Eigen::VectorXd g_ai = gram_ * ai;
    reflections_.push_back(Eigen::MatrixXd::Identity(rank_, rank_) -
                           2.0 * ai * g_ai.transpose() / ai.dot(g_ai));
  }

  // Root permutations induced by the simple reflections; every image must be a root.
  std::vector<std::vector<std::size_t>> simple_perm(rank_);
  for (int i = 0; i < rank_; ++i) {
    simple_perm[i].resize(roots_.size());
    for (std::size_t j = 0; j < roots_.size(); ++j) {
      const auto img = find_root(reflections_[i] * roots_[j].coords);
      if (!img) {
        throw std::invalid_argument("simple reflection does not preserve the roots");
      }
      if (roots_[*img].multiplicity != roots_[j].multiplicity) {
        throw std::invalid_argument("multiplicities are not Weyl invariant");
      }
      simple_perm[i][j] = *img;
    }
  }

  // Breadth-first closure; elements are identified by the permutation they induce on
  // the roots, which is faithful because the roots span a*.
  std::vector<std::size_t> identity(roots_.size());
  std::iota(identity.begin(), identity.end(), std::size_t{0});
  std::map<std::vector<std::size_t>, std::size_t> seen;
  weyl_.push_back({{}, Eigen::MatrixXd::Identity(rank_, rank_), identity});
  seen.emplace(identity, 0);
  for (std::size_t head = 0; head < weyl_.size(); ++head) {
    for (int i = 0; i < rank_; ++i) {
      auto perm = compose(simple_perm[i], weyl_[head].root_permutation);
      if (seen.count(perm)) continue;
      WeylElement next;
      next.word.reserve(weyl_[head].word.size() + 1);
      next.word.push_back(i);
      next.word.insert(next.word.end(), weyl_[head].word.begin(), weyl_[head].word.end());
      next.matrix = reflections_[i] * weyl_[head].matrix;
      next.root_permutation = perm;
      seen.emplace(std::move(perm), weyl_.size());
      weyl_.push_back(std::move(next));
      if (weyl_.size() > kMaxWeylOrder) {
        throw std::invalid_argument("Weyl group exceeds the supported order");
      }
    }
  }
}

std::optional<std::size_t> RootSystem::find_root(const Eigen::VectorXd& coords) const
{
  if (coords.size() != rank_) return std::nullopt;
  const double scale = coords.lpNorm<Eigen::Infinity>();
  for (std::size_t j = 0; j < roots_.size(); ++j) {
    if (same_vector(roots_[j].coords, coords, scale)) return j;
  }
  return std::nullopt;
}

Eigen::MatrixXd sl_cartan_basis(int n)
{
  if (n < 2) throw std::invalid_argument("sl(n) needs n >= 2");
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n, n - 1);
  for (int k = 1; k < n; ++k) {
    const double norm = std::sqrt(2.0 * n * k * (k + 1.0));
    for (int i = 0; i < k; ++i) basis(i, k - 1) = 1.0 / norm;
    basis(k, k - 1) = -static_cast<double>(k) / norm;
  }
  return basis;
}

RootSystem build_root_system(const GroupSpec& spec)
{
  ExplicitRootData data;
  if (spec.n < 2) throw std::invalid_argument("group size must be at least 2");
  if (spec.family == GroupFamily::SpecialLinear) {
    const int n = spec.n;
    const Eigen::MatrixXd basis = sl_cartan_basis(n);
    std::vector<Root> pos;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        pos.push_back({(basis.row(i) - basis.row(j)).transpose(), 1});
      }
    }
    data.roots = pos;
    for (const auto& r : pos) data.roots.push_back({-r.coords, 1});

    // H0 = diag(n-1, n-3, ..., 1-n), written in the orthonormal basis.
    Eigen::VectorXd h0(n);
    for (int i = 0; i < n; ++i) h0[i] = n - 1 - 2.0 * i;
    data.chamber = 2.0 * n * basis.transpose() * h0;
  } else {
    const double c = 1.0 / std::sqrt(2.0 * (spec.n - 1));
    data.roots = {{Eigen::VectorXd::Constant(1, c), spec.n - 1},
                  {Eigen::VectorXd::Constant(1, -c), spec.n - 1}};
    data.chamber = Eigen::VectorXd::Ones(1);
  }
  return RootSystem(data);
}

RootSystem build_root_system(const ExplicitRootData& data) { return RootSystem(data); }

int n_lambda(const RootSystem& rs, const Eigen::VectorXd& lambda, double tol)
{
  if (lambda.size() != rs.rank()) {
    throw std::invalid_argument("lambda has " + std::to_string(lambda.size()) +
                                " coordinates, expected " + std::to_string(rs.rank()));
  }
  if (!lambda.allFinite()) throw std::invalid_argument("lambda must be finite");
  const double lnorm = rs.norm(lambda);
  int total = 0;
  for (std::size_t p : rs.positive()) {
    const Root& a = rs.root(p);
    const double v = rs.inner(a.coords, lambda);
    if (std::abs(v) > tol * rs.norm(a.coords) * lnorm) total += a.multiplicity;
  }
  return total;
}

int n_lambda_exact(const RootSystem& rs, const std::vector<Rational>& simple_pairings)
{
  if (static_cast<int>(simple_pairings.size()) != rs.rank()) {
    throw std::invalid_argument("expected one pairing per simple root");
  }
  int total = 0;
  for (std::size_t p = 0; p < rs.positive().size(); ++p) {
    const auto& n = rs.simple_coefficients(p);
    Rational v(0);
    for (int i = 0; i < rs.rank(); ++i) v += Rational(n[i]) * simple_pairings[i];
    if (v != Rational(0)) total += rs.root(rs.positive()[p]).multiplicity;
  }
  return total;
}

Rational kappa(const RootSystem& rs)
{
  long long best = std::numeric_limits<long long>::max();
  for (int i = 0; i < rs.rank(); ++i) {
    long long sum = 0;
    for (std::size_t p = 0; p < rs.positive().size(); ++p) {
      if (rs.simple_coefficients(p)[i] >= 1) sum += rs.root(rs.positive()[p]).multiplicity;
    }
    best = std::min(best, sum);
  }
  return Rational(best, 2);
}

Eigen::VectorXd covector_from_pairings(const RootSystem& rs, const Eigen::VectorXd& pairings)
{
  if (pairings.size() != rs.rank()) {
    throw std::invalid_argument("expected one pairing per simple root");
  }
  Eigen::MatrixXd rows(rs.rank(), rs.rank());
  for (int i = 0; i < rs.rank(); ++i) {
    rows.row(i) = (rs.gram() * rs.simple_root(i).coords).transpose();
  }
  return rows.fullPivLu().solve(pairings);
}

Eigen::VectorXd fundamental_weight(const RootSystem& rs, int i)
{
  if (i < 0 || i >= rs.rank()) throw std::invalid_argument("simple root index out of range");
  Eigen::VectorXd p = Eigen::VectorXd::Zero(rs.rank());
  const auto& a = rs.simple_root(i).coords;
  p[i] = 0.5 * rs.inner(a, a);
  return covector_from_pairings(rs, p);
}

WeylOrbit weyl_orbit(const RootSystem& rs, const Eigen::VectorXd& lambda, double tol)
{
  if (lambda.size() != rs.rank()) throw std::invalid_argument("lambda dimension mismatch");
  const double scale = std::max(1.0, lambda.lpNorm<Eigen::Infinity>());
  auto close = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return (x - y).lpNorm<Eigen::Infinity>() <= tol * scale;
  };

  const auto& id = rs.weyl_group().front();
  WeylOrbit out;
  out.orbit.push_back(lambda);
  out.coset_reps.push_back(id);
  for (std::size_t head = 0; head < out.orbit.size(); ++head) {
    for (int i = 0; i < rs.rank(); ++i) {
      Eigen::VectorXd img = rs.simple_reflection(i) * out.orbit[head];
      const bool known = std::any_of(out.orbit.begin(), out.orbit.end(),
                                     [&](const Eigen::VectorXd& v) { return close(v, img); });
      if (known) continue;
      const WeylElement& prev = out.coset_reps[head];
      WeylElement w;
      w.word.push_back(i);
      w.word.insert(w.word.end(), prev.word.begin(), prev.word.end());
      w.matrix = rs.simple_reflection(i) * prev.matrix;
      w.root_permutation.resize(prev.root_permutation.size());
      for (std::size_t j = 0; j < prev.root_permutation.size(); ++j) {
        const auto img_root = rs.find_root(rs.simple_reflection(i) *
                                           rs.root(prev.root_permutation[j]).coords);
        w.root_permutation[j] = img_root.value();
      }
      out.orbit.push_back(std::move(img));
      out.coset_reps.push_back(std::move(w));
    }
  }
  out.stabilizer_order = stabilizer_order(rs, lambda, tol);
  return out;
}

std::size_t stabilizer_order(const RootSystem& rs, const Eigen::VectorXd& lambda, double tol)
{
  const double scale = std::max(1.0, lambda.lpNorm<Eigen::Infinity>());
  std::size_t count = 0;
  for (const auto& w : rs.weyl_group()) {
    if ((w.matrix * lambda - lambda).lpNorm<Eigen::Infinity>() <= tol * scale) ++count;
  }
  return count;
}

}  // namespace cartan
