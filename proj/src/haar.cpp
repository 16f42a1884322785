#include "cartan/haar.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <boost/math/special_functions/bessel.hpp>

namespace cartan {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Accum {
  cplx sum{0.0, 0.0};
  double abs_sum = 0.0;
};

// Neumaier summation, used where long node lists would otherwise drift by n * eps.
struct CompensatedSum {
  double re = 0.0, im = 0.0, c_re = 0.0, c_im = 0.0;

  static void step(double& s, double& c, double v)
  {
    const double t = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  void add(cplx v)
  {
    step(re, c_re, v.real());
    step(im, c_im, v.imag());
  }
  [[nodiscard]] cplx value() const { return {re + c_re, im + c_im}; }
};

/// Runs fn(begin, end) over [0, count) split into contiguous blocks and adds the partial
/// results in block order, so the answer does not depend on the thread count.
template <class Fn>
Accum blocked_sum(std::size_t count, unsigned threads, Fn fn)
{
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  constexpr std::size_t kBlocks = 64;
  const std::size_t blocks = std::min<std::size_t>(kBlocks, std::max<std::size_t>(count, 1));
  std::vector<Accum> partial(blocks);
  auto run_block = [&](std::size_t b) {
    const std::size_t lo = count * b / blocks;
    const std::size_t hi = count * (b + 1) / blocks;
    partial[b] = fn(lo, hi);
  };
  if (threads == 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t b = w; b < blocks; b += threads) run_block(b);
      });
    }
    for (auto& th : pool) th.join();
  }
  Accum total;
  for (const auto& p : partial) {
    total.sum += p.sum;
    total.abs_sum += p.abs_sum;
  }
  return total;
}

double rounding_floor(const Accum& a, std::size_t nodes)
{
  return 4.0 * kEps * std::sqrt(static_cast<double>(std::max<std::size_t>(nodes, 1))) * a.abs_sum;
}

Eigen::Matrix2d rot2(double psi)
{
  Eigen::Matrix2d r;
  const double c = std::cos(psi), s = std::sin(psi);
  r << c, -s, s, c;
  return r;
}

Eigen::Matrix3d rz(double a)
{
  Eigen::Matrix3d r;
  const double c = std::cos(a), s = std::sin(a);
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  return r;
}

Eigen::Matrix3d ry(double b)
{
  Eigen::Matrix3d r;
  const double c = std::cos(b), s = std::sin(b);
  r << c, 0, s, 0, 1, 0, -s, 0, c;
  return r;
}

// Cyclic permutation sending e3 to e_j.
Eigen::Matrix3d cyclic_to(int j)
{
  Eigen::Matrix3d c = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i) c((i + j + 1) % 3, i) = 1.0;
  return c;
}

bool right_invariant(const EntryKernel& kern, int j)
{
  const double scale = std::max(kern.coeff.cwiseAbs().maxCoeff(), 1e-300);
  for (int l = 0; l < kern.coeff.cols(); ++l) {
    if (l == j) continue;
    if (kern.power == 1) {
      if (kern.coeff.col(l).cwiseAbs().maxCoeff() > 1e-13 * scale) return false;
    } else {
      const int other = (j == 0) ? 1 : 0;
      if ((kern.coeff.col(l) - kern.coeff.col(other)).cwiseAbs().maxCoeff() > 1e-13 * scale) {
        return false;
      }
    }
  }
  return true;
}

// Kernel on k = Rz(alpha) B written as u0 + u1 cos(p alpha) + u2 sin(p alpha).
std::array<double, 3> alpha_fourier(const EntryKernel& kern, const Eigen::Matrix3d& b)
{
  const auto& c = kern.coeff;
  double u0 = 0, u1 = 0, u2 = 0;
  if (kern.power == 1) {
    for (int j = 0; j < 3; ++j) {
      u0 += c(2, j) * b(2, j);
      u1 += c(0, j) * b(0, j) + c(1, j) * b(1, j);
      u2 += c(1, j) * b(0, j) - c(0, j) * b(1, j);
    }
  } else {
    for (int j = 0; j < 3; ++j) {
      const double b0 = b(0, j) * b(0, j), b1 = b(1, j) * b(1, j);
      u0 += 0.5 * (c(0, j) + c(1, j)) * (b0 + b1) + c(2, j) * b(2, j) * b(2, j);
      u1 += 0.5 * (c(0, j) - c(1, j)) * (b0 - b1);
      u2 += (c(1, j) - c(0, j)) * b(0, j) * b(1, j);
    }
  }
  return {u0, u1, u2};
}

// Double-precision evaluation throughout; promoting to long double triples the cost.
using BesselPolicy = boost::math::policies::policy<boost::math::policies::promote_double<false>>;

double bessel_j(int m, double z)
{
  if (z == 0.0) return m == 0 ? 1.0 : 0.0;
  return boost::math::cyl_bessel_j(m, z, BesselPolicy());
}

struct So3Plan {
  int gamma_count = 1;
  int beta_count = 1;
  Eigen::Matrix3d right = Eigen::Matrix3d::Identity();
};

Accum so3_sum(const OscillatoryIntegrand& in, const So3Plan& plan, unsigned threads)
{
  const auto& gl = gauss_legendre(plan.beta_count);
  const int s = static_cast<int>(in.amplitudes.size());
  std::vector<double> beta(plan.beta_count);
  for (int b = 0; b < plan.beta_count; ++b) beta[b] = std::acos(std::clamp(gl.first[b], -1.0, 1.0));
  std::vector<Eigen::Matrix3d> ry_table(plan.beta_count);
  for (int b = 0; b < plan.beta_count; ++b) ry_table[b] = ry(beta[b]);

  const double wg = 1.0 / plan.gamma_count;
  return blocked_sum(static_cast<std::size_t>(plan.gamma_count), threads,
                     [&](std::size_t lo, std::size_t hi) {
    Accum acc;
    std::vector<cplx> poly(2 * s + 1), next(2 * s + 1);
    std::vector<double> jm(s + 1);
    for (std::size_t g = lo; g < hi; ++g) {
      const Eigen::Matrix3d tail = rz(2.0 * kPi * static_cast<double>(g) / plan.gamma_count) * plan.right;
      for (int b = 0; b < plan.beta_count; ++b) {
        const Eigen::Matrix3d bm = ry_table[b] * tail;
        const auto u = alpha_fourier(in.phase, bm);
        double rho = in.t * std::hypot(u[1], u[2]);
        double theta = s > 0 ? std::atan2(u[2], u[1]) : 0.0;
        if (rho < 0) {
          rho = -rho;
          theta += kPi;
        }
        // Amplitude product as a trigonometric polynomial in p*alpha.
        std::fill(poly.begin(), poly.end(), cplx(0.0));
        poly[s] = 1.0;
        int deg = 0;
        for (const auto& amp : in.amplitudes) {
          const auto g3 = alpha_fourier(amp, bm);
          const cplx up = 0.5 * cplx(g3[1], -g3[2]);
          const cplx dn = 0.5 * cplx(g3[1], g3[2]);
          std::fill(next.begin(), next.end(), cplx(0.0));
          for (int m = -deg; m <= deg; ++m) {
            const cplx v = poly[m + s];
            if (v == cplx(0.0)) continue;
            next[m + s] += v * g3[0];
            next[m + 1 + s] += v * up;
            next[m - 1 + s] += v * dn;
          }
          ++deg;
          poly.swap(next);
        }
        for (int m = 0; m <= deg; ++m) jm[m] = bessel_j(m, rho);
        cplx inner(0.0);
        for (int m = -deg; m <= deg; ++m) {
          const cplx bm_coef = poly[m + s];
          if (bm_coef == cplx(0.0)) continue;
          const int am = std::abs(m);
          // i^{|m|} J_{|m|}(rho) e^{i m theta}
          static const std::array<cplx, 4> ipow{cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
          inner += bm_coef * ipow[am % 4] * jm[am] * std::polar(1.0, m * theta);
        }
        const cplx val = std::polar(1.0, in.t * u[0]) * inner;
        const double w = wg * 0.5 * gl.second[b];
        acc.sum += w * val;
        acc.abs_sum += w * std::abs(val);
      }
    }
    return acc;
  });
}

std::complex<double> amplitude_product(const std::vector<EntryKernel>& amps,
                                       const Eigen::MatrixXd& k)
{
  double prod = 1.0;
  for (const auto& a : amps) prod *= a(k);
  return prod;
}

}  // namespace

std::vector<int> axis_counts(int n, int resolution)
{
  if (resolution < 4) throw std::invalid_argument("quadrature resolution must be at least 4");
  if (n == 2) return {resolution};
  if (n == 3) return {resolution, resolution / 2 + 1, resolution};
  throw std::invalid_argument("product quadrature exists only for SO(2) and SO(3)");
}

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int count)
{
  static std::mutex mu;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  if (count < 1) throw std::invalid_argument("Gauss-Legendre needs at least one node");
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(count);
  if (it != cache.end()) return it->second;

  std::vector<double> x(count), w(count);
  const int half = (count + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= count; ++k) {
        const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (count == 1) {
        p1 = z;
        p0 = 1.0;
      }
      dp = count * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= count; ++k) {
      const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = (count == 1) ? 1.0 : count * (z * p1 - p0) / (z * z - 1.0);
    x[i] = -z;
    x[count - 1 - i] = z;
    w[i] = w[count - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (count % 2 == 1) x[count / 2] = 0.0;
  return cache.emplace(count, std::make_pair(std::move(x), std::move(w))).first->second;
}

QuadratureRule build_rule(int n, int resolution)
{
  QuadratureRule rule;
  rule.n = n;
  rule.axis_counts = axis_counts(n, resolution);
  if (n == 2) {
    for (int j = 0; j < resolution; ++j) {
      rule.nodes.emplace_back(rot2(2.0 * kPi * j / resolution));
      rule.weights.push_back(1.0 / resolution);
    }
    return rule;
  }
  const int na = rule.axis_counts[0], nb = rule.axis_counts[1], ng = rule.axis_counts[2];
  const auto& gl = gauss_legendre(nb);
  rule.nodes.reserve(static_cast<std::size_t>(na) * nb * ng);
  for (int a = 0; a < na; ++a) {
    const Eigen::Matrix3d ra = rz(2.0 * kPi * a / na);
    for (int b = 0; b < nb; ++b) {
      const Eigen::Matrix3d rab = ra * ry(std::acos(gl.first[b]));
      for (int g = 0; g < ng; ++g) {
        rule.nodes.emplace_back(rab * rz(2.0 * kPi * g / ng));
        rule.weights.push_back(0.5 * gl.second[b] / (static_cast<double>(na) * ng));
      }
    }
  }
  return rule;
}

HaarSampler::HaarSampler(int n, std::uint64_t seed) : n_(n), seed_(seed), engine_(seed)
{
  if (n < 2) throw std::invalid_argument("Haar sampler needs n >= 2");
}

Eigen::MatrixXd HaarSampler::next()
{
  Eigen::MatrixXd g(n_, n_);
  for (int j = 0; j < n_; ++j) {
    for (int i = 0; i < n_; ++i) g(i, j) = normal_(engine_);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n_; ++i) {
    if (r(i, i) < 0) q.col(i) *= -1.0;
  }
  if (q.determinant() < 0) q.col(0) *= -1.0;
  ++counter_;
  return q;
}

std::uint64_t HaarSampler::child_seed(std::uint64_t seed, std::uint64_t index)
{
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<Eigen::MatrixXd> sample(HaarSampler& sampler, std::size_t count)
{
  if (count < 1) throw std::invalid_argument("sample count must be positive");
  std::vector<Eigen::MatrixXd> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sampler.next());
  return out;
}

IntegralResult integrate(const KFunction& f, const QuadratureRule& rule,
                         const QuadratureRule& coarse)
{
  auto sum = [&](const QuadratureRule& r) {
    Accum a;
    CompensatedSum total;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      const cplx v = f(r.nodes[i]);
      total.add(r.weights[i] * v);
      a.abs_sum += r.weights[i] * std::abs(v);
    }
    a.sum = total.value();
    return a;
  };
  const Accum fine = sum(rule);
  const Accum rough = sum(coarse);
  IntegralResult out;
  out.value = fine.sum;
  out.error = std::abs(fine.sum - rough.sum) + rounding_floor(fine, rule.nodes.size());
  out.evaluations = rule.nodes.size() + coarse.nodes.size();
  return out;
}

IntegralResult integrate(const KFunction& f, HaarSampler& sampler, std::size_t count)
{
  if (count < 2) throw std::invalid_argument("Monte Carlo needs at least two samples");
  cplx mean(0.0);
  double m2 = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const cplx v = f(sampler.next());
    const cplx delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += std::real(std::conj(delta) * (v - mean));
  }
  IntegralResult out;
  out.value = mean;
  out.error = std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count));
  out.evaluations = count;
  return out;
}

IntegralResult integrate(const KFunction& f, int n, const IntegrateOptions& opts)
{
  const bool quad = opts.method == Method::Quadrature ||
                    (opts.method == Method::Auto && (n == 2 || n == 3));
  IntegralResult out;
  if (quad) {
    const int r = opts.resolution > 0 ? opts.resolution : 32;
    const int half = std::max(4, (r / 2) & ~1);
    const auto counts = axis_counts(n, r);
    std::size_t nodes = 1;
    for (int c : counts) nodes *= static_cast<std::size_t>(c);
    if (nodes > opts.budget) {
      throw std::invalid_argument("quadrature rule exceeds the evaluation budget");
    }
    out = integrate(f, build_rule(n, r), build_rule(n, half));
  } else {
    HaarSampler sampler(n, opts.seed);
    const std::size_t count = std::min(opts.samples, opts.budget);
    out = integrate(f, sampler, count);
    out.flagged = count < opts.samples;
  }
  if (opts.tolerance > 0 && out.error > opts.tolerance) {
    out.flagged = true;
    out.note = "error estimate above tolerance";
  }
  return out;
}

std::complex<double> OscillatoryIntegrand::operator()(const Eigen::MatrixXd& k) const
{
  return amplitude_product(amplitudes, k) * std::polar(1.0, t * phase(k));
}

int auto_resolution(const OscillatoryIntegrand& in, int nodes_per_period)
{
  const double omega = std::abs(in.t) * in.phase_half_range;
  const int d = in.phase.power;
  const int s = static_cast<int>(in.amplitudes.size());
  const double raw = std::ceil(nodes_per_period * d * omega * 2.0 / kPi) + s * d + 16;
  const int n = std::max(8, static_cast<int>(std::min(raw, 1e8)));
  // Round up to a geometric ladder (ratio 2^{1/8}) so that nearby scales share cached
  // Gauss-Legendre rules.
  // A kernel of power d only carries Fourier modes divisible by d along each circle, so the
  // count is also a multiple of 2d; otherwise the half rule aliases onto the same mode as the
  // full one and the difference no longer measures the error.
  const int multiple = 2 * std::max(1, d);
  for (int k = 0;; ++k) {
    int step = static_cast<int>(std::ceil(8.0 * std::exp2(k / 8.0)));
    step += (multiple - step % multiple) % multiple;
    if (step >= n) return step;
  }
}

IntegralResult integrate_oscillatory(const OscillatoryIntegrand& in, const IntegrateOptions& opts)
{
  for (const auto& kern : in.amplitudes) {
    if (kern.coeff.rows() != in.n || kern.coeff.cols() != in.n) {
      throw std::invalid_argument("amplitude kernel has the wrong size");
    }
  }
  if (in.phase.coeff.rows() != in.n || in.phase.coeff.cols() != in.n) {
    throw std::invalid_argument("phase kernel has the wrong size");
  }
  const bool quad = opts.method == Method::Quadrature ||
                    (opts.method == Method::Auto && (in.n == 2 || in.n == 3));
  if (!quad) {
    KFunction f = [&](const Eigen::MatrixXd& k) { return in(k); };
    return integrate(f, in.n, IntegrateOptions{opts});
  }
  if (in.n != 2 && in.n != 3) {
    throw std::invalid_argument("quadrature exists only for SO(2) and SO(3)");
  }

  int r = opts.resolution > 0 ? opts.resolution : auto_resolution(in, opts.nodes_per_period);
  r = std::max(8, r + (r % 2));
  IntegralResult out;

  if (in.n == 2) {
    if (static_cast<std::size_t>(r) > opts.budget) {
      r = std::max<int>(8, static_cast<int>(opts.budget) & ~1);
      out.flagged = true;
      out.note = "evaluation budget exhausted";
    }
    // The coarse rule uses every other node of the fine one.
    std::vector<cplx> vals(r);
    const Accum fine = blocked_sum(static_cast<std::size_t>(r), opts.threads,
                                   [&](std::size_t lo, std::size_t hi) {
      Accum a;
      for (std::size_t j = lo; j < hi; ++j) {
        vals[j] = in(rot2(2.0 * kPi * static_cast<double>(j) / r));
        a.sum += vals[j] / static_cast<double>(r);
        a.abs_sum += std::abs(vals[j]) / r;
      }
      return a;
    });
    cplx coarse(0.0);
    for (int j = 0; j < r; j += 2) coarse += vals[j];
    coarse *= 2.0 / r;
    out.value = fine.sum;
    out.error = std::abs(fine.sum - coarse) + rounding_floor(fine, r);
    out.evaluations = r;
  } else {
    So3Plan plan;
    for (int j = 0; j < 3; ++j) {
      bool ok = right_invariant(in.phase, j);
      for (const auto& a : in.amplitudes) ok = ok && right_invariant(a, j);
      if (ok) {
        plan.gamma_count = 1;
        plan.right = cyclic_to(j).transpose();
        break;
      }
      plan.gamma_count = 0;
    }
    const bool reduced = plan.gamma_count == 1;
    auto make = [&](int res) {
      So3Plan p = plan;
      const auto c = axis_counts(3, res);
      p.beta_count = c[1];
      p.gamma_count = reduced ? 1 : c[2];
      return p;
    };
    So3Plan fine_plan = make(r);
    const auto cost = [](const So3Plan& p) {
      return static_cast<std::size_t>(p.beta_count) * static_cast<std::size_t>(p.gamma_count);
    };
    while (cost(fine_plan) + cost(make(std::max(8, r / 2))) > opts.budget && r > 8) {
      r = std::max(8, (r * 3 / 4) & ~1);
      fine_plan = make(r);
      out.flagged = true;
      out.note = "evaluation budget exhausted";
    }
    const So3Plan coarse_plan = make(std::max(4, (r / 2) & ~1));
    const Accum fine = so3_sum(in, fine_plan, opts.threads);
    const Accum rough = so3_sum(in, coarse_plan, opts.threads);
    out.value = fine.sum;
    out.error = std::abs(fine.sum - rough.sum) + rounding_floor(fine, cost(fine_plan));
    out.evaluations = cost(fine_plan) + cost(coarse_plan);
  }
  if (opts.tolerance > 0 && out.error > opts.tolerance) {
    out.flagged = true;
    if (out.note.empty()) out.note = "error estimate above tolerance";
  }
  return out;
}

}  // namespace cartan
