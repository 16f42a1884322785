#include "cartan/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cartan/spherical.hpp"

namespace cartan {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> distinct_frequencies(const CartanData& cd, const Eigen::VectorXd& lambda,
                                         const Eigen::VectorXd& a)
{
  const WeylOrbit orbit = weyl_orbit(cd.roots(), lambda);
  std::vector<double> nu;
  for (const auto& mu : orbit.orbit) nu.push_back(mu.dot(a));
  std::sort(nu.begin(), nu.end());
  const double scale = std::max(1.0, std::abs(nu.back()) + std::abs(nu.front()));
  std::vector<double> out;
  for (double v : nu) {
    if (out.empty() || v - out.back() > 1e-12 * scale) out.push_back(v);
  }
  return out;
}

// All multi-indices of length `order` into the frame of a.
std::vector<std::vector<Eigen::VectorXd>> frame_tuples(int rank, int order)
{
  std::vector<std::vector<Eigen::VectorXd>> out{{}};
  for (int r = 0; r < order; ++r) {
    std::vector<std::vector<Eigen::VectorXd>> next;
    for (const auto& tuple : out) {
      for (int i = 0; i < rank; ++i) {
        auto extended = tuple;
        extended.push_back(Eigen::VectorXd::Unit(rank, i));
        next.push_back(std::move(extended));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<IntegralResult> differential_values(const CartanData& cd,
                                                const Eigen::VectorXd& lambda, int order,
                                                const Eigen::VectorXd& point, double t,
                                                const IntegrateOptions& opts)
{
  std::vector<IntegralResult> out;
  for (const auto& tuple : frame_tuples(cd.rank(), order)) {
    SphericalQuery q{lambda, t, point, tuple, opts};
    out.push_back(spherical_derivative(cd, q));
  }
  return out;
}

void require_chamber(const CartanData& cd, const Eigen::VectorXd& p, double margin)
{
  for (std::size_t r : cd.roots().simple()) {
    if (!(cd.root_value(r, p) > margin)) {
      throw std::invalid_argument("point is within the wall margin of the chamber");
    }
  }
}

double linear_slope(const std::vector<double>& x, const std::vector<double>& y, double* intercept,
                    double* stderr_out)
{
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxx > 0 ? sxy / sxx : 0.0;
  if (intercept) *intercept = my - slope * mx;
  if (stderr_out) {
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - (my + slope * (x[i] - mx));
      ss += r * r;
    }
    *stderr_out = (x.size() > 2 && sxx > 0) ? std::sqrt(ss / (n - 2.0) / sxx) : 0.0;
  }
  return slope;
}

}  // namespace

double envelope_period(const CartanData& cd, const Eigen::VectorXd& lambda,
                       const Eigen::VectorXd& a)
{
  const auto nu = distinct_frequencies(cd, lambda, a);
  double gap = INFINITY;
  for (std::size_t i = 0; i + 1 < nu.size(); ++i) gap = std::min(gap, nu[i + 1] - nu[i]);
  if (!std::isfinite(gap) || gap <= 0) return 2.0 * kPi;
  return 2.0 * kPi / gap;
}

DecayFit decay_fit(const CartanData& cd, const Eigen::VectorXd& lambda, const Eigen::VectorXd& a,
                   const std::vector<double>& window_starts, const DecayFitOptions& opts)
{
  if (window_starts.size() < 2) throw std::invalid_argument("decay_fit needs two windows");
  if (opts.samples_per_window < 2) throw std::invalid_argument("need two samples per window");
  const double len = opts.window_length > 0 ? opts.window_length : envelope_period(cd, lambda, a);

  DecayFit fit;
  auto eval = [&](double t) {
    SphericalQuery q{lambda, t, a, {}, opts.integrate};
    return spherical_value(cd, q);
  };
  std::vector<double> lx, ly;
  for (double start : window_starts) {
    if (!(start > 0)) throw std::invalid_argument("window starts must be positive");
    const int m = opts.samples_per_window;
    std::vector<double> ts(m), vals(m), errs(m);
    for (int j = 0; j < m; ++j) {
      ts[j] = start + len * j / (m - 1);
      const IntegralResult r = eval(ts[j]);
      vals[j] = std::abs(r.value);
      errs[j] = r.error;
    }
    const int best = static_cast<int>(std::max_element(vals.begin(), vals.end()) - vals.begin());
    DecayWindow win{start, ts[best], vals[best], errs[best]};

    // Golden-section search for the local maximum between the neighbouring samples.
    double lo = ts[std::max(0, best - 1)];
    double hi = ts[std::min(m - 1, best + 1)];
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    IntegralResult fc = eval(c), fd = eval(d);
    for (int it = 0; it < opts.refine_iterations; ++it) {
      if (std::abs(fc.value) > std::abs(fd.value)) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - g * (hi - lo);
        fc = eval(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + g * (hi - lo);
        fd = eval(d);
      }
    }
    for (const auto& [t, r] : {std::pair{c, fc}, std::pair{d, fd}}) {
      if (std::abs(r.value) > win.max_abs) {
        win.max_abs = std::abs(r.value);
        win.t_at_max = t;
        win.error = r.error;
      }
    }
    if (win.error > 0.1 * win.max_abs) fit.flagged = true;
    lx.push_back(std::log(win.t_at_max));
    ly.push_back(std::log(win.max_abs));
    fit.windows.push_back(win);
  }
  double se = 0.0;
  fit.slope = linear_slope(lx, ly, &fit.intercept, &se);
  fit.half_width = 2.0 * se;
  return fit;
}

std::string to_string(Verdict v)
{
  switch (v) {
    case Verdict::Bounded:
      return "bounded";
    case Verdict::Unbounded:
      return "unbounded";
    case Verdict::Indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

HolderColumn classify_column(const std::vector<double>& offsets, const std::vector<double>& values,
                             double exponent, const HolderThresholds& th)
{
  if (offsets.size() != values.size() || offsets.size() < 2) {
    throw std::invalid_argument("a ratio column needs at least two offsets");
  }
  std::vector<std::size_t> order(offsets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return offsets[i] > offsets[j]; });

  HolderColumn col;
  col.exponent = exponent;
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  col.max_over_min = *mn > 0 ? *mx / *mn : INFINITY;
  col.monotone = true;
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (values[order[i]] < values[order[i - 1]] * (1.0 - th.monotone_slack)) col.monotone = false;
  }
  const double decades = std::log10(offsets[order.front()] / offsets[order.back()]);
  const double first = values[order.front()], last = values[order.back()];
  col.growth_per_decade =
      (decades > 0 && first > 0) ? std::pow(last / first, 1.0 / decades) : 1.0;
  std::vector<double> lx, ly;
  for (std::size_t i : order) {
    if (values[i] > 0 && offsets[i] > 0) {
      lx.push_back(std::log(offsets[i]));
      ly.push_back(std::log(values[i]));
    }
  }
  col.loglog_slope = lx.size() >= 2 ? linear_slope(lx, ly, nullptr, nullptr) : 0.0;

  if (col.max_over_min <= th.flat_factor) {
    col.verdict = Verdict::Bounded;
  } else if (col.monotone && col.growth_per_decade >= th.growth_per_decade) {
    col.verdict = Verdict::Unbounded;
  } else {
    col.verdict = Verdict::Indeterminate;
  }
  return col;
}

std::pair<double, double> differential_gap(const CartanData& cd, const Eigen::VectorXd& lambda,
                                           int order, const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& y, double t,
                                           const IntegrateOptions& opts)
{
  const auto vx = differential_values(cd, lambda, order, x, t, opts);
  const auto vy = differential_values(cd, lambda, order, y, t, opts);
  double gap = 0.0, err = 0.0;
  for (std::size_t i = 0; i < vx.size(); ++i) {
    const double g = std::abs(vx[i].value - vy[i].value);
    if (i == 0 || g > gap) {
      gap = g;
      err = vx[i].error + vy[i].error;
    }
  }
  return {gap, err};
}

HolderTable holder_scan(const CartanData& cd, const Eigen::VectorXd& lambda, int order,
                        const std::vector<double>& exponents, const Eigen::VectorXd& x,
                        const std::vector<double>& offsets, const std::vector<double>& t_grid,
                        const HolderScanOptions& opts)
{
  if (order < 0 || order > SphericalQuery::kMaxOrder) {
    throw std::invalid_argument("derivative order out of range");
  }
  if (offsets.size() < 2 || t_grid.empty()) {
    throw std::invalid_argument("holder_scan needs offsets and a t grid");
  }
  if (x.size() != cd.rank()) throw std::invalid_argument("base point dimension mismatch");
  Eigen::VectorXd u = opts.direction.size() ? opts.direction : x;
  if (u.size() != cd.rank() || u.norm() == 0.0) {
    throw std::invalid_argument("offset direction must be a nonzero vector of a");
  }
  u.normalize();

  HolderTable table;
  table.order = order;
  table.base_point = x;
  table.offset_direction = u;
  table.exponents = exponents;

  std::vector<double> hs = offsets;
  std::sort(hs.begin(), hs.end(), std::greater<>());
  require_chamber(cd, x, opts.wall_margin);
  for (double h : hs) {
    if (!(h > 0)) throw std::invalid_argument("offsets must be positive");
    require_chamber(cd, x + h * u, opts.wall_margin);
  }

  table.rows.resize(hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) table.rows[i].h = hs[i];
  for (double t : t_grid) {
    const auto vx = differential_values(cd, lambda, order, x, t, opts.integrate);
    for (std::size_t i = 0; i < hs.size(); ++i) {
      const auto vy = differential_values(cd, lambda, order, x + hs[i] * u, t, opts.integrate);
      for (std::size_t j = 0; j < vx.size(); ++j) {
        const double g = std::abs(vx[j].value - vy[j].value);
        if (vx[j].flagged || vy[j].flagged) table.flagged = true;
        if (g > table.rows[i].sup_difference) {
          table.rows[i].sup_difference = g;
          table.rows[i].t_at_sup = t;
          table.rows[i].error = vx[j].error + vy[j].error;
        }
      }
    }
  }
  for (double delta : exponents) {
    std::vector<double> col;
    for (auto& row : table.rows) {
      row.ratios.push_back(row.sup_difference / std::pow(row.h, delta));
      col.push_back(row.ratios.back());
    }
    table.columns.push_back(classify_column(hs, col, delta, opts.thresholds));
  }
  return table;
}

InterpolationReport interpolation_check(const CartanData& cd, const Eigen::VectorXd& lambda,
                                        const Eigen::VectorXd& x, const std::vector<double>& h_list,
                                        const std::vector<double>& calibration_t,
                                        const std::vector<double>& validation_t,
                                        const HolderScanOptions& opts)
{
  const Rational k = kappa(cd.roots());
  const Rational r = Rational(k.numerator() / k.denominator());
  if (k - r != Rational(1, 2)) {
    throw std::invalid_argument("interpolation_check needs kappa - floor(kappa) = 1/2");
  }
  const int order = static_cast<int>(r.numerator());
  Eigen::VectorXd u = opts.direction.size() ? opts.direction : x;
  u.normalize();
  require_chamber(cd, x, opts.wall_margin);

  InterpolationReport rep;
  auto fill = [&](const std::vector<double>& ts, bool calib) {
    for (double t : ts) {
      for (double h : h_list) {
        if (h < 0) throw std::invalid_argument("offsets must be nonnegative");
        require_chamber(cd, x + h * u, opts.wall_margin);
        InterpolationRow row;
        row.t = t;
        row.h = h;
        row.calibration = calib;
        if (h > 0) {
          std::tie(row.difference, row.error) =
              differential_gap(cd, lambda, order, x, x + h * u, t, opts.integrate);
        }
        rep.rows.push_back(row);
      }
    }
  };
  fill(calibration_t, true);
  for (const auto& row : rep.rows) {
    if (row.h <= 0) continue;
    rep.A = std::max(rep.A, row.difference * std::sqrt(row.t));
    rep.B = std::max(rep.B, row.difference / (std::sqrt(row.t) * row.h));
  }
  fill(validation_t, false);
  for (auto& row : rep.rows) {
    row.decay_bound = rep.A / std::sqrt(row.t);
    row.mean_value_bound = rep.B * std::sqrt(row.t) * row.h;
    if (row.calibration) continue;
    ++rep.validation_rows;
    const double bound = std::min(row.decay_bound, row.mean_value_bound);
    row.violated = row.difference > bound + 2.0 * row.error;
    if (row.violated) ++rep.violations;
  }
  rep.violation_fraction =
      rep.validation_rows ? static_cast<double>(rep.violations) / rep.validation_rows : 0.0;
  rep.passed = rep.validation_rows > 0 && rep.violation_fraction <= 0.05;
  return rep;
}

namespace {

void reject_collisions(const AsymptoticExpansion& exp)
{
  std::vector<double> nu;
  for (const auto& term : exp.terms) nu.push_back(std::remainder(term.frequency, 2.0 * kPi));
  std::sort(nu.begin(), nu.end());
  for (std::size_t i = 0; i + 1 < nu.size(); ++i) {
    if (nu[i + 1] - nu[i] < 1e-9) {
      throw std::invalid_argument("frequencies (w lambda)(x) collide modulo 2 pi");
    }
  }
  if (nu.size() > 1 && nu.front() + 2.0 * kPi - nu.back() < 1e-9) {
    throw std::invalid_argument("frequencies (w lambda)(x) collide modulo 2 pi");
  }
}

}  // namespace

double averaged_lower_bound(const CartanData& cd, const Eigen::VectorXd& lambda,
                            const Eigen::VectorXd& x, const Eigen::VectorXd& h, long long m,
                            long long N, const std::vector<Eigen::VectorXd>& directions)
{
  if (N < 1) throw std::invalid_argument("N must be positive");
  if (h.size() != x.size()) throw std::invalid_argument("offset dimension mismatch");
  if (h.norm() == 0.0) return 0.0;
  const AsymptoticExpansion ex = build_expansion(cd, lambda, x, directions);
  reject_collisions(ex);
  const AsymptoticExpansion ey = build_expansion(cd, lambda, x + h, directions);
  double sum = 0.0;
  for (long long t = m; t < m + N; ++t) {
    const double td = static_cast<double>(t);
    sum += std::norm(normalized_sum(ex, td) - normalized_sum(ey, td));
  }
  return sum / static_cast<double>(N);
}

double averaged_limit(const CartanData& cd, const Eigen::VectorXd& lambda,
                      const Eigen::VectorXd& x, const Eigen::VectorXd& h,
                      const std::vector<Eigen::VectorXd>& directions)
{
  double total = 0.0;
  for (const auto& term : build_expansion(cd, lambda, x, directions).terms) {
    total += std::norm(term.coeff);
  }
  for (const auto& term : build_expansion(cd, lambda, x + h, directions).terms) {
    total += std::norm(term.coeff);
  }
  return total;
}

double calibrate_d(const CartanData& cd, const Eigen::VectorXd& lambda, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& direction, const std::vector<double>& h_list,
                   double delta_prime, const std::vector<Eigen::VectorXd>& directions,
                   double fraction, double d_max)
{
  const Eigen::VectorXd u = direction.normalized();
  for (double d = 1.0; d <= d_max; d *= 2.0) {
    bool ok = true;
    for (double h : h_list) {
      const long long m = static_cast<long long>(std::ceil(std::pow(h, -delta_prime)));
      const long long N = static_cast<long long>(std::ceil(d / h));
      const double ms = averaged_lower_bound(cd, lambda, x, h * u, m, N, directions);
      if (ms < fraction * averaged_limit(cd, lambda, x, h * u, directions)) {
        ok = false;
        break;
      }
    }
    if (ok) return d;
  }
  throw std::runtime_error("no d up to the cap reaches the requested fraction of the limit");
}

LowerBoundReport averaged_lower_bound_scan(const CartanData& cd, const Eigen::VectorXd& lambda,
                                           const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& direction,
                                           const std::vector<double>& h_list, double delta_prime,
                                           const std::vector<Eigen::VectorXd>& directions, double d)
{
  if (h_list.empty()) throw std::invalid_argument("empty offset list");
  LowerBoundReport rep;
  rep.delta_prime = delta_prime;
  rep.d = d > 0 ? d : calibrate_d(cd, lambda, x, direction, h_list, delta_prime, directions);
  const Eigen::VectorXd u = direction.normalized();
  double lo = INFINITY, hi = 0.0;
  for (double h : h_list) {
    LowerBoundRow row;
    row.h = h;
    row.m = static_cast<long long>(std::ceil(std::pow(h, -delta_prime)));
    row.N = static_cast<long long>(std::ceil(rep.d / h));
    row.mean_square = averaged_lower_bound(cd, lambda, x, h * u, row.m, row.N, directions);
    row.limit = averaged_limit(cd, lambda, x, h * u, directions);
    lo = std::min(lo, row.mean_square);
    hi = std::max(hi, row.mean_square);
    rep.rows.push_back(row);
  }
  rep.floor = lo;
  rep.spread = lo > 0 ? hi / lo : INFINITY;
  rep.stable = lo > 0 && rep.spread <= 2.0;
  return rep;
}

}  // namespace cartan
