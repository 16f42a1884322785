#pragma once

// Reference values for the rank-one groups, computed without touching the library.

#include <cmath>

namespace cartan::oracle {

/// J_n(x) from its power series, summed in long double. Accurate to about 1e-12 for |x| <= 25.
inline long double bessel_j_series(int n, long double x)
{
  const long double half = x / 2.0L;
  long double term = 1.0L;
  for (int k = 1; k <= n; ++k) term *= half / static_cast<long double>(k);
  long double sum = term;
  const long double q = -half * half;
  for (int k = 1; k < 400; ++k) {
    term *= q / (static_cast<long double>(k) * static_cast<long double>(k + n));
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum) && k > half) break;
  }
  return sum;
}

// The series cancels catastrophically past |x| = 25, so larger arguments go to the
// standard library's special functions instead.
inline double j0(double x)
{
  return std::fabs(x) <= 20.0 ? static_cast<double>(bessel_j_series(0, x))
                              : std::cyl_bessel_j(0.0, std::fabs(x));
}
inline double j1(double x)
{
  if (std::fabs(x) <= 20.0) return static_cast<double>(bessel_j_series(1, x));
  return std::copysign(std::cyl_bessel_j(1.0, std::fabs(x)), x);
}

inline double sinc(double u) { return u == 0.0 ? 1.0 : std::sin(u) / u; }

/// Leading Hankel term of J_0.
inline double j0_asymptotic(double u)
{
  return std::sqrt(2.0 / (std::acos(-1.0) * u)) * std::cos(u - std::acos(-1.0) / 4.0);
}

}  // namespace cartan::oracle
