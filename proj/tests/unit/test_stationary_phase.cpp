#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cartan/spherical.hpp"
#include "cartan/stationary_phase.hpp"
#include "oracles/bessel_oracle.hpp"
#include "support/properties.hpp"

using namespace cartan;
using cplx = std::complex<double>;
using std::numbers::pi;

namespace {

Eigen::VectorXd scalar(double v) { return Eigen::VectorXd::Constant(1, v); }

const CartanData& group(const char* name)
{
  static std::map<std::string, CartanData> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, realize(GroupSpec::parse(name))).first;
  return it->second;
}

const WeylElement& identity_of(const RootSystem& rs)
{
  for (const auto& w : rs.weyl_group()) {
    if (w.word.empty()) return w;
  }
  throw std::logic_error("no identity");
}

const WeylElement& reflection_of(const RootSystem& rs)
{
  for (const auto& w : rs.weyl_group()) {
    if (w.word.size() == 1) return w;
  }
  throw std::logic_error("no reflection");
}

std::vector<ExpansionTerm> by_frequency(const AsymptoticExpansion& e)
{
  std::vector<ExpansionTerm> terms = e.terms;
  std::sort(terms.begin(), terms.end(),
            [](const auto& x, const auto& y) { return x.frequency > y.frequency; });
  return terms;
}

}  // namespace

TEST(Sigma, RankOneExamples)
{
  const RootSystem& se2 = group("so:2,1").roots();
  EXPECT_EQ(sigma(se2, scalar(1.0), identity_of(se2), scalar(1.0)), -1);
  EXPECT_EQ(sigma(se2, scalar(1.0), reflection_of(se2), scalar(1.0)), 1);
  const RootSystem& se3 = group("so:3,1").roots();
  EXPECT_EQ(sigma(se3, scalar(1.0), identity_of(se3), scalar(1.0)), -2);
  EXPECT_EQ(sigma(se3, scalar(1.0), reflection_of(se3), scalar(1.0)), 2);
}

TEST(Sigma, SingularPointThrows)
{
  const RootSystem& rs = group("sl:3").roots();
  const Eigen::VectorXd lambda = fundamental_weight(rs, 0) + fundamental_weight(rs, 1);
  // a on the wall of the first simple root.
  const Eigen::VectorXd wall = fundamental_weight(rs, 1);
  EXPECT_THROW(sigma(rs, lambda, identity_of(rs), wall), std::domain_error);
  EXPECT_THROW(sigma(group("so:2,1").roots(), scalar(1.0), identity_of(group("so:2,1").roots()),
                     scalar(0.0)),
               std::domain_error);
}

TEST(Volume, ClosedForms)
{
  EXPECT_NEAR(volume_so(2, 1.0), 2 * pi, 1e-14);
  EXPECT_NEAR(volume_so(3, 1.0), 8 * pi * pi, 1e-12);
  EXPECT_NEAR(vol_quotient(group("so:2,1"), scalar(1.0)), 2 * pi * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(vol_quotient(group("so:3,1"), scalar(1.0)), 16 * pi, 1e-12);

  const CartanData& sl3 = group("sl:3");
  const RootSystem& rs = sl3.roots();
  EXPECT_NEAR(vol_quotient(sl3, fundamental_weight(rs, 0)), 24 * pi, 1e-11);
  const Eigen::VectorXd regular = fundamental_weight(rs, 0) + 2.0 * fundamental_weight(rs, 1);
  EXPECT_NEAR(vol_quotient(sl3, regular), 48 * std::sqrt(3.0) * pi * pi, 1e-10);
  EXPECT_NEAR(vol_quotient(sl3, regular), volume_so(3, std::sqrt(12.0)) / 4.0, 1e-10);
  EXPECT_THROW(vol_quotient(sl3, Eigen::Vector2d::Zero()), std::invalid_argument);
}

TEST(Coefficients, ZeroAmplitudeGivesZero)
{
  const CartanData& sl3 = group("sl:3");
  const KFunction zero = [](const Eigen::MatrixXd&) { return cplx(0.0); };
  const AsymptoticExpansion e =
      build_expansion(sl3, Eigen::Vector2d(0.3, 1.0), Eigen::Vector2d(0.7, 1.9), zero);
  for (const auto& term : e.terms) EXPECT_EQ(term.coeff, cplx(0.0));
}

TEST(Coefficients, SE2)
{
  const CartanData& se2 = group("so:2,1");
  const AsymptoticExpansion e = build_expansion(se2, scalar(1.0), scalar(1.0));
  ASSERT_EQ(e.terms.size(), 2u);
  EXPECT_EQ(e.n_lambda, 1);
  EXPECT_DOUBLE_EQ(e.exponent, 0.5);
  const auto terms = by_frequency(e);
  const cplx expected = std::polar(1.0 / std::sqrt(2 * pi), -pi / 4);
  EXPECT_LT(std::abs(terms[0].coeff - expected), 1e-14);
  EXPECT_LT(std::abs(terms[1].coeff - std::conj(expected)), 1e-14);
  EXPECT_NEAR(std::abs(terms[0].coeff), std::abs(terms[1].coeff), 1e-15);
  // Leading sum is the Hankel asymptotic of J0.
  for (double t : {50.0, 120.0, 400.0}) {
    EXPECT_NEAR(leading_sum(e, t).real(), oracle::j0_asymptotic(t), 1e-14);
  }
}

TEST(Coefficients, SE3LeadingSumIsSinc)
{
  const CartanData& se3 = group("so:3,1");
  const AsymptoticExpansion e = build_expansion(se3, scalar(1.0), scalar(1.0));
  const auto terms = by_frequency(e);
  ASSERT_EQ(terms.size(), 2u);
  EXPECT_LT(std::abs(terms[0].coeff - cplx(0.0, -0.5)), 1e-14);
  EXPECT_EQ(terms[0].sigma, -2);
  for (double t : {50.0, 77.7, 300.0}) {
    const cplx s = leading_sum(e, t);
    EXPECT_NEAR(s.real(), oracle::sinc(t), 5e-3 * std::max(std::abs(oracle::sinc(t)), 1.0 / t));
    EXPECT_NEAR(s.imag(), 0.0, 1e-14);
  }
}

TEST(Coefficients, SL3FundamentalWeight)
{
  const CartanData& sl3 = group("sl:3");
  const Eigen::VectorXd lambda = fundamental_weight(sl3.roots(), 0);
  const Eigen::VectorXd a(Eigen::Vector2d(std::sqrt(3.0), 3.0));
  const AsymptoticExpansion e = build_expansion(sl3, lambda, a);
  ASSERT_EQ(e.terms.size(), 3u);
  EXPECT_EQ(e.n_lambda, 2);
  const auto terms = by_frequency(e);
  const double r = 1.0 / (2.0 * std::sqrt(2.0));
  EXPECT_NEAR(terms[0].frequency, 1.0, 1e-12);
  EXPECT_NEAR(terms[1].frequency, 0.0, 1e-12);
  EXPECT_NEAR(terms[2].frequency, -1.0, 1e-12);
  EXPECT_LT(std::abs(terms[0].coeff - cplx(0.0, -r)), 1e-13);
  EXPECT_LT(std::abs(terms[1].coeff - cplx(0.5, 0.0)), 1e-13);
  EXPECT_LT(std::abs(terms[2].coeff - cplx(0.0, r)), 1e-13);
  EXPECT_EQ(terms[0].sigma, -2);
  EXPECT_EQ(terms[1].sigma, 0);
  EXPECT_EQ(terms[2].sigma, 2);
}

TEST(Expansion, SingleTermAtUnitScale)
{
  const CartanData& se2 = group("so:2,1");
  const AsymptoticExpansion e = build_expansion(se2, scalar(2.0), scalar(0.5));
  cplx manual(0.0);
  for (const auto& term : e.terms) manual += std::polar(1.0, term.frequency) * term.coeff;
  EXPECT_LT(std::abs(leading_sum(e, 1.0) - manual), 1e-15);
  EXPECT_LT(std::abs(normalized_sum(e, 1.0) - manual), 1e-15);
  EXPECT_THROW(leading_sum(e, 0.0), std::invalid_argument);
}

TEST(Expansion, RejectsZeroLambda)
{
  const CartanData& sl3 = group("sl:3");
  EXPECT_THROW(build_expansion(sl3, Eigen::Vector2d::Zero(), Eigen::Vector2d(1, 2)),
               std::invalid_argument);
  EXPECT_THROW(error_decay_scan(sl3, Eigen::Vector2d::Zero(), Eigen::Vector2d(1, 2), {16, 32}),
               std::invalid_argument);
  EXPECT_THROW(error_decay_scan(sl3, Eigen::Vector2d(1, 0), Eigen::Vector2d(1, 2), {}),
               std::invalid_argument);
}

TEST(Expansion, ExponentIsHalfOfN)
{
  std::mt19937_64 rng(21);
  for (const char* g : {"sl:2", "sl:3", "sl:4", "so:2,1", "so:3,1", "so:4,1"}) {
    const CartanData& cd = group(g);
    for (int c = 0; c < 5; ++c) {
      const Eigen::VectorXd lambda = cartan::testing::random_lambda(cd, rng);
      const Eigen::VectorXd a = cartan::testing::random_regular_a(cd, rng);
      const AsymptoticExpansion e = build_expansion(cd, lambda, a);
      EXPECT_EQ(e.n_lambda, n_lambda(cd.roots(), lambda)) << g;
      EXPECT_DOUBLE_EQ(e.exponent, 0.5 * e.n_lambda) << g;
      EXPECT_EQ(e.terms.size() * stabilizer_order(cd.roots(), lambda),
                cd.roots().weyl_group().size())
          << g;
    }
  }
}

TEST(DecayScan, SE2ResidualIsBounded)
{
  const DecayScan scan =
      error_decay_scan(group("so:2,1"), scalar(1.0), scalar(1.0), {16, 32, 64, 128});
  ASSERT_EQ(scan.rows.size(), 4u);
  EXPECT_DOUBLE_EQ(scan.exponent, 0.5);
  EXPECT_TRUE(scan.bounded);
  for (const auto& row : scan.rows) {
    EXPECT_NEAR(row.exact.real(), oracle::j0(row.t), 1e-10);
    EXPECT_FALSE(row.flagged);
  }
}

TEST(StationaryPhaseProperties, SigmaMatchesHessianSignature)
{
  const cartan::testing::PropertyOutcome p = cartan::testing::sigma_property(51, 120);
  EXPECT_TRUE(p.ok()) << p.first_failure << " worst " << p.worst;
}

TEST(StationaryPhaseProperties, HessianMatchesRootFormula)
{
  const cartan::testing::PropertyOutcome p = cartan::testing::hessian_property(52, 120);
  EXPECT_TRUE(p.ok()) << p.first_failure << " worst " << p.worst;
}
