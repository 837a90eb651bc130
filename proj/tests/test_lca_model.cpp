#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/trapezoidal.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "finharm/errors.hpp"
#include "finharm/lca_model.hpp"
#include "frozen.hpp"

using namespace finharm;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent quadrature of integral f(x) e^{-i w x} dx over [lo, hi] for real f.
template <class F>
Complex quad_transform(F f, double w, double lo, double hi) {
  using boost::math::quadrature::gauss_kronrod;
  const double re = gauss_kronrod<double, 61>::integrate([&](double x) { return f(x) * std::cos(w * x); }, lo, hi, 15, 1e-13);
  const double im = gauss_kronrod<double, 61>::integrate([&](double x) { return -f(x) * std::sin(w * x); }, lo, hi, 15, 1e-13);
  return {re, im};
}

}  // namespace

TEST(LcaModel, DualIsInvolutive) {
  const std::vector<LcaModel> models{LcaModel::circle(2.0), LcaModel::reals(1.0, 3.0), LcaModel::integers(0.5),
                                     LcaModel::finite_group(GroupSpec({4, 3}), 0.25), LcaModel::tower(3, 2, 1, 2.0)};
  for (const auto& m : models) {
    const LcaModel dd = m.dual().dual();
    EXPECT_TRUE(dd.same_group(m)) << m.name();
    EXPECT_NEAR(dd.haar_scale, m.haar_scale, 1e-15) << m.name();
  }
  EXPECT_EQ(LcaModel::circle().dual().kind, ModelKind::Integers);
  EXPECT_EQ(LcaModel::integers().dual().kind, ModelKind::Circle);
  EXPECT_NEAR(LcaModel::reals().dual().haar_scale, 1.0 / (2 * kPi), 1e-15);
}

TEST(LcaModel, RejectsBadParameters) {
  EXPECT_THROW(LcaModel::circle(0.0), DomainError);
  EXPECT_THROW(LcaModel::reals(-1.0), DomainError);
  EXPECT_THROW(LcaModel::tower(4, 1, 1), ParameterError);
  EXPECT_THROW(LcaModel::tower(1, 1, 1), ParameterError);
  EXPECT_THROW(LcaModel::tower(3, -1, 1), ParameterError);
  EXPECT_THROW(LcaModel::product({}), DomainError);
}

TEST(LcaPoint, CircleArithmeticWraps) {
  const LcaModel c = LcaModel::circle();
  const LcaPoint x = add(c, LcaPoint::circle(3.0), LcaPoint::circle(1.0));
  EXPECT_NEAR(x.real, 4.0 - 2 * kPi, 1e-15);
  EXPECT_TRUE(points_equal(c, subtract(c, x, LcaPoint::circle(1.0)), LcaPoint::circle(3.0)));
  EXPECT_TRUE(points_equal(c, LcaPoint::circle(kPi), LcaPoint::circle(-kPi)));
}

TEST(LcaPoint, TowerArithmeticIsExact) {
  const LcaModel t = LcaModel::tower(3, 2, 2);
  const LcaPoint a = LcaPoint::tower(3, 1, 2);  // 1/9
  const LcaPoint b = LcaPoint::tower(3, 2, 2);  // 2/9
  const LcaPoint s = add(t, a, b);              // 1/3
  EXPECT_EQ(s.padic, (PAdic{1, 1}));
  EXPECT_EQ(valuation(t, s), -1);
  EXPECT_EQ(valuation(t, LcaPoint::tower(3, 18, 0)), 2);
  EXPECT_EQ(valuation(t, identity(t)), kInfiniteValuation);
  EXPECT_TRUE(points_equal(t, add(t, a, negate(t, a)), identity(t)));
}

TEST(LcaPairing, Bimultiplicative) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const LcaModel r = LcaModel::reals(1.7);
  const LcaModel c = LcaModel::circle();
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng), y = u(rng), g = u(rng);
    const Complex lhs = eval_pairing(r, LcaPoint::reals(x + y), LcaPoint::reals(g));
    const Complex rhs = eval_pairing(r, LcaPoint::reals(x), LcaPoint::reals(g)) * eval_pairing(r, LcaPoint::reals(y), LcaPoint::reals(g));
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-12);
    const auto m = static_cast<std::int64_t>(std::round(g * 5));
    const Complex cl = eval_pairing(c, add(c, LcaPoint::circle(x), LcaPoint::circle(y)), LcaPoint::integer_point(m));
    const Complex cr = eval_pairing(c, LcaPoint::circle(x), LcaPoint::integer_point(m)) *
                       eval_pairing(c, LcaPoint::circle(y), LcaPoint::integer_point(m));
    EXPECT_NEAR(std::abs(cl - cr), 0.0, 1e-11);
  }
  const LcaModel t = LcaModel::tower(5, 2, 2);
  for (std::int64_t a = -30; a <= 30; a += 7) {
    for (std::int64_t b = -30; b <= 30; b += 11) {
      const LcaPoint x = LcaPoint::tower(5, a, 2), y = LcaPoint::tower(5, b, 1), chi = LcaPoint::tower(5, 3, 2);
      const Complex lhs = eval_pairing(t, add(t, x, y), chi);
      const Complex rhs = eval_pairing(t, x, chi) * eval_pairing(t, y, chi);
      EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-12);
    }
  }
}

TEST(LcaPairing, TowerAnnihilator) {
  // Characters of level -k kill p^k Z_p exactly.
  const LcaModel t = LcaModel::tower(2, 3, 3);
  for (std::int64_t num = 1; num < 16; num += 2) {
    EXPECT_NEAR(pairing_arg(t, LcaPoint::tower(2, 8, 0), LcaPoint::tower(2, num, 3)), 0.0, 0.0);
    EXPECT_GT(std::abs(pairing_arg(t, LcaPoint::tower(2, 4, 0), LcaPoint::tower(2, num, 3))), 1.0);
  }
}

TEST(Descriptor, MembershipAndMeasure) {
  const LcaModel c = LcaModel::circle(2.0);
  EXPECT_TRUE(contains(c, SetDescriptor::arc(0.5), LcaPoint::circle(-0.5)));
  EXPECT_FALSE(contains(c, SetDescriptor::arc(0.5), LcaPoint::circle(0.6)));
  EXPECT_NEAR(haar_measure(c, SetDescriptor::arc(kPi / 4)), 0.5, 1e-15);
  EXPECT_NEAR(haar_measure(LcaModel::reals(), SetDescriptor::interval(1.5)), 3.0, 1e-15);
  EXPECT_NEAR(haar_measure(LcaModel::integers(0.5), SetDescriptor::integer_ball(2)), 2.5, 1e-15);
  EXPECT_NEAR(haar_measure(LcaModel::tower(3, 1, 1), SetDescriptor::subgroup_level(-1)), 3.0, 1e-15);
  EXPECT_THROW(validate(c, SetDescriptor::interval(1.0)), DomainError);
  EXPECT_THROW(haar_measure(LcaModel::reals(), SetDescriptor::whole()), DomainError);
}

TEST(Descriptor, SubsetAndSum) {
  const LcaModel r = LcaModel::reals();
  EXPECT_TRUE(descriptor_subset(r, SetDescriptor::interval(1.0), SetDescriptor::interval(2.0)));
  EXPECT_FALSE(descriptor_subset(r, SetDescriptor::interval(2.5), SetDescriptor::interval(2.0)));
  EXPECT_NEAR(minkowski_sum(r, SetDescriptor::interval(1.0), SetDescriptor::interval(0.5)).radius, 1.5, 0.0);
  const LcaModel t = LcaModel::tower(2, 2, 2);
  EXPECT_TRUE(descriptor_subset(t, SetDescriptor::subgroup_level(2), SetDescriptor::subgroup_level(-1)));
  EXPECT_EQ(minkowski_sum(t, SetDescriptor::subgroup_level(2), SetDescriptor::subgroup_level(-1)).level, -1);
  EXPECT_NEAR(minkowski_sum(LcaModel::circle(), SetDescriptor::arc(2.0), SetDescriptor::arc(2.0)).radius, kPi, 0.0);
}

TEST(BohrClosedForm, MatchesSweepOnCircleAndIntegers) {
  const LcaModel c = LcaModel::circle();
  const double r = 0.3;
  for (double alpha : {0.2, 0.9, 1.5, 2.0}) {
    const SetDescriptor b = bohr_closed_form(c, SetDescriptor::arc(r), alpha);
    ASSERT_EQ(b.kind, DescriptorKind::IntegerBall);
    // Brute force: m is in the Bohr set iff |m theta| <= alpha for theta in [-r, r] without wrap.
    std::int64_t brute = 0;
    for (std::int64_t m = 1; m < 100; ++m) {
      bool ok = true;
      for (int j = 0; j <= 4000 && ok; ++j) {
        const double th = -r + 2 * r * j / 4000.0;
        ok = std::abs(std::remainder(m * th, 2 * kPi)) <= alpha + 1e-12;
      }
      if (!ok) break;
      brute = m;
    }
    EXPECT_EQ(b.bound, brute) << alpha;
  }
  const LcaModel z = LcaModel::integers();
  for (std::int64_t k : {2, 3, 5}) {
    const double alpha = 1.0;
    const SetDescriptor b = bohr_closed_form(z, SetDescriptor::integer_ball(k), alpha);
    ASSERT_EQ(b.kind, DescriptorKind::Arc);
    EXPECT_NEAR(b.radius, alpha / k, 1e-15);
    // Every theta just outside the arc breaks some |m theta| <= alpha, and every theta inside keeps all.
    const double out = b.radius * (1 + 1e-9), in = b.radius;
    bool breaks = false, keeps = true;
    for (std::int64_t m = -k; m <= k; ++m) {
      breaks = breaks || std::abs(std::remainder(m * out, 2 * kPi)) > alpha;
      keeps = keeps && std::abs(std::remainder(m * in, 2 * kPi)) <= alpha + 1e-12;
    }
    EXPECT_TRUE(breaks);
    EXPECT_TRUE(keeps);
  }
  EXPECT_THROW(bohr_closed_form(z, SetDescriptor::integer_ball(3), 2.5), UnsupportedError);
}

TEST(BohrClosedForm, RealsAndTower) {
  const SetDescriptor b = bohr_closed_form(LcaModel::reals(), SetDescriptor::interval(0.5), 1.0);
  EXPECT_NEAR(b.radius, 2.0, 1e-15);
  const SetDescriptor bp = bohr_closed_form(LcaModel::reals(1.0), SetDescriptor::interval(0.5), 1.0);
  EXPECT_NEAR(bp.radius, 1.0 / kPi, 1e-15);
  const SetDescriptor t = bohr_closed_form(LcaModel::tower(3, 1, 1), SetDescriptor::subgroup_level(2), 1.0);
  EXPECT_EQ(t.level, -2);
  EXPECT_THROW(bohr_closed_form(LcaModel::tower(3, 1, 1), SetDescriptor::subgroup_level(2), 2.2), UnsupportedError);
}

TEST(ReferenceTransform, GaussianAgainstQuadrature) {
  const RefFunction g = RefFunction::gaussian(LcaModel::reals(), 1.0);
  const RefFunction gh = reference_transform(g);
  EXPECT_NEAR(evaluate(gh, LcaPoint::reals(0.0)).real(), oracle::kGaussianAtZero, 1e-14);
  for (const auto& row : oracle::kGaussian) {
    EXPECT_NEAR(evaluate(gh, LcaPoint::reals(row.gamma)).real(), row.exact, 1e-14);
  }
  // Non-default period and Haar multiple.
  const LcaModel m = LcaModel::reals(3.0, 0.7);
  const RefFunction f = RefFunction::gaussian(m, 0.8, 1.5);
  const RefFunction fh = reference_transform(f);
  for (double gamma : {-1.0, -0.3, 0.0, 0.45, 1.2}) {
    const double w = 2 * kPi * gamma / 3.0;
    const Complex q = 0.7 * quad_transform([](double x) { return 1.5 * std::exp(-x * x / (2 * 0.64)); }, w, -12, 12);
    EXPECT_NEAR(std::abs(evaluate(fh, LcaPoint::reals(gamma)) - q), 0.0, 1e-12) << gamma;
  }
}

TEST(ReferenceTransform, IndicatorAgainstQuadrature) {
  const RefFunction f = RefFunction::indicator_interval(LcaModel::reals(), 1.0);
  const RefFunction fh = reference_transform(f);
  EXPECT_NEAR(evaluate(fh, LcaPoint::reals(kPi)).real(), oracle::kIndicatorAtPi, 1e-15);
  for (double gamma : {0.0, 0.5, 2.0, -3.3}) {
    const Complex q = quad_transform([](double) { return 1.0; }, gamma, -1, 1);
    EXPECT_NEAR(std::abs(evaluate(fh, LcaPoint::reals(gamma)) - q), 0.0, 1e-13) << gamma;
  }
}

TEST(ReferenceTransform, TrigPolyCoefficients) {
  // 1 + cos theta = e^{-i theta}/2 + 1 + e^{i theta}/2.
  const RefFunction f = RefFunction::trig_poly(LcaModel::circle(), -1, {0.5, 1.0, 0.5});
  const RefFunction fh = reference_transform(f);
  for (std::int64_t m = -2; m <= 2; ++m) {
    EXPECT_NEAR(evaluate(fh, LcaPoint::integer_point(m)).real(), oracle::kTrigCoeffs[m + 2], 1e-14);
  }
  using boost::math::quadrature::trapezoidal;
  const double l1 = trapezoidal([](double t) { return std::abs(1.0 + std::cos(t)); }, -kPi, kPi) / (2 * kPi);
  EXPECT_NEAR(l1_norm(f), l1, 1e-9);
}

TEST(ReferenceTransform, FiniteSeqAndTower) {
  const RefFunction s = RefFunction::finite_seq(LcaModel::integers(), -1, {1.0, 2.0, Complex(0, 1)});
  const RefFunction sh = reference_transform(s);
  for (double th : {0.0, 0.7, -2.0}) {
    Complex want = 0.0;
    for (std::int64_t m = -1; m <= 1; ++m) want += s.coeffs[m + 1] * std::polar(1.0, -m * th);
    EXPECT_NEAR(std::abs(evaluate(sh, LcaPoint::circle(th)) - want), 0.0, 1e-14);
  }
  const LcaModel t = LcaModel::tower(3, 2, 2);
  const RefFunction lc = RefFunction::locally_constant(t, 1);
  const RefFunction lch = reference_transform(lc);
  EXPECT_EQ(lch.level, -1);
  EXPECT_NEAR(lch.amplitude, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(l1_norm(lc), 1.0 / 3.0, 1e-15);
  const RefFunction sinc = reference_transform(RefFunction::indicator_interval(LcaModel::reals(), 1.0));
  EXPECT_THROW(reference_transform(sinc), UnsupportedError);
}

TEST(IntegrateOver, GaussianWindow) {
  const RefFunction g = RefFunction::gaussian(LcaModel::reals(), 1.3, 2.0);
  using boost::math::quadrature::gauss_kronrod;
  for (double x : {0.0, 1.0, -4.0, 9.0}) {
    const double q = gauss_kronrod<double, 61>::integrate(
        [](double y) { return 2.0 * std::exp(-y * y / (2 * 1.69)); }, x - 0.25, x + 0.25, 10, 1e-14);
    EXPECT_NEAR(integrate_over(g, LcaPoint::reals(x), SetDescriptor::interval(0.25)).real(), q, 1e-14 + 1e-12 * q) << x;
  }
}
