#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "finharm/approximation.hpp"
#include "finharm/errors.hpp"
#include "frozen.hpp"
#include "sweeps.hpp"

using namespace finharm;

namespace {

constexpr double kPi = std::numbers::pi;

void expect_certified(const ApproxCertificate& c) {
  for (const auto& r : c.checks) EXPECT_TRUE(r.passed) << r.name << ": " << r.witness.value_or("") << " [" << r.test_set << "]";
  EXPECT_TRUE(c.certified());
}

}  // namespace

TEST(Builders, RealLatticeExample) {
  const ApproxMap eta = build_real_approx(100, 0.1);
  EXPECT_TRUE(eta.injective);
  // n/2 is its own negative in Z_100 but 5.0 is not in R, so only odd orders give a strict lattice map.
  EXPECT_FALSE(eta.strict);
  EXPECT_TRUE(build_real_approx(101, 0.1).strict);
  expect_certified(certify_KU(eta, SetDescriptor::interval(2.0), SetDescriptor::interval(0.06)));
}

TEST(Builders, RealLatticeGapRefused) {
  const ApproxMap eta = build_real_approx(100, 0.1);
  const ApproxCertificate c = certify_KU(eta, SetDescriptor::interval(2.0), SetDescriptor::interval(0.025));
  EXPECT_FALSE(c.certified());
  EXPECT_FALSE(c.check("coverage").passed);
  EXPECT_TRUE(c.check("coverage").witness.has_value());
}

TEST(Builders, CircleExample) {
  const ApproxMap eta = build_circle_approx(12);
  expect_certified(certify_KU(eta, SetDescriptor::whole(), SetDescriptor::arc(kPi / 12 * 1.01)));
  EXPECT_FALSE(certify_KU(eta, SetDescriptor::whole(), SetDescriptor::arc(kPi / 12 * 0.99)).certified());
}

TEST(Builders, IntegerExample) {
  const ApproxMap eta = build_integer_approx(9, 2);
  expect_certified(certify_KU(eta, SetDescriptor::integer_ball(2), SetDescriptor::integer_ball(0)));
  EXPECT_THROW(build_integer_approx(8, 2), ParameterError);
  EXPECT_THROW(build_integer_approx(9, -1), ParameterError);
  try {
    build_integer_approx(8, 2);
  } catch (const ParameterError& e) {
    EXPECT_NE(std::string(e.what()).find("n/4"), std::string::npos);
  }
}

TEST(Builders, TowerSectionAdditiveModuloU) {
  for (std::int64_t p : {2, 3, 5}) {
    const ApproxMap eta = build_tower_approx(p, 2, 1);
    const ApproxCertificate c = certify_KU(eta, SetDescriptor::subgroup_level(-2), SetDescriptor::subgroup_level(1));
    expect_certified(c);
    // The section is additive only modulo U = p Z_p, so every deviation lies in U.
    EXPECT_LE(c.check("homomorphy").worst, c.check("homomorphy").bound);
    EXPECT_EQ(eta(std::size_t{0}).padic, (PAdic{0, 0}));
  }
}

TEST(Builders, Products) {
  const ApproxMap t = build_circle_approx(16);
  const ApproxMap r = build_real_approx(100, 0.1);
  const ApproxMap tr = product_approx(t, r);
  EXPECT_EQ(tr.source.count(), 1600u);
  expect_certified(certify_KU(tr, SetDescriptor::box({SetDescriptor::whole(), SetDescriptor::interval(2.0)}),
                              SetDescriptor::box({SetDescriptor::arc(0.25), SetDescriptor::interval(0.06)})));
  const ApproxMap tt = product_approx(build_circle_approx(10), build_circle_approx(14));
  expect_certified(certify_KU(tt, SetDescriptor::box({SetDescriptor::whole(), SetDescriptor::whole()}),
                              SetDescriptor::box({SetDescriptor::arc(0.35), SetDescriptor::arc(0.25)})));
  // Z_1 factor: same certificate as the other factor alone.
  const ApproxMap trivial = build_circle_approx(1);
  const ApproxMap same = product_approx(trivial, r);
  EXPECT_EQ(same.source.count(), 100u);
  expect_certified(certify_KU(same, SetDescriptor::box({SetDescriptor::whole(), SetDescriptor::interval(2.0)}),
                              SetDescriptor::box({SetDescriptor::arc(kPi), SetDescriptor::interval(0.06)})));
}

TEST(Preimage, LatticeCounts) {
  const ApproxMap eta = build_circle_approx(64);
  EXPECT_EQ(preimage(eta, SetDescriptor::arc(0.3)).size(), static_cast<std::size_t>(oracle::kArcCount_64));
  EXPECT_EQ(preimage(build_circle_approx(1000), SetDescriptor::arc(0.05)).size(),
            static_cast<std::size_t>(oracle::kArcCount_1000));
  EXPECT_EQ(preimage(build_real_approx(1000, 0.1), SetDescriptor::interval(0.35)).size(), 7u);
}

TEST(AlphaAdjoint, CircleRealsTower) {
  const AlphaAdjointSets c = make_alpha_adjoint_pairs(LcaModel::circle(), SetDescriptor::arc(kPi / 9),
                                                      SetDescriptor::integer_ball(0), kPi / 3);
  EXPECT_EQ(c.gamma.kind, DescriptorKind::IntegerBall);
  EXPECT_EQ(c.gamma.bound, 3);
  EXPECT_TRUE(is_alpha_adjoint(c));

  const AlphaAdjointSets r = make_alpha_adjoint_pairs(LcaModel::reals(), SetDescriptor::interval(0.5),
                                                      SetDescriptor::interval(0.25), 0.5);
  EXPECT_NEAR(r.gamma.radius, 1.0, 1e-15);
  EXPECT_NEAR(r.k.radius, 2.0, 1e-15);
  EXPECT_TRUE(is_alpha_adjoint(r));

  for (double alpha : {0.1, 1.0, 2.0}) {
    const AlphaAdjointSets t = make_alpha_adjoint_pairs(LcaModel::tower(3, 2, 2), SetDescriptor::subgroup_level(2),
                                                        SetDescriptor::subgroup_level(2), alpha);
    EXPECT_EQ(t.gamma.level, -2);
    EXPECT_EQ(t.k.level, -2);
  }
  EXPECT_THROW(make_alpha_adjoint_pairs(LcaModel::reals(), SetDescriptor::interval(2.0), SetDescriptor::interval(1.0), 0.5),
               ContractError);
}

TEST(AdjointPair, CircleConstraint) {
  // k = floor(alpha / r) = 3 needs n > 12 for k < n/4.
  EXPECT_THROW(build_adjoint_pair_circle(12, kPi / 3, kPi / 9), ParameterError);
  const AdjointPair p = build_adjoint_pair_circle(13, kPi / 3, kPi / 9);
  EXPECT_EQ(p.sets.gamma.bound, 3);
  EXPECT_TRUE(p.exact_identity);
  EXPECT_LE(pairing_identity_deviation(p), 1e-10);
  EXPECT_THROW(build_adjoint_pair_circle(64, 0.2, 0.3), ParameterError);
  EXPECT_THROW(build_adjoint_pair_circle(64, 1.2, 0.3), ParameterError);
}

TEST(AdjointPair, RealsExactIdentity) {
  // alpha = 2 pi c / n with c = 60, r = 3 d, rho = 5 d'.
  const std::int64_t n = 1000;
  const double d = 0.1, dp = 2 * kPi / (n * d), alpha = 2 * kPi * 60 / n;
  const AdjointPair p = build_adjoint_pair_reals(n, d, alpha, 3 * d, 5 * dp);
  EXPECT_TRUE(p.exact_identity);
  EXPECT_NEAR(p.d_hat, 1.0 / (n * d), 1e-15);
  EXPECT_LE(pairing_identity_deviation(p), 1e-10);
  EXPECT_THROW(build_adjoint_pair_reals(n, d, alpha, 0.31, 5 * dp), ParameterError);
}

TEST(AdjointPair, RealsGenericDPrime) {
  const std::int64_t n = 1000;
  const double d = 0.1, dp = 0.06, alpha = 0.6;
  // k = alpha / (rho d) = 10, m = alpha / (r d') = 20.
  const double rho = alpha / (10 * d), r = alpha / (20 * dp);
  const AdjointPair p = build_adjoint_pair_reals(n, d, alpha, r, rho, dp);
  EXPECT_FALSE(p.exact_identity);
  const double kd = 10 * d, md = 20 * dp;
  const double predicted = kd * md * std::abs(1 - 2 * kPi / (n * d * dp));
  EXPECT_LE(window_pairing_deviation(p), predicted * (1 + 1e-9));
}

TEST(AdjointPair, TowerExactIdentity) {
  for (std::int64_t p : {2, 3, 5}) {
    const AdjointPair pair = build_adjoint_pair_tower(p, 2, 2, 1.0);
    EXPECT_LE(pairing_identity_deviation(pair), 1e-10);
  }
  EXPECT_THROW(build_adjoint_pair_tower(3, 1, 1, 2.2), ParameterError);
}

TEST(StrongAdjointness, CircleSample) {
  const auto tuples = sweeps::circle_tuples();
  ASSERT_GE(tuples.size(), 100u);
  for (std::size_t i = 0; i < tuples.size(); i += 17) {
    const auto& t = tuples[i];
    const AdjointPair p = build_adjoint_pair_circle(t.n, t.alpha, t.r);
    SCOPED_TRACE("n=" + std::to_string(t.n) + " r=" + std::to_string(t.r));
    expect_certified(verify_strong_adjointness(p, t.alpha, t.eps, SetDescriptor::arc(t.s), SetDescriptor::integer_ball(0)));
  }
}

TEST(StrongAdjointness, RealsSample) {
  const auto tuples = sweeps::reals_tuples();
  ASSERT_GE(tuples.size(), 100u);
  for (std::size_t i = 0; i < tuples.size(); i += 29) {
    const auto& t = tuples[i];
    const AdjointPair p = build_adjoint_pair_reals(t.n, t.d, t.alpha, t.r, t.rho);
    SCOPED_TRACE("n=" + std::to_string(t.n) + " d=" + std::to_string(t.d));
    expect_certified(verify_strong_adjointness(p, t.alpha, t.eps, SetDescriptor::interval(t.s),
                                               SetDescriptor::interval(t.sigma)));
  }
}

TEST(StrongAdjointness, TowerWitnessedByUAndOmega) {
  const auto tuples = sweeps::tower_tuples();
  for (std::size_t i = 0; i < tuples.size(); i += 4) {
    const auto& t = tuples[i];
    if (t.alpha > kPi / 3 + 1e-15) continue;
    const AdjointPair p = build_adjoint_pair_tower(t.p, t.j, t.k, t.alpha);
    expect_certified(verify_strong_adjointness(p, t.alpha, t.eps, p.sets.u, p.sets.omega));
  }
}

TEST(StrongAdjointness, ClausesReportedSeparately) {
  const AdjointPair p = build_adjoint_pair_circle(64, kPi / 3, 2 * kPi * 3 / 64);
  // V too large: not inside U.
  const ApproxCertificate c = verify_strong_adjointness(p, kPi / 3, 0.5, SetDescriptor::arc(1.0), SetDescriptor::integer_ball(0));
  EXPECT_FALSE(c.check("hypotheses").passed);
  // V too small to cover the circle.
  const ApproxCertificate c2 = verify_strong_adjointness(p, kPi / 3, 0.5, SetDescriptor::arc(0.01), SetDescriptor::integer_ball(0));
  EXPECT_TRUE(c2.check("hypotheses").passed);
  EXPECT_FALSE(c2.check("eta-KV").passed);
  EXPECT_FALSE(c2.certified());
  std::ostringstream os;
  write_certificate_csv(os, c2);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "check,passed,worst,bound,test_set,witness");
}

TEST(BohrTransfer, TowerAndCircle) {
  const AdjointPair t = build_adjoint_pair_tower(3, 2, 2, 1.0);
  const BoundReport rt = check_bohr_transfer(t, 0.3, t.sets.u, t.sets.omega, SetDescriptor::subgroup_level(1),
                                             SetDescriptor::subgroup_level(1));
  EXPECT_TRUE(rt.holds()) << (rt.witness ? rt.witness->description : "");

  const double r = 2 * kPi * 4 / 256, alpha = kPi / 3, eps = alpha / 2;
  const AdjointPair c = build_adjoint_pair_circle(256, alpha, r);
  const SetDescriptor v = SetDescriptor::arc(0.95 * r * eps / alpha);
  const BoundReport rc = check_bohr_transfer(c, eps, v, SetDescriptor::integer_ball(0), c.sets.u, SetDescriptor::integer_ball(0));
  EXPECT_TRUE(rc.holds()) << (rc.witness ? rc.witness->description : "");

  const BoundReport bad = check_bohr_transfer(c, eps, v, SetDescriptor::integer_ball(0), SetDescriptor::arc(r / 2),
                                              SetDescriptor::integer_ball(0));
  EXPECT_TRUE(bad.hypothesis_failed());
}
