#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "finharm/errors.hpp"
#include "finharm/lifting_transform.hpp"
#include "frozen.hpp"

using namespace finharm;

namespace {

constexpr double kPi = std::numbers::pi;

// Arc radius 2 pi (a + 1/2) / n: every translate holds exactly 2a + 1 lattice points almost everywhere.
double half_aligned(std::int64_t n, std::int64_t a) { return 2 * kPi * (static_cast<double>(a) + 0.5) / static_cast<double>(n); }

Signal constant_signal(const GroupSpec& g, Complex v, double d) { return Signal(g, std::vector<Complex>(g.count(), v), d); }

AdjointPair gaussian_pair() {
  // alpha = 2 pi 512 / 4096 = pi / 4, r = d, rho = 16 d'.
  const std::int64_t n = 4096;
  const double d = 0.05, dp = 2 * kPi / (n * d);
  return build_adjoint_pair_reals(n, d, kPi / 4, d, 16 * dp);
}

}  // namespace

TEST(ScalingD, LatticeCounts) {
  const ApproxMap c = build_circle_approx(64);
  EXPECT_NEAR(scaling_d(c, SetDescriptor::arc(0.3)), (0.3 / kPi) / oracle::kArcCount_64, 1e-15);
  const ApproxMap c2 = build_circle_approx(1000);
  EXPECT_NEAR(scaling_d(c2, SetDescriptor::arc(0.05)), (0.05 / kPi) / oracle::kArcCount_1000, 1e-15);
  EXPECT_NEAR(scaling_d(c2, SetDescriptor::arc(half_aligned(1000, 7))), 1e-3, 1e-15);
  const ApproxMap r = build_real_approx(1000, 0.1);
  for (double rad : {0.05, 0.17, 0.35, 1.0}) {
    const double want = 2 * rad / (2 * std::floor(rad / 0.1 + 1e-9) + 1);
    EXPECT_NEAR(scaling_d(r, SetDescriptor::interval(rad)), want, 1e-14) << rad;
  }
  EXPECT_THROW(scaling_d(tabulated_approx(GroupSpec({1}), LcaModel::reals(), {LcaPoint::reals(5.0)}), SetDescriptor::interval(1.0)),
               DomainError);
}

TEST(Measures, TotalVariationAndTransforms) {
  const LcaModel c = LcaModel::circle();
  const MeasureModel pm = MeasureModel::point_mass(c, LcaPoint::circle(0.5), Complex(0, 2));
  EXPECT_NEAR(pm.total_variation(), 2.0, 1e-15);
  EXPECT_NEAR(std::abs(fourier_stieltjes(pm, LcaPoint::integer_point(3)) - Complex(0, 2) * std::polar(1.0, -1.5)), 0.0, 1e-15);
  const MeasureModel haar = MeasureModel::haar(c);
  EXPECT_NEAR(haar.total_variation(), 1.0, 1e-9);
  EXPECT_NEAR(std::abs(fourier_stieltjes(haar, LcaPoint::integer_point(0)) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(fourier_stieltjes(haar, LcaPoint::integer_point(4))), 0.0, 1e-15);
  EXPECT_NEAR(measure_of(haar, LcaPoint::circle(1.0), SetDescriptor::arc(0.2)).real(), 0.2 / kPi, 1e-15);
  EXPECT_THROW(MeasureModel::haar(LcaModel::reals()), UnsupportedError);
}

TEST(WeakLifting, HaarOnCircleMatchesLatticeOracle) {
  const ApproxMap eta = build_circle_approx(256);
  const Signal f = constant_signal(eta.source, 1.0, 1.0 / 256);
  const LiftingReport r = is_weak_lifting(f, MeasureModel::haar(LcaModel::circle()), eta, SetDescriptor::arc(0.3),
                                          SetDescriptor::whole(), 0.05, 4096);
  EXPECT_NEAR(r.worst_deviation, oracle::kHaarLiftDev_256, 1e-12);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.grid_size, 4096u);
  EXPECT_EQ(r.mode, LiftingMode::WeakLifting);
  const LiftingReport inf = is_weak_lifting(f, MeasureModel::haar(LcaModel::circle()), eta, SetDescriptor::arc(0.3),
                                            SetDescriptor::whole(), std::numeric_limits<double>::infinity(), 512);
  EXPECT_TRUE(inf.passed);
}

TEST(WeakLifting, HalfAlignedArcIsExact) {
  const ApproxMap eta = build_circle_approx(200);
  const Signal f = constant_signal(eta.source, 1.0, 1.0 / 200);
  const LiftingReport r = is_weak_lifting(f, MeasureModel::haar(LcaModel::circle()), eta,
                                          SetDescriptor::arc(half_aligned(200, 3)), SetDescriptor::whole(), 1e-9);
  EXPECT_TRUE(r.passed);
  EXPECT_LE(r.worst_deviation, 1e-12);
}

TEST(WeakLifting, PointMassAtZero) {
  const std::int64_t n = 128;
  const ApproxMap eta = build_circle_approx(n);
  const SetDescriptor u = SetDescriptor::arc(0.2);
  const double d = scaling_d(eta, u);
  std::vector<Complex> v(eta.source.count(), 0.0);
  v[0] = 1.0 / d;
  const Signal f(eta.source, v, d);
  const LiftingReport r = is_weak_lifting(f, MeasureModel::point_mass(LcaModel::circle(), LcaPoint::circle(0.0)), eta, u,
                                          SetDescriptor::whole(), 1e-9);
  EXPECT_TRUE(r.passed);
  EXPECT_LE(r.worst_deviation, 1e-9);
}

TEST(Approximation, CircleTrigPolyModulus) {
  const ApproxMap eta = build_circle_approx(90);
  const RefFunction f = RefFunction::trig_poly(LcaModel::circle(), -1, {0.5, 1.0, 0.5});
  const Signal s = sample_lifting(f, eta, 1.0 / 90);
  for (double r : {0.1, 0.3}) {
    EXPECT_TRUE(is_approximation(s, f, eta, SetDescriptor::arc(r), SetDescriptor::whole(), r).passed) << r;
  }
  EXPECT_FALSE(is_approximation(s, f, eta, SetDescriptor::arc(0.3), SetDescriptor::whole(), 0.01).passed);
  const RefFunction one = RefFunction::trig_poly(LcaModel::circle(), 0, {2.0});
  const Signal c = sample_lifting(one, eta, 1.0 / 90);
  EXPECT_TRUE(is_approximation(c, one, eta, SetDescriptor::arc(0.3), SetDescriptor::whole(), 0.0).passed);
}

TEST(Delta1, ConstantReducesToCountRatio) {
  const ApproxMap eta = build_circle_approx(256);
  const RefFunction one = RefFunction::trig_poly(LcaModel::circle(), 0, {1.0});
  const double d1 = delta1_of_approx(one, eta, SetDescriptor::arc(0.3), SetDescriptor::whole(), 0.0, 4096);
  EXPECT_NEAR(d1, oracle::kHaarLiftDev_256, 1e-12);
  // The lifting check of the sampled function agrees with the implied accuracy.
  const Signal s = sample_lifting(one, eta, 1.0 / 256);
  const LiftingReport r = is_lifting(s, one, eta, SetDescriptor::arc(0.3), SetDescriptor::whole(), d1 * (1 + 1e-9), 4096);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.mode, LiftingMode::Lifting);
}

TEST(ModifiedFt, TrivialAndGeometric) {
  const std::int64_t n = 24;
  const ApproxMap eta = build_circle_approx(n);
  const Signal f = constant_signal(eta.source, 1.0, 1.0 / n);
  EXPECT_NEAR(std::abs(modified_ft(f, eta, LcaPoint::integer_point(0)) - 1.0), 0.0, 1e-14);
  for (std::int64_t m : {1, 5, 23, 24, 48, -24}) {
    const double want = m % n == 0 ? 1.0 : 0.0;
    EXPECT_NEAR(std::abs(modified_ft(f, eta, LcaPoint::integer_point(m)) - want), 0.0, 1e-13) << m;
  }
}

TEST(ModifiedFt, BridgeIdentityOnExactPairs) {
  const AdjointPair p = build_adjoint_pair_circle(64, kPi / 3, half_aligned(64, 2));
  std::vector<Complex> v(64);
  for (std::size_t i = 0; i < 64; ++i) v[i] = Complex(std::sin(0.3 * i), std::cos(0.11 * i * i));
  const Signal f(p.eta.source, v, p.d);
  const Spectrum fh = dft(f);
  for (std::size_t g = 0; g < 64; ++g) {
    EXPECT_NEAR(std::abs(modified_ft(f, p.eta, p.phi(g)) - fh[g]), 0.0, 1e-10) << g;
  }
}

TEST(Transform, TrigPolyExactForAllSmallN) {
  const RefFunction f = RefFunction::trig_poly(LcaModel::circle(), -1, {0.5, 1.0, 0.5});
  for (std::int64_t n = 3; n <= 300; ++n) {
    const ApproxMap eta = build_circle_approx(n);
    const Spectrum fh = dft(sample_lifting(f, eta, 1.0 / static_cast<double>(n)));
    for (std::size_t g = 0; g < fh.group().count(); ++g) {
      const std::int64_t m = fh.group().residues(g)[0];
      const double want = m == 0 ? 1.0 : (std::abs(m) == 1 ? 0.5 : 0.0);
      ASSERT_NEAR(std::abs(fh[g] - want), 0.0, 1e-12) << "n=" << n << " m=" << m;
    }
  }
}

TEST(Transform, GaussianWithinOneMicro) {
  const AdjointPair p = gaussian_pair();
  const RefFunction g = RefFunction::gaussian(LcaModel::reals(), 1.0);
  std::vector<LcaPoint> grid;
  for (const auto& row : oracle::kGaussian) grid.push_back(LcaPoint::reals(row.gamma));
  const TransformErrorReport r = transform_experiment(g, p, grid);
  ASSERT_EQ(r.rows.size(), oracle::kGaussian.size());
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    EXPECT_LE(r.rows[i].mft_err, 1e-6);
    EXPECT_NEAR(r.rows[i].mft.real(), oracle::kGaussian[i].riemann8x, 1e-12);
    EXPECT_NEAR(r.rows[i].reference.real(), oracle::kGaussian[i].exact, 1e-14);
  }
  EXPECT_LE(r.sup_mft_err, 1e-6);
  std::ostringstream os;
  write_transform_csv(os, r);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "chi,ref_re,ref_im,mft_err,dft_err,bound,pass");
}

TEST(Transform, CharacterGrid) {
  const auto pts = character_grid(LcaModel::reals(), SetDescriptor::interval(5.0), 21);
  ASSERT_EQ(pts.size(), 21u);
  EXPECT_NEAR(pts.front().real, -5.0, 1e-15);
  EXPECT_NEAR(pts[10].real, 0.0, 1e-15);
  EXPECT_EQ(character_grid(LcaModel::integers(), SetDescriptor::integer_ball(3), 100).size(), 7u);
}

TEST(MeasureTransformBound, PointMassAndHaarOnCircle) {
  const std::int64_t n = 64;
  const double alpha = kPi / 3;
  const AdjointPair p = build_adjoint_pair_circle(n, alpha, half_aligned(n, 2));
  const auto grid = character_grid(LcaModel::integers(), p.sets.gamma, 1);
  ASSERT_FALSE(grid.empty());

  std::vector<Complex> v(n, 0.0);
  v[0] = 1.0 / p.d;
  const BoundReport pm = check_measure_transform_bound(MeasureModel::point_mass(LcaModel::circle(), LcaPoint::circle(0.0)),
                                                       Signal(p.eta.source, v, p.d), p, grid, 0.01);
  EXPECT_TRUE(pm.holds()) << (pm.witness ? pm.witness->description : "");
  EXPECT_NEAR(pm.rhs, 5 * alpha, 1e-12);
  EXPECT_LE(pm.lhs, 1e-12);

  const BoundReport haar = check_measure_transform_bound(MeasureModel::haar(LcaModel::circle()),
                                                         constant_signal(p.eta.source, 1.0, p.d), p, grid, 0.01);
  EXPECT_TRUE(haar.holds()) << (haar.witness ? haar.witness->description : "");
  EXPECT_LE(haar.lhs, 1e-12);

  // delta above alpha violates the hypotheses.
  EXPECT_TRUE(check_measure_transform_bound(MeasureModel::haar(LcaModel::circle()), constant_signal(p.eta.source, 1.0, p.d), p,
                                            grid, 2.0)
                  .hypothesis_failed());
}
