#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "finharm/bohr_spectral.hpp"
#include "frozen.hpp"

using namespace finharm;

namespace {

constexpr double kPi = std::numbers::pi;

Subset cyclic_set(const GroupSpec& g, std::initializer_list<std::int64_t> r, Side side = Side::Group) {
  std::vector<std::size_t> idx;
  for (std::int64_t x : r) idx.push_back(g.index_of_residues(std::vector<std::int64_t>{x}));
  return Subset::from_indices(g, idx, side);
}

std::vector<std::int64_t> residues_of(const Subset& s) {
  std::vector<std::int64_t> out;
  for (std::size_t i : s.indices()) out.push_back(s.group().residues(i)[0]);
  std::sort(out.begin(), out.end());
  return out;
}

Signal z6_subgroup_signal() {
  const GroupSpec z6({6});
  return indicator(cyclic_set(z6, {0, 3}), 1.0 / 6.0);
}

}  // namespace

TEST(Bohr, Z12Example) {
  const GroupSpec z12({12});
  const Subset b = bohr(cyclic_set(z12, {0, 1, -1}), kPi / 3);
  EXPECT_EQ(b.side(), Side::Dual);
  const std::vector<std::int64_t> want(oracle::kBohrZ12.begin(), oracle::kBohrZ12.end());
  EXPECT_EQ(residues_of(b), want);
}

TEST(Bohr, FullAngleGivesWholeDual) {
  const GroupSpec g({6, 4});
  EXPECT_EQ(bohr(Subset::whole(g), kPi).size(), g.count());
}

TEST(Bohr, SubgroupGivesAnnihilator) {
  for (const GroupSpec& g : abelian_groups_up_to(48)) {
    for (const Subset& h : all_subgroups(g)) EXPECT_EQ(bohr(h, kPi / 2), annihilator(h));
  }
}

TEST(Bohr, GaloisLaws) {
  std::mt19937_64 rng(17);
  for (const GroupSpec& g : abelian_groups_up_to(40)) {
    std::uniform_int_distribution<std::size_t> pick(0, g.count() - 1);
    std::vector<std::size_t> small{pick(rng), pick(rng)};
    std::vector<std::size_t> large = small;
    large.push_back(pick(rng));
    const Subset a = Subset::from_indices(g, small), b = Subset::from_indices(g, large);
    for (double alpha : {kPi / 6, kPi / 3, kPi / 2}) {
      EXPECT_TRUE(bohr(b, alpha).is_subset_of(bohr(a, alpha)));
      EXPECT_TRUE(bohr(a, alpha / 2).is_subset_of(bohr(a, alpha)));
      EXPECT_TRUE(a.is_subset_of(bohr(bohr(a, alpha), alpha)));
      const Subset ba = bohr(a, alpha);
      EXPECT_TRUE(ba.is_symmetric());
      EXPECT_TRUE(ba.contains_index(0));
    }
  }
}

TEST(Spec, Examples) {
  const Signal f = z6_subgroup_signal();
  EXPECT_EQ(residues_of(spec(f, 0.5)), (std::vector<std::int64_t>{-2, 0, 2}));
  EXPECT_EQ(spec(f, 0.0).size(), 6u);
  EXPECT_EQ(spec(f, 1.0 + 1e-9).size(), 0u);
  EXPECT_TRUE(spec(f, 0.9).is_subset_of(spec(f, 0.2)));
}

TEST(EnergyLowerBound, Z6EqualityCase) {
  const Signal f = z6_subgroup_signal();
  const BoundReport r = check_energy_lower_bound(f, cyclic_set(GroupSpec({6}), {0, 3}));
  ASSERT_TRUE(r.holds());
  const double exact = static_cast<double>(oracle::kEnergyZ6Num) / static_cast<double>(oracle::kEnergyZ6Den);
  EXPECT_NEAR(r.lhs, exact, 1e-12);
  EXPECT_NEAR(r.rhs, exact, 1e-12);
}

TEST(EnergyLowerBound, DeltaEquality) {
  // Both sides are evaluated under d = 1/|G|, whatever scale the signal carries.
  const GroupSpec g({10});
  const BoundReport r = check_energy_lower_bound(indicator(Subset::identity(g), 1.0), Subset::identity(g));
  ASSERT_TRUE(r.holds());
  EXPECT_NEAR(r.lhs, 1e-3, 1e-15);
  EXPECT_NEAR(r.rhs, 1e-3, 1e-15);
}

TEST(EnergyLowerBound, HypothesisViolation) {
  const GroupSpec g({10});
  const Signal f = indicator(cyclic_set(g, {0, 1}), 0.1);
  const BoundReport r = check_energy_lower_bound(f, cyclic_set(g, {0, 1}));
  EXPECT_TRUE(r.hypothesis_failed());
}

TEST(BohrInSpec, Examples) {
  const GroupSpec g({9});
  const Signal delta = indicator(Subset::identity(g), 1.0);
  for (double alpha : {0.2, 1.0, kPi / 2}) EXPECT_TRUE(check_bohr_in_spec(delta, Subset::identity(g), alpha, std::cos(alpha)).holds());
  const Signal f = z6_subgroup_signal();
  EXPECT_TRUE(check_bohr_in_spec(f, cyclic_set(GroupSpec({6}), {0, 3}), kPi / 3, 0.5).holds());
  EXPECT_TRUE(check_bohr_in_spec(f, cyclic_set(GroupSpec({6}), {0, 3}), kPi / 3, 0.6).hypothesis_failed());
}

TEST(SpecBohrInDiffset, SubgroupAndRemark) {
  const GroupSpec g({12});
  const Subset h = cyclic_set(g, {0, 4, -4});
  const Signal f = indicator(h, 1.0 / 12);
  const double alpha = kPi / 4;
  const double t = diffset_threshold(f, h, alpha);
  EXPECT_TRUE(check_spec_bohr_in_diffset(f, h, alpha, t).holds());
  // f = 1_A with D = A + A: the threshold is sqrt(cos a / (1 + cos a)) / sqrt(sigma(A)).
  const Subset a = cyclic_set(g, {0, 1, 3});
  const Subset aa = sumset(a, a);
  const double sigma = doubling_constant(a).value();
  const double want = std::sqrt(std::cos(alpha) / (1 + std::cos(alpha))) / std::sqrt(sigma);
  EXPECT_NEAR(diffset_threshold(indicator(a, 1.0 / 12), aa, alpha), want, 1e-12);
}

TEST(SpecSizeBounds, DeltaAndSubgroup) {
  const GroupSpec g({8});
  const BoundReport d = check_spec_size_bounds(indicator(Subset::identity(g), 0.125), Subset::identity(g), 1.0);
  ASSERT_TRUE(d.holds());
  EXPECT_NEAR(d.lhs, 8.0, 0.0);
  EXPECT_NEAR(d.param("upper"), 8.0, 1e-12);
  const Subset h = cyclic_set(g, {0, 2, 4, -2});
  const BoundReport s = check_spec_size_bounds(indicator(h, 0.125), h, 1.0);
  ASSERT_TRUE(s.holds());
  EXPECT_NEAR(s.lhs, 2.0, 0.0);
  EXPECT_NEAR(s.param("upper"), 2.0, 1e-12);
}

TEST(SmoothnessDecay, TrivialAndSubgroup) {
  const GroupSpec g({12});
  const Subset h = cyclic_set(g, {0, 3, 6, -3});
  const Signal f = indicator(h, 1.0 / 12);
  const BoundReport c0 = check_smoothness_decay(f, Subset::identity(g), h, 0.5, kPi / 3, 1e-3);
  EXPECT_TRUE(c0.holds());
  const BoundReport ch = check_smoothness_decay(f, h, h, 0.5, kPi / 3, 1e-3);
  EXPECT_TRUE(ch.holds());
  const BoundReport l1 = check_smoothness_decay(f, h, h, 0.5, kPi / 3, 1e-3, ShiftNorm::L1Relative);
  EXPECT_TRUE(l1.holds());
}

TEST(SmoothnessDecay, TriangleOnCyclic) {
  const std::int64_t n = 256;
  const GroupSpec g({n});
  std::vector<Complex> v(g.count(), 0.0);
  for (std::size_t i = 0; i < g.count(); ++i) {
    const std::int64_t x = g.residues(i)[0];
    v[i] = std::max<double>(0.0, 40.0 - static_cast<double>(std::abs(x)));
  }
  const Signal f(g, v, 1.0 / n);
  const Subset c = cyclic_set(g, {0, 1, -1});
  std::vector<std::size_t> didx;
  for (std::size_t i = 0; i < g.count(); ++i) if (std::abs(g.residues(i)[0]) <= 41) didx.push_back(i);
  const Subset d = Subset::from_indices(g, didx);
  const double t = 0.3, alpha = kPi / 3;
  // The triangle moves by at most 1 per unit shift.
  const BoundReport r = check_smoothness_decay(f, c, d, t, alpha, 1.0);
  EXPECT_TRUE(r.holds()) << (r.witness ? r.witness->description : "");
  EXPECT_TRUE(check_smoothness_decay(f, c, d, t, alpha, 50.0).hypothesis_failed());
  EXPECT_TRUE(check_smoothness_decay(f, c, d, t, alpha, 0.5).hypothesis_failed());
}

TEST(ReportCsv, HeaderAndRow) {
  std::ostringstream os;
  write_report_header(os);
  write_report_row(os, check_energy_lower_bound(z6_subgroup_signal(), cyclic_set(GroupSpec({6}), {0, 3})));
  const std::string out = os.str();
  EXPECT_EQ(out.substr(0, out.find('\n')), "statement,params,lhs,rhs,holds,witness");
  EXPECT_NE(out.find("energy_lower_bound"), std::string::npos);
}
