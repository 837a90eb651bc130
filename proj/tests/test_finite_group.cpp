#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <set>

#include "finharm/errors.hpp"
#include "finharm/finite_group.hpp"
#include "frozen.hpp"

using namespace finharm;

namespace {

GroupElement el(std::vector<std::int64_t> r) { return GroupElement{std::move(r)}; }
Character ch(std::vector<std::int64_t> r) { return Character{std::move(r)}; }

std::vector<std::int64_t> residues_of(const Subset& s) {
  std::vector<std::int64_t> out;
  for (std::size_t i : s.indices()) out.push_back(s.group().residues(i)[0]);
  std::sort(out.begin(), out.end());
  return out;
}

GroupSpec random_group(std::mt19937_64& rng, std::int64_t max_size) {
  std::uniform_int_distribution<int> rank_d(1, 3);
  for (;;) {
    const int rank = rank_d(rng);
    std::vector<std::int64_t> orders;
    std::int64_t size = 1;
    for (int i = 0; i < rank; ++i) {
      std::uniform_int_distribution<std::int64_t> o(1, 40);
      orders.push_back(o(rng));
      size *= orders.back();
    }
    if (size <= max_size) return GroupSpec(orders);
  }
}

}  // namespace

TEST(GroupSpec, RejectsBadOrders) {
  EXPECT_THROW(GroupSpec(std::vector<std::int64_t>{}), DomainError);
  EXPECT_THROW(GroupSpec({0}), DomainError);
  EXPECT_THROW(GroupSpec({-3}), DomainError);
  EXPECT_THROW(GroupSpec({1 << 30, 1 << 30, 1 << 30}), Error);
}

TEST(GroupSpec, ResidueRange) {
  EXPECT_EQ(normalize_residue(6, 5), 1);
  EXPECT_EQ(normalize_residue(2, 4), 2);
  EXPECT_EQ(normalize_residue(-2, 4), 2);
  EXPECT_EQ(normalize_residue(3, 7), 3);
  EXPECT_EQ(normalize_residue(4, 7), -3);
}

TEST(GroupArithmetic, SpecExamples) {
  const GroupSpec z5({5});
  EXPECT_EQ(z5.add(el({2}), el({-1})), el({1}));  // 2 + 4 = 6 = 1
  const GroupSpec z4({4});
  EXPECT_EQ(z4.add(el({1}), el({1})), el({2}));
  const GroupSpec z4z3({4, 3});
  EXPECT_EQ(z4z3.add(el({1, -1}), el({1, -1})), el({2, 1}));  // (1,2)+(1,2) = (2,1)
}

TEST(GroupArithmetic, ShapeMismatch) {
  const GroupSpec z4({4});
  EXPECT_THROW(z4.add(el({1, 0}), el({1})), ShapeError);
}

TEST(GroupArithmetic, AxiomsOnRandomTriples) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const GroupSpec g = random_group(rng, 10000);
    std::uniform_int_distribution<std::size_t> pick(0, g.count() - 1);
    for (int k = 0; k < 20; ++k) {
      const std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
      EXPECT_EQ(g.add_index(g.add_index(a, b), c), g.add_index(a, g.add_index(b, c)));
      EXPECT_EQ(g.add_index(a, b), g.add_index(b, a));
      EXPECT_EQ(g.add_index(a, g.index(g.zero())), a);
      EXPECT_EQ(g.add_index(a, g.neg_index(a)), g.index(g.zero()));
    }
  }
}

TEST(Pairing, SpecExamples) {
  const GroupSpec z4({4});
  const auto v = z4.pairing(el({1}), ch({1}));
  EXPECT_NEAR(v.real(), 0.0, 1e-15);
  EXPECT_NEAR(v.imag(), 1.0, 1e-15);
  const GroupSpec z6({6});
  const auto w = z6.pairing(el({3}), ch({2}));
  EXPECT_NEAR(std::abs(w - std::complex<double>(1.0)), 0.0, 1e-15);
  EXPECT_EQ(z6.phase_turn(el({3}), ch({2})), 0);
  for (std::size_t a = 0; a < z6.count(); ++a) EXPECT_EQ(z6.pairing_index(a, z6.index(ch({0}))), std::complex<double>(1.0));
}

TEST(Pairing, BimultiplicativeAndUnitModulus) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const GroupSpec g = random_group(rng, 10000);
    std::uniform_int_distribution<std::size_t> pick(0, g.count() - 1);
    for (int k = 0; k < 20; ++k) {
      const std::size_t a = pick(rng), b = pick(rng), gm = pick(rng), h = pick(rng);
      EXPECT_NEAR(std::abs(g.pairing_index(a, gm)), 1.0, 1e-12);
      const auto lhs = g.pairing_index(g.add_index(a, b), gm);
      EXPECT_NEAR(std::abs(lhs - g.pairing_index(a, gm) * g.pairing_index(b, gm)), 0.0, 1e-12);
      const auto rhs = g.pairing_index(a, g.add_index(gm, h));
      EXPECT_NEAR(std::abs(rhs - g.pairing_index(a, gm) * g.pairing_index(a, h)), 0.0, 1e-12);
    }
  }
}

TEST(Annihilator, SpecExamples) {
  const GroupSpec z6({6});
  const Subset a = Subset::from_elements(z6, {el({0}), el({3})});
  const Subset ann = annihilator(a);
  EXPECT_EQ(ann.side(), Side::Dual);
  const std::vector<std::int64_t> want(oracle::kAnnihilatorZ6.begin(), oracle::kAnnihilatorZ6.end());
  EXPECT_EQ(residues_of(ann), want);
  EXPECT_EQ(annihilator(Subset::identity(z6)).size(), 6u);
  const GroupSpec z4z2({4, 2});
  const Subset full = annihilator(Subset::whole(z4z2));
  ASSERT_EQ(full.size(), 1u);
  EXPECT_TRUE(full.contains(ch({0, 0})));
}

TEST(Annihilator, DoubleAnnihilatorIsGeneratedSubgroup) {
  std::mt19937_64 rng(3);
  for (const GroupSpec& g : abelian_groups_up_to(64)) {
    std::uniform_int_distribution<std::size_t> pick(0, g.count() - 1);
    for (int k = 0; k < 4; ++k) {
      std::vector<std::size_t> idx{pick(rng), pick(rng)};
      const Subset a = Subset::from_indices(g, idx);
      const Subset ann = annihilator(a);
      EXPECT_TRUE(ann.is_subgroup());
      EXPECT_EQ(annihilator(ann), generated_subgroup(a));
    }
  }
}

TEST(Sumset, SpecExamples) {
  const GroupSpec z8({8});
  const Subset a = Subset::from_elements(z8, {el({0}), el({1})});
  const std::vector<std::int64_t> want8(oracle::kSumsetZ8.begin(), oracle::kSumsetZ8.end());
  EXPECT_EQ(residues_of(sumset(a, a)), want8);
  EXPECT_EQ(doubling_constant(a), (Ratio{3, 2}));

  const GroupSpec z7({7});
  const Subset b = Subset::from_elements(z7, {el({0}), el({1}), el({3})});
  const std::vector<std::int64_t> want7(oracle::kSumsetZ7.begin(), oracle::kSumsetZ7.end());
  EXPECT_EQ(residues_of(sumset(b, b)), want7);
  EXPECT_EQ(doubling_constant(b), (Ratio{2, 1}));

  for (const Subset& h : all_subgroups(GroupSpec({4, 6}))) EXPECT_EQ(doubling_constant(h), (Ratio{1, 1}));
  EXPECT_THROW(doubling_constant(Subset(z8)), DomainError);
}

TEST(Enumerate, CanonicalOrder) {
  const auto z2 = enumerate(GroupSpec({2}));
  ASSERT_EQ(z2.size(), 2u);
  EXPECT_EQ(z2[0], el({0}));
  EXPECT_EQ(z2[1], el({1}));
  const auto z3 = enumerate(GroupSpec({3}));
  ASSERT_EQ(z3.size(), 3u);
  EXPECT_EQ(z3[0], el({0}));
  EXPECT_EQ(z3[1], el({1}));
  EXPECT_EQ(z3[2], el({-1}));
  const auto z22 = enumerate(GroupSpec({2, 2}));
  EXPECT_EQ(std::set<GroupElement>(z22.begin(), z22.end()).size(), 4u);
  EXPECT_THROW(enumerate(GroupSpec({100, 100}), 1000), ResourceError);
}

TEST(Subset, FlagsAreVerified) {
  const GroupSpec z12({12});
  const Subset h = Subset::from_elements(z12, {el({0}), el({4}), el({-4})});
  EXPECT_TRUE(h.is_subgroup());
  EXPECT_TRUE(h.is_symmetric());
  const Subset s = Subset::from_elements(z12, {el({0}), el({1})});
  EXPECT_FALSE(s.is_subgroup());
  EXPECT_FALSE(s.is_symmetric());
}

TEST(SubgroupCatalogue, CountsMatchKnownValues) {
  // Z_p^2 has p + 3 subgroups; Z_n has one per divisor.
  EXPECT_EQ(all_subgroups(GroupSpec({3, 3})).size(), 6u);
  EXPECT_EQ(all_subgroups(GroupSpec({2, 2})).size(), 5u);
  EXPECT_EQ(all_subgroups(GroupSpec({12})).size(), 6u);
  // Z_2 x Z_4 has 8 subgroups.
  EXPECT_EQ(all_subgroups(GroupSpec({2, 4})).size(), 8u);
}
