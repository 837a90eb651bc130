#pragma once

#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace finharm {

/// Default upper bound on the number of points any enumeration may visit.
inline constexpr std::size_t kDefaultEnumerationCap = std::size_t{1} << 24;

/// Reduce x modulo n into the absolutely smallest remainder range (-n/2, n/2].
std::int64_t normalize_residue(std::int64_t x, std::int64_t n);

/// Principal argument in (-pi, pi] of exp(2 pi i k / m) for an integer turn k.
double turn_arg(std::int64_t k, std::int64_t m);

struct GroupElement {
  std::vector<std::int64_t> residues;
  auto operator<=>(const GroupElement&) const = default;
};

/// A character of a product of cyclic groups, written with the same residue
/// tuple as the element it is identified with under the standard pairing.
struct Character {
  std::vector<std::int64_t> residues;
  auto operator<=>(const Character&) const = default;
};

struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Ratio&) const = default;
};

/**
 * A finite abelian group Z_{n_1} x ... x Z_{n_r}.
 *
 * Points are addressed either by residue tuples or by a canonical index in
 * mixed-radix order with the first factor most significant; digit j of an
 * index is the representative in [0, n_j) of residue j.
 */
class GroupSpec {
 public:
  explicit GroupSpec(std::vector<std::int64_t> orders);
  static GroupSpec cyclic(std::int64_t n);

  const std::vector<std::int64_t>& orders() const { return orders_; }
  std::size_t rank() const { return orders_.size(); }
  std::int64_t size() const { return size_; }
  std::size_t count() const { return static_cast<std::size_t>(size_); }
  std::size_t stride(std::size_t j) const { return strides_[j]; }

  bool operator==(const GroupSpec& other) const { return orders_ == other.orders_; }

  GroupSpec product(const GroupSpec& other) const;
  std::string to_string() const;

  // Index <-> coordinates.
  std::size_t index_of_residues(std::span<const std::int64_t> residues) const;
  std::size_t index(const GroupElement& a) const;
  std::size_t index(const Character& g) const;
  void digits(std::size_t index, std::span<std::int64_t> out) const;
  std::vector<std::int64_t> residues(std::size_t index) const;
  GroupElement element(std::size_t index) const { return {residues(index)}; }
  Character character(std::size_t index) const { return {residues(index)}; }

  bool owns(const GroupElement& a) const;
  bool owns(const Character& g) const;

  // Arithmetic on canonical indices.
  std::size_t add_index(std::size_t a, std::size_t b) const;
  std::size_t neg_index(std::size_t a) const;
  std::size_t sub_index(std::size_t a, std::size_t b) const { return add_index(a, neg_index(b)); }

  GroupElement zero() const;
  GroupElement add(const GroupElement& a, const GroupElement& b) const;
  GroupElement neg(const GroupElement& a) const;
  GroupElement sub(const GroupElement& a, const GroupElement& b) const;

  /// Integer k in [0, |G|) with gamma(a) = exp(2 pi i k / |G|), computed exactly.
  std::int64_t phase_turn(std::size_t a, std::size_t gamma) const;
  std::int64_t phase_turn(const GroupElement& a, const Character& gamma) const;

  /// Per-factor coefficients c_j = a_j |G| / n_j mod |G|, so that the turn of
  /// gamma(a) is sum_j gamma_j c_j mod |G| for any digit tuple gamma.
  std::vector<std::int64_t> phase_coefficients(std::size_t a) const;

  std::complex<double> pairing(const GroupElement& a, const Character& gamma) const;
  std::complex<double> pairing_index(std::size_t a, std::size_t gamma) const;
  double pairing_arg(const GroupElement& a, const Character& gamma) const;
  double pairing_arg_index(std::size_t a, std::size_t gamma) const;

 private:
  void check_shape(std::size_t n) const;

  std::vector<std::int64_t> orders_;
  std::vector<std::size_t> strides_;
  std::vector<std::int64_t> cofactors_;  // |G| / n_j
  std::int64_t size_ = 1;
};

/// Which side of the duality a subset lives on.
enum class Side { Group, Dual };

inline Side opposite(Side s) { return s == Side::Group ? Side::Dual : Side::Group; }

/// An immutable deduplicated set of points of G (or of its dual).
class Subset {
 public:
  Subset(GroupSpec group, Side side = Side::Group);

  static Subset from_indices(GroupSpec group, std::vector<std::size_t> indices,
                             Side side = Side::Group);
  static Subset from_mask(GroupSpec group, const std::vector<bool>& mask,
                          Side side = Side::Group);
  static Subset from_elements(GroupSpec group, const std::vector<GroupElement>& elems);
  static Subset from_characters(GroupSpec group, const std::vector<Character>& chars);
  static Subset whole(GroupSpec group, Side side = Side::Group);
  static Subset identity(GroupSpec group, Side side = Side::Group);

  const GroupSpec& group() const { return group_; }
  Side side() const { return side_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  const std::vector<std::size_t>& indices() const { return indices_; }
  const std::vector<bool>& mask() const { return mask_; }

  bool contains_index(std::size_t i) const { return i < mask_.size() && mask_[i]; }
  bool contains(const GroupElement& a) const;
  bool contains(const Character& g) const;

  std::vector<GroupElement> elements() const;
  std::vector<Character> characters() const;

  bool is_symmetric() const;
  bool is_subgroup() const;
  bool is_subset_of(const Subset& other) const;

  /// The same index set viewed on the other side of the duality.
  Subset as_side(Side side) const;

  bool operator==(const Subset& other) const;

 private:
  GroupSpec group_;
  Side side_;
  std::vector<std::size_t> indices_;
  std::vector<bool> mask_;
};

Subset sumset(const Subset& a, const Subset& b);
Subset difference_set(const Subset& a, const Subset& b);
Subset negate(const Subset& a);
Subset set_union(const Subset& a, const Subset& b);
Ratio doubling_constant(const Subset& a);

/// Points of the opposite side trivial on every member of a, in exact integers.
Subset annihilator(const Subset& a);

/// Smallest subgroup containing a.
Subset generated_subgroup(const Subset& a);

std::vector<GroupElement> enumerate(const GroupSpec& g, std::size_t cap = kDefaultEnumerationCap);
std::vector<Character> enumerate_characters(const GroupSpec& g,
                                            std::size_t cap = kDefaultEnumerationCap);

/// One representative (in primary decomposition) of every isomorphism class
/// of abelian groups of order at most max_order.
std::vector<GroupSpec> abelian_groups_up_to(std::int64_t max_order);

/// Every subgroup of g; throws ResourceError beyond `cap` subgroups.
std::vector<Subset> all_subgroups(const GroupSpec& g, std::size_t cap = 1u << 16);

/// Every cyclic subgroup of g, each listed once.
std::vector<Subset> cyclic_subgroups(const GroupSpec& g);

/// The subgroups k G and G[k] = {x : k x = 0} for every divisor k of the exponent.
std::vector<Subset> torsion_and_multiple_subgroups(const GroupSpec& g);

std::string to_string(const GroupElement& a);
std::string to_string(const Character& g);

}  // namespace finharm
