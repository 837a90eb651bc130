#include "finharm/finite_group.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "finharm/errors.hpp"
#include "wide_int.hpp"

namespace finharm {

namespace {

constexpr std::int64_t kMaxGroupSize = std::int64_t{1} << 62;

std::int64_t floor_mod(std::int64_t x, std::int64_t n) {
  std::int64_t r = x % n;
  return r < 0 ? r + n : r;
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>((static_cast<detail::int128>(a) * b) % m);
}

}  // namespace

std::int64_t normalize_residue(std::int64_t x, std::int64_t n) {
  if (n < 1) throw DomainError("cyclic order must be at least 1");
  std::int64_t r = floor_mod(x, n);
  if (2 * static_cast<detail::int128>(r) > n) r -= n;
  return r;
}

double turn_arg(std::int64_t k, std::int64_t m) {
  std::int64_t r = floor_mod(k, m);
  if (2 * static_cast<detail::int128>(r) > m) r -= m;
  return 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(m);
}

// ---------------------------------------------------------------------------
// GroupSpec
// ---------------------------------------------------------------------------

GroupSpec::GroupSpec(std::vector<std::int64_t> orders) : orders_(std::move(orders)) {
  if (orders_.empty()) throw DomainError("GroupSpec needs at least one cyclic factor");
  detail::int128 size = 1;
  for (std::int64_t n : orders_) {
    if (n < 1) throw DomainError("cyclic factor orders must be >= 1");
    size *= n;
    if (size > kMaxGroupSize) throw ResourceError("group order exceeds the machine range");
  }
  size_ = static_cast<std::int64_t>(size);
  strides_.assign(orders_.size(), 1);
  for (std::size_t j = orders_.size(); j-- > 1;) {
    strides_[j - 1] = strides_[j] * static_cast<std::size_t>(orders_[j]);
  }
  cofactors_.resize(orders_.size());
  for (std::size_t j = 0; j < orders_.size(); ++j) cofactors_[j] = size_ / orders_[j];
}

GroupSpec GroupSpec::cyclic(std::int64_t n) { return GroupSpec({n}); }

GroupSpec GroupSpec::product(const GroupSpec& other) const {
  std::vector<std::int64_t> o = orders_;
  o.insert(o.end(), other.orders_.begin(), other.orders_.end());
  return GroupSpec(std::move(o));
}

std::string GroupSpec::to_string() const {
  std::ostringstream os;
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    if (j) os << 'x';
    os << 'Z' << orders_[j];
  }
  return os.str();
}

void GroupSpec::check_shape(std::size_t n) const {
  if (n != orders_.size()) {
    throw ShapeError("residue tuple of length " + std::to_string(n) + " does not fit " +
                     to_string());
  }
}

std::size_t GroupSpec::index_of_residues(std::span<const std::int64_t> residues) const {
  check_shape(residues.size());
  std::size_t idx = 0;
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    idx += static_cast<std::size_t>(floor_mod(residues[j], orders_[j])) * strides_[j];
  }
  return idx;
}

std::size_t GroupSpec::index(const GroupElement& a) const { return index_of_residues(a.residues); }
std::size_t GroupSpec::index(const Character& g) const { return index_of_residues(g.residues); }

void GroupSpec::digits(std::size_t index, std::span<std::int64_t> out) const {
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    out[j] = static_cast<std::int64_t>((index / strides_[j]) % static_cast<std::size_t>(orders_[j]));
  }
}

std::vector<std::int64_t> GroupSpec::residues(std::size_t index) const {
  if (index >= count()) throw std::out_of_range("group index out of range");
  std::vector<std::int64_t> r(orders_.size());
  digits(index, r);
  for (std::size_t j = 0; j < r.size(); ++j) r[j] = normalize_residue(r[j], orders_[j]);
  return r;
}

namespace {

bool normalized_tuple(const GroupSpec& g, const std::vector<std::int64_t>& r) {
  if (r.size() != g.rank()) return false;
  for (std::size_t j = 0; j < r.size(); ++j) {
    if (normalize_residue(r[j], g.orders()[j]) != r[j]) return false;
  }
  return true;
}

}  // namespace

bool GroupSpec::owns(const GroupElement& a) const { return normalized_tuple(*this, a.residues); }
bool GroupSpec::owns(const Character& g) const { return normalized_tuple(*this, g.residues); }

std::size_t GroupSpec::add_index(std::size_t a, std::size_t b) const {
  std::size_t out = 0;
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    const auto n = static_cast<std::size_t>(orders_[j]);
    std::size_t s = (a / strides_[j]) % n + (b / strides_[j]) % n;
    if (s >= n) s -= n;
    out += s * strides_[j];
  }
  return out;
}

std::size_t GroupSpec::neg_index(std::size_t a) const {
  std::size_t out = 0;
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    const auto n = static_cast<std::size_t>(orders_[j]);
    std::size_t d = (a / strides_[j]) % n;
    out += (d == 0 ? 0 : n - d) * strides_[j];
  }
  return out;
}

GroupElement GroupSpec::zero() const { return {std::vector<std::int64_t>(orders_.size(), 0)}; }

GroupElement GroupSpec::add(const GroupElement& a, const GroupElement& b) const {
  check_shape(a.residues.size());
  check_shape(b.residues.size());
  GroupElement c;
  c.residues.resize(orders_.size());
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    c.residues[j] = normalize_residue(a.residues[j] + b.residues[j], orders_[j]);
  }
  return c;
}

GroupElement GroupSpec::neg(const GroupElement& a) const {
  check_shape(a.residues.size());
  GroupElement c;
  c.residues.resize(orders_.size());
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    c.residues[j] = normalize_residue(-a.residues[j], orders_[j]);
  }
  return c;
}

GroupElement GroupSpec::sub(const GroupElement& a, const GroupElement& b) const {
  return add(a, neg(b));
}

std::int64_t GroupSpec::phase_turn(std::size_t a, std::size_t gamma) const {
  std::int64_t k = 0;
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    const std::int64_t n = orders_[j];
    const auto da = static_cast<std::int64_t>((a / strides_[j]) % static_cast<std::size_t>(n));
    const auto dg = static_cast<std::int64_t>((gamma / strides_[j]) % static_cast<std::size_t>(n));
    k += mul_mod(da, dg, n) * cofactors_[j];
    if (k >= size_) k -= size_;
  }
  return k;
}

std::int64_t GroupSpec::phase_turn(const GroupElement& a, const Character& gamma) const {
  return phase_turn(index(a), index(gamma));
}

std::vector<std::int64_t> GroupSpec::phase_coefficients(std::size_t a) const {
  std::vector<std::int64_t> c(orders_.size());
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    const auto da = static_cast<std::int64_t>((a / strides_[j]) % static_cast<std::size_t>(orders_[j]));
    c[j] = da * cofactors_[j];
  }
  return c;
}

std::complex<double> GroupSpec::pairing_index(std::size_t a, std::size_t gamma) const {
  return std::polar(1.0, turn_arg(phase_turn(a, gamma), size_));
}

std::complex<double> GroupSpec::pairing(const GroupElement& a, const Character& gamma) const {
  return pairing_index(index(a), index(gamma));
}

double GroupSpec::pairing_arg_index(std::size_t a, std::size_t gamma) const {
  return turn_arg(phase_turn(a, gamma), size_);
}

double GroupSpec::pairing_arg(const GroupElement& a, const Character& gamma) const {
  return pairing_arg_index(index(a), index(gamma));
}

// ---------------------------------------------------------------------------
// Subset
// ---------------------------------------------------------------------------

Subset::Subset(GroupSpec group, Side side)
    : group_(std::move(group)), side_(side), mask_(group_.count(), false) {}

Subset Subset::from_indices(GroupSpec group, std::vector<std::size_t> indices, Side side) {
  Subset s(std::move(group), side);
  for (std::size_t i : indices) {
    if (i >= s.mask_.size()) throw std::out_of_range("subset index out of range");
    s.mask_[i] = true;
  }
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  s.indices_ = std::move(indices);
  return s;
}

Subset Subset::from_mask(GroupSpec group, const std::vector<bool>& mask, Side side) {
  if (mask.size() != group.count()) throw ShapeError("subset mask length does not match group");
  Subset s(std::move(group), side);
  s.mask_ = mask;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) s.indices_.push_back(i);
  }
  return s;
}

Subset Subset::from_elements(GroupSpec group, const std::vector<GroupElement>& elems) {
  std::vector<std::size_t> idx;
  idx.reserve(elems.size());
  for (const auto& e : elems) idx.push_back(group.index(e));
  return from_indices(std::move(group), std::move(idx), Side::Group);
}

Subset Subset::from_characters(GroupSpec group, const std::vector<Character>& chars) {
  std::vector<std::size_t> idx;
  idx.reserve(chars.size());
  for (const auto& c : chars) idx.push_back(group.index(c));
  return from_indices(std::move(group), std::move(idx), Side::Dual);
}

Subset Subset::whole(GroupSpec group, Side side) {
  std::vector<std::size_t> idx(group.count());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return from_indices(std::move(group), std::move(idx), side);
}

Subset Subset::identity(GroupSpec group, Side side) {
  return from_indices(std::move(group), {0}, side);
}

bool Subset::contains(const GroupElement& a) const {
  return group_.owns(a) && mask_[group_.index(a)];
}

bool Subset::contains(const Character& g) const {
  return group_.owns(g) && mask_[group_.index(g)];
}

std::vector<GroupElement> Subset::elements() const {
  std::vector<GroupElement> out;
  out.reserve(indices_.size());
  for (std::size_t i : indices_) out.push_back(group_.element(i));
  return out;
}

std::vector<Character> Subset::characters() const {
  std::vector<Character> out;
  out.reserve(indices_.size());
  for (std::size_t i : indices_) out.push_back(group_.character(i));
  return out;
}

bool Subset::is_symmetric() const {
  return std::all_of(indices_.begin(), indices_.end(),
                     [&](std::size_t i) { return mask_[group_.neg_index(i)]; });
}

bool Subset::is_subgroup() const {
  if (!contains_index(0)) return false;
  for (std::size_t a : indices_) {
    for (std::size_t b : indices_) {
      if (!mask_[group_.sub_index(a, b)]) return false;
    }
  }
  return true;
}

bool Subset::is_subset_of(const Subset& other) const {
  if (!(group_ == other.group_)) throw ShapeError("subsets of different groups");
  return std::all_of(indices_.begin(), indices_.end(),
                     [&](std::size_t i) { return other.mask_[i]; });
}

Subset Subset::as_side(Side side) const {
  Subset s = *this;
  s.side_ = side;
  return s;
}

bool Subset::operator==(const Subset& other) const {
  return group_ == other.group_ && side_ == other.side_ && indices_ == other.indices_;
}

// ---------------------------------------------------------------------------
// Combinatorics
// ---------------------------------------------------------------------------

namespace {

void require_same(const Subset& a, const Subset& b) {
  if (!(a.group() == b.group())) throw ShapeError("subsets of different groups");
  if (a.side() != b.side()) throw ShapeError("subsets on different sides of the duality");
}

}  // namespace

Subset sumset(const Subset& a, const Subset& b) {
  require_same(a, b);
  const GroupSpec& g = a.group();
  std::vector<bool> mask(g.count(), false);
  for (std::size_t x : a.indices()) {
    for (std::size_t y : b.indices()) mask[g.add_index(x, y)] = true;
  }
  return Subset::from_mask(g, mask, a.side());
}

Subset difference_set(const Subset& a, const Subset& b) { return sumset(a, negate(b)); }

Subset negate(const Subset& a) {
  std::vector<std::size_t> idx;
  idx.reserve(a.size());
  for (std::size_t x : a.indices()) idx.push_back(a.group().neg_index(x));
  return Subset::from_indices(a.group(), std::move(idx), a.side());
}

Subset set_union(const Subset& a, const Subset& b) {
  require_same(a, b);
  std::vector<bool> mask = a.mask();
  for (std::size_t i : b.indices()) mask[i] = true;
  return Subset::from_mask(a.group(), mask, a.side());
}

Ratio doubling_constant(const Subset& a) {
  if (a.empty()) throw DomainError("doubling constant of the empty set");
  auto num = static_cast<std::int64_t>(sumset(a, a).size());
  auto den = static_cast<std::int64_t>(a.size());
  std::int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

Subset annihilator(const Subset& a) {
  if (a.empty()) throw DomainError("annihilator of the empty set");
  const GroupSpec& g = a.group();
  std::vector<std::vector<std::int64_t>> coeffs;
  coeffs.reserve(a.size());
  for (std::size_t x : a.indices()) coeffs.push_back(g.phase_coefficients(x));
  const std::size_t r = g.rank();
  const std::int64_t size = g.size();
  std::vector<std::int64_t> d(r);
  std::vector<bool> mask(g.count(), false);
  for (std::size_t gamma = 0; gamma < g.count(); ++gamma) {
    g.digits(gamma, d);
    bool trivial = true;
    for (const auto& c : coeffs) {
      detail::int128 k = 0;
      for (std::size_t j = 0; j < r; ++j) k += static_cast<detail::int128>(d[j]) * c[j];
      if (k % size != 0) {
        trivial = false;
        break;
      }
    }
    mask[gamma] = trivial;
  }
  return Subset::from_mask(g, mask, opposite(a.side()));
}

namespace {

// <s, x> for a subgroup mask s: union of the cosets s + m x.
std::vector<bool> adjoin(const GroupSpec& g, const std::vector<bool>& s,
                         const std::vector<std::size_t>& s_idx, std::size_t x) {
  std::vector<bool> out = s;
  std::size_t m = x;
  while (!s[m]) {
    for (std::size_t y : s_idx) out[g.add_index(y, m)] = true;
    m = g.add_index(m, x);
  }
  return out;
}

std::vector<std::size_t> mask_indices(const std::vector<bool>& mask) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) idx.push_back(i);
  }
  return idx;
}

}  // namespace

Subset generated_subgroup(const Subset& a) {
  const GroupSpec& g = a.group();
  std::vector<bool> mask(g.count(), false);
  mask[0] = true;
  for (std::size_t x : a.indices()) {
    if (mask[x]) continue;
    mask = adjoin(g, mask, mask_indices(mask), x);
  }
  return Subset::from_mask(g, mask, a.side());
}

std::vector<GroupElement> enumerate(const GroupSpec& g, std::size_t cap) {
  if (g.count() > cap) throw ResourceError("enumeration of " + g.to_string() + " exceeds cap");
  std::vector<GroupElement> out;
  out.reserve(g.count());
  for (std::size_t i = 0; i < g.count(); ++i) out.push_back(g.element(i));
  return out;
}

std::vector<Character> enumerate_characters(const GroupSpec& g, std::size_t cap) {
  if (g.count() > cap) throw ResourceError("enumeration of " + g.to_string() + " exceeds cap");
  std::vector<Character> out;
  out.reserve(g.count());
  for (std::size_t i = 0; i < g.count(); ++i) out.push_back(g.character(i));
  return out;
}

namespace {

void partitions(int n, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(n, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions(n - p, p, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<GroupSpec> abelian_groups_up_to(std::int64_t max_order) {
  std::vector<GroupSpec> out;
  for (std::int64_t n = 1; n <= max_order; ++n) {
    // Primary factorization of n.
    std::vector<std::pair<std::int64_t, int>> pe;
    std::int64_t m = n;
    for (std::int64_t p = 2; p * p <= m; ++p) {
      int e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      if (e) pe.emplace_back(p, e);
    }
    if (m > 1) pe.emplace_back(m, 1);

    std::vector<std::vector<std::int64_t>> combos{{}};
    for (auto [p, e] : pe) {
      std::vector<std::vector<int>> parts;
      std::vector<int> cur;
      partitions(e, e, cur, parts);
      std::vector<std::vector<std::int64_t>> next;
      for (const auto& base : combos) {
        for (const auto& part : parts) {
          auto orders = base;
          for (int k : part) {
            std::int64_t q = 1;
            for (int i = 0; i < k; ++i) q *= p;
            orders.push_back(q);
          }
          next.push_back(std::move(orders));
        }
      }
      combos = std::move(next);
    }
    for (auto& orders : combos) {
      if (orders.empty()) orders.push_back(1);
      out.emplace_back(std::move(orders));
    }
  }
  return out;
}

std::vector<Subset> all_subgroups(const GroupSpec& g, std::size_t cap) {
  std::set<std::vector<bool>> seen;
  std::vector<std::vector<bool>> frontier;
  std::vector<bool> trivial(g.count(), false);
  trivial[0] = true;
  seen.insert(trivial);
  frontier.push_back(trivial);
  while (!frontier.empty()) {
    std::vector<std::vector<bool>> next;
    for (const auto& s : frontier) {
      const auto s_idx = mask_indices(s);
      for (std::size_t x = 0; x < g.count(); ++x) {
        if (s[x]) continue;
        auto t = adjoin(g, s, s_idx, x);
        if (seen.insert(t).second) {
          if (seen.size() > cap) throw ResourceError("subgroup enumeration exceeds cap");
          next.push_back(std::move(t));
        }
      }
    }
    frontier = std::move(next);
  }
  std::vector<Subset> out;
  out.reserve(seen.size());
  for (const auto& m : seen) out.push_back(Subset::from_mask(g, m));
  return out;
}

std::vector<Subset> cyclic_subgroups(const GroupSpec& g) {
  std::set<std::vector<bool>> seen;
  std::vector<bool> trivial(g.count(), false);
  trivial[0] = true;
  for (std::size_t x = 0; x < g.count(); ++x) {
    seen.insert(adjoin(g, trivial, {0}, x));
  }
  std::vector<Subset> out;
  for (const auto& m : seen) out.push_back(Subset::from_mask(g, m));
  return out;
}

std::vector<Subset> torsion_and_multiple_subgroups(const GroupSpec& g) {
  std::int64_t exponent = 1;
  for (std::int64_t n : g.orders()) exponent = std::lcm(exponent, n);
  std::set<std::vector<bool>> seen;
  for (std::int64_t k = 1; k <= exponent; ++k) {
    if (exponent % k) continue;
    std::vector<bool> multiples(g.count(), false);
    std::vector<bool> torsion(g.count(), false);
    for (std::size_t x = 0; x < g.count(); ++x) {
      std::size_t kx = 0;
      for (std::int64_t i = 0; i < k; ++i) kx = g.add_index(kx, x);
      multiples[kx] = true;
      if (kx == 0) torsion[x] = true;
    }
    seen.insert(multiples);
    seen.insert(torsion);
  }
  std::vector<Subset> out;
  for (const auto& m : seen) out.push_back(Subset::from_mask(g, m));
  return out;
}

namespace {

std::string tuple_string(const std::vector<std::int64_t>& r) {
  std::ostringstream os;
  os << '(';
  for (std::size_t j = 0; j < r.size(); ++j) {
    if (j) os << ',';
    os << r[j];
  }
  os << ')';
  return os.str();
}

}  // namespace

std::string to_string(const GroupElement& a) { return tuple_string(a.residues); }
std::string to_string(const Character& g) { return tuple_string(g.residues); }

}  // namespace finharm
