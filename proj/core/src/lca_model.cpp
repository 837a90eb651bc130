#include "finharm/lca_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "finharm/bohr_spectral.hpp"
#include "finharm/csv.hpp"
#include "finharm/errors.hpp"
#include "wide_int.hpp"

namespace finharm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double principal(double v) {
  double r = std::remainder(v, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

void require_kind(const LcaModel& m, ModelKind k, const char* what) {
  if (m.kind != k) throw DomainError(std::string(what) + " requires a " + to_string(k) + " model, got " + m.name());
}

void require_point(const LcaPoint& x, ModelKind k) {
  if (x.kind != k) throw DomainError("point of kind " + to_string(x.kind) + " used where " + to_string(k) + " is expected");
}

std::int64_t checked_power(std::int64_t p, int e) {
  detail::int128 v = 1;
  for (int i = 0; i < e; ++i) {
    v *= p;
    if (v > (detail::int128{1} << 62)) throw NumericError("p-adic denominator p^" + std::to_string(e) + " exceeds 62 bits");
  }
  return static_cast<std::int64_t>(v);
}

std::int64_t narrow(detail::int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw NumericError("p-adic numerator overflows 64 bits");
  return static_cast<std::int64_t>(v);
}

PAdic canonical_padic(std::int64_t p, detail::int128 num, int exp) {
  if (num == 0) return {0, 0};
  if (exp < 0) {
    num *= checked_power(p, -exp);
    exp = 0;
  }
  while (exp > 0 && num % p == 0) {
    num /= p;
    --exp;
  }
  return {narrow(num), exp};
}

void require_parts(const LcaModel& m, const LcaPoint& x) {
  require_point(x, ModelKind::Product);
  if (x.parts.size() != m.factors.size()) throw ShapeError("product point has the wrong number of parts");
}

double interval_slack(double r) { return 1e-12 * std::max(1.0, r); }

}  // namespace

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::Circle: return "circle";
    case ModelKind::Reals: return "reals";
    case ModelKind::Integers: return "integers";
    case ModelKind::Finite: return "finite";
    case ModelKind::Product: return "product";
    case ModelKind::Tower: return "tower";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// LcaModel
// ---------------------------------------------------------------------------

LcaModel LcaModel::circle(double mass) {
  if (!(mass > 0.0)) throw DomainError("circle Haar mass must be positive");
  LcaModel m;
  m.kind = ModelKind::Circle;
  m.haar_scale = mass;
  return m;
}

LcaModel LcaModel::reals(double period, double lebesgue_multiple) {
  if (period == 0.0) period = kTwoPi;
  if (!(period > 0.0) || !(lebesgue_multiple > 0.0)) throw DomainError("reals period and Haar multiple must be positive");
  LcaModel m;
  m.kind = ModelKind::Reals;
  m.period = period;
  m.haar_scale = lebesgue_multiple;
  return m;
}

LcaModel LcaModel::integers(double point_mass) {
  if (!(point_mass > 0.0)) throw DomainError("integer point mass must be positive");
  LcaModel m;
  m.kind = ModelKind::Integers;
  m.haar_scale = point_mass;
  return m;
}

LcaModel LcaModel::finite_group(GroupSpec g, double point_mass) {
  if (!(point_mass > 0.0)) throw DomainError("finite point mass must be positive");
  LcaModel m;
  m.kind = ModelKind::Finite;
  m.finite = std::move(g);
  m.haar_scale = point_mass;
  return m;
}

LcaModel LcaModel::tower(std::int64_t p, int j, int k, double zp_mass) {
  if (p < 2) throw ParameterError("tower prime must be at least 2");
  for (std::int64_t q = 2; q * q <= p; ++q) {
    if (p % q == 0) throw ParameterError("tower base " + std::to_string(p) + " is not prime");
  }
  if (j < 0 || k < 0) throw ParameterError("tower levels must be non-negative");
  checked_power(p, j + k);
  if (!(zp_mass > 0.0)) throw DomainError("tower Haar mass must be positive");
  LcaModel m;
  m.kind = ModelKind::Tower;
  m.prime = p;
  m.level_j = j;
  m.level_k = k;
  m.haar_scale = zp_mass;
  return m;
}

LcaModel LcaModel::product(std::vector<LcaModel> factors) {
  if (factors.empty()) throw DomainError("product model needs at least one factor");
  LcaModel m;
  m.kind = ModelKind::Product;
  m.factors = std::move(factors);
  return m;
}

LcaModel LcaModel::dual() const {
  switch (kind) {
    case ModelKind::Circle: return integers(1.0 / haar_scale);
    case ModelKind::Integers: return circle(1.0 / haar_scale);
    case ModelKind::Reals: return reals(period, 1.0 / (period * haar_scale));
    case ModelKind::Finite: return finite_group(*finite, 1.0 / (haar_scale * static_cast<double>(finite->size())));
    case ModelKind::Tower: return tower(prime, level_k, level_j, 1.0 / haar_scale);
    case ModelKind::Product: {
      std::vector<LcaModel> d;
      for (const auto& f : factors) d.push_back(f.dual());
      return product(std::move(d));
    }
  }
  throw DomainError("unknown model kind");
}

std::string LcaModel::name() const {
  switch (kind) {
    case ModelKind::Circle: return "T";
    case ModelKind::Integers: return "Z";
    case ModelKind::Reals: return "R";
    case ModelKind::Finite: return finite->to_string();
    case ModelKind::Tower:
      return "Q_" + std::to_string(prime) + "[" + std::to_string(level_j) + "," + std::to_string(level_k) + "]";
    case ModelKind::Product: {
      std::string s;
      for (std::size_t i = 0; i < factors.size(); ++i) s += (i ? " x " : "") + factors[i].name();
      return s;
    }
  }
  return "?";
}

bool LcaModel::same_group(const LcaModel& other) const {
  if (kind != other.kind) return false;
  switch (kind) {
    case ModelKind::Circle:
    case ModelKind::Integers: return true;
    case ModelKind::Reals: return period == other.period;
    case ModelKind::Finite: return *finite == *other.finite;
    case ModelKind::Tower: return prime == other.prime;
    case ModelKind::Product:
      if (factors.size() != other.factors.size()) return false;
      for (std::size_t i = 0; i < factors.size(); ++i) {
        if (!factors[i].same_group(other.factors[i])) return false;
      }
      return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Points
// ---------------------------------------------------------------------------

LcaPoint LcaPoint::circle(double angle) {
  if (!std::isfinite(angle)) throw DomainError("circle angle must be finite");
  LcaPoint x;
  x.kind = ModelKind::Circle;
  x.real = principal(angle);
  return x;
}

LcaPoint LcaPoint::reals(double v) {
  if (!std::isfinite(v)) throw DomainError("real coordinate must be finite");
  LcaPoint x;
  x.kind = ModelKind::Reals;
  x.real = v;
  return x;
}

LcaPoint LcaPoint::integer_point(std::int64_t m) {
  LcaPoint x;
  x.kind = ModelKind::Integers;
  x.integer = m;
  return x;
}

LcaPoint LcaPoint::finite(std::vector<std::int64_t> residues) {
  LcaPoint x;
  x.kind = ModelKind::Finite;
  x.residues = std::move(residues);
  return x;
}

LcaPoint LcaPoint::tower(std::int64_t p, std::int64_t num, int exp) {
  LcaPoint x;
  x.kind = ModelKind::Tower;
  x.padic = canonical_padic(p, num, exp);
  return x;
}

LcaPoint LcaPoint::product(std::vector<LcaPoint> parts) {
  LcaPoint x;
  x.kind = ModelKind::Product;
  x.parts = std::move(parts);
  return x;
}

std::string to_string(const LcaPoint& x) {
  switch (x.kind) {
    case ModelKind::Circle:
    case ModelKind::Reals: return csv::number(x.real);
    case ModelKind::Integers: return std::to_string(x.integer);
    case ModelKind::Finite: return to_string(GroupElement{x.residues});
    case ModelKind::Tower:
      return x.padic.exp == 0 ? std::to_string(x.padic.num)
                              : std::to_string(x.padic.num) + "/p^" + std::to_string(x.padic.exp);
    case ModelKind::Product: {
      std::string s = "(";
      for (std::size_t i = 0; i < x.parts.size(); ++i) s += (i ? ";" : "") + to_string(x.parts[i]);
      return s + ")";
    }
  }
  return "?";
}

LcaPoint identity(const LcaModel& m) {
  switch (m.kind) {
    case ModelKind::Circle: return LcaPoint::circle(0.0);
    case ModelKind::Reals: return LcaPoint::reals(0.0);
    case ModelKind::Integers: return LcaPoint::integer_point(0);
    case ModelKind::Finite: return LcaPoint::finite(std::vector<std::int64_t>(m.finite->rank(), 0));
    case ModelKind::Tower: return LcaPoint::tower(m.prime, 0, 0);
    case ModelKind::Product: {
      std::vector<LcaPoint> parts;
      for (const auto& f : m.factors) parts.push_back(identity(f));
      return LcaPoint::product(std::move(parts));
    }
  }
  throw DomainError("unknown model kind");
}

LcaPoint add(const LcaModel& m, const LcaPoint& x, const LcaPoint& y) {
  require_point(x, m.kind);
  require_point(y, m.kind);
  switch (m.kind) {
    case ModelKind::Circle: return LcaPoint::circle(x.real + y.real);
    case ModelKind::Reals: return LcaPoint::reals(x.real + y.real);
    case ModelKind::Integers: return LcaPoint::integer_point(x.integer + y.integer);
    case ModelKind::Finite:
      return LcaPoint::finite(m.finite->add(GroupElement{x.residues}, GroupElement{y.residues}).residues);
    case ModelKind::Tower: {
      const int e = std::max(x.padic.exp, y.padic.exp);
      const detail::int128 num = static_cast<detail::int128>(x.padic.num) * checked_power(m.prime, e - x.padic.exp) +
                                 static_cast<detail::int128>(y.padic.num) * checked_power(m.prime, e - y.padic.exp);
      LcaPoint r;
      r.kind = ModelKind::Tower;
      r.padic = canonical_padic(m.prime, num, e);
      return r;
    }
    case ModelKind::Product: {
      require_parts(m, x);
      require_parts(m, y);
      std::vector<LcaPoint> parts;
      for (std::size_t i = 0; i < m.factors.size(); ++i) parts.push_back(add(m.factors[i], x.parts[i], y.parts[i]));
      return LcaPoint::product(std::move(parts));
    }
  }
  throw DomainError("unknown model kind");
}

LcaPoint negate(const LcaModel& m, const LcaPoint& x) {
  require_point(x, m.kind);
  switch (m.kind) {
    case ModelKind::Circle: return LcaPoint::circle(-x.real);
    case ModelKind::Reals: return LcaPoint::reals(-x.real);
    case ModelKind::Integers: return LcaPoint::integer_point(-x.integer);
    case ModelKind::Finite: return LcaPoint::finite(m.finite->neg(GroupElement{x.residues}).residues);
    case ModelKind::Tower: {
      LcaPoint r = x;
      r.padic.num = -x.padic.num;
      return r;
    }
    case ModelKind::Product: {
      require_parts(m, x);
      std::vector<LcaPoint> parts;
      for (std::size_t i = 0; i < m.factors.size(); ++i) parts.push_back(negate(m.factors[i], x.parts[i]));
      return LcaPoint::product(std::move(parts));
    }
  }
  throw DomainError("unknown model kind");
}

LcaPoint subtract(const LcaModel& m, const LcaPoint& x, const LcaPoint& y) { return add(m, x, negate(m, y)); }

bool points_equal(const LcaModel& m, const LcaPoint& x, const LcaPoint& y, double tol) {
  require_point(x, m.kind);
  require_point(y, m.kind);
  switch (m.kind) {
    case ModelKind::Circle: return std::abs(principal(x.real - y.real)) <= tol;
    case ModelKind::Reals: return std::abs(x.real - y.real) <= tol * std::max(1.0, std::abs(x.real));
    case ModelKind::Integers: return x.integer == y.integer;
    case ModelKind::Finite: return x.residues == y.residues;
    case ModelKind::Tower: return x.padic == y.padic;
    case ModelKind::Product:
      require_parts(m, x);
      require_parts(m, y);
      for (std::size_t i = 0; i < m.factors.size(); ++i) {
        if (!points_equal(m.factors[i], x.parts[i], y.parts[i], tol)) return false;
      }
      return true;
  }
  return false;
}

int valuation(const LcaModel& m, const LcaPoint& x) {
  require_kind(m, ModelKind::Tower, "valuation");
  require_point(x, ModelKind::Tower);
  if (x.padic.num == 0) return kInfiniteValuation;
  if (x.padic.exp > 0) return -x.padic.exp;
  int v = 0;
  for (std::int64_t n = x.padic.num; n % m.prime == 0; n /= m.prime) ++v;
  return v;
}

double pairing_arg(const LcaModel& m, const LcaPoint& x, const LcaCharacter& chi) {
  require_point(x, m.kind);
  switch (m.kind) {
    case ModelKind::Circle:
      require_point(chi, ModelKind::Integers);
      return principal(static_cast<double>(chi.integer) * x.real);
    case ModelKind::Integers:
      require_point(chi, ModelKind::Circle);
      return principal(static_cast<double>(x.integer) * chi.real);
    case ModelKind::Reals:
      require_point(chi, ModelKind::Reals);
      if (m.period == kTwoPi) return principal(x.real * chi.real);
      return principal(kTwoPi * x.real * chi.real / m.period);
    case ModelKind::Finite:
      require_point(chi, ModelKind::Finite);
      return m.finite->pairing_arg(GroupElement{x.residues}, Character{chi.residues});
    case ModelKind::Tower: {
      require_point(chi, ModelKind::Tower);
      const int e = x.padic.exp + chi.padic.exp;
      if (e == 0) return 0.0;
      const std::int64_t den = checked_power(m.prime, e);
      const detail::int128 a = x.padic.num % den;
      const detail::int128 b = chi.padic.num % den;
      return turn_arg(static_cast<std::int64_t>((a * b) % den), den);
    }
    case ModelKind::Product: {
      require_parts(m, x);
      require_point(chi, ModelKind::Product);
      if (chi.parts.size() != m.factors.size()) throw ShapeError("product character has the wrong number of parts");
      double s = 0.0;
      for (std::size_t i = 0; i < m.factors.size(); ++i) s += pairing_arg(m.factors[i], x.parts[i], chi.parts[i]);
      return principal(s);
    }
  }
  throw DomainError("unknown model kind");
}

Complex eval_pairing(const LcaModel& m, const LcaPoint& x, const LcaCharacter& chi) {
  return std::polar(1.0, pairing_arg(m, x, chi));
}

// ---------------------------------------------------------------------------
// Descriptors
// ---------------------------------------------------------------------------

SetDescriptor SetDescriptor::whole() { return {}; }

SetDescriptor SetDescriptor::arc(double r) {
  if (!(r >= 0.0)) throw DomainError("arc half-length must be non-negative");
  SetDescriptor s;
  s.kind = DescriptorKind::Arc;
  s.radius = r;
  return s;
}

SetDescriptor SetDescriptor::interval(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("interval radius must be finite and non-negative");
  SetDescriptor s;
  s.kind = DescriptorKind::Interval;
  s.radius = r;
  return s;
}

SetDescriptor SetDescriptor::integer_ball(std::int64_t k) {
  if (k < 0) throw DomainError("integer ball radius must be non-negative");
  SetDescriptor s;
  s.kind = DescriptorKind::IntegerBall;
  s.bound = k;
  return s;
}

SetDescriptor SetDescriptor::finite_set(Subset a) {
  SetDescriptor s;
  s.kind = DescriptorKind::FiniteSet;
  s.finite = a.as_side(Side::Group);
  return s;
}

SetDescriptor SetDescriptor::subgroup_level(int i) {
  SetDescriptor s;
  s.kind = DescriptorKind::SubgroupLevel;
  s.level = i;
  return s;
}

SetDescriptor SetDescriptor::box(std::vector<SetDescriptor> parts) {
  if (parts.empty()) throw DomainError("box needs at least one part");
  SetDescriptor s;
  s.kind = DescriptorKind::Box;
  s.parts = std::move(parts);
  return s;
}

std::string to_string(const SetDescriptor& s) {
  switch (s.kind) {
    case DescriptorKind::Whole: return "whole";
    case DescriptorKind::Arc: return "arc(" + csv::number(s.radius) + ")";
    case DescriptorKind::Interval: return "interval(" + csv::number(s.radius) + ")";
    case DescriptorKind::IntegerBall: return "ball(" + std::to_string(s.bound) + ")";
    case DescriptorKind::FiniteSet: return "finite(" + std::to_string(s.finite->size()) + " points)";
    case DescriptorKind::SubgroupLevel: return "level(" + std::to_string(s.level) + ")";
    case DescriptorKind::Box: {
      std::string r = "box(";
      for (std::size_t i = 0; i < s.parts.size(); ++i) r += (i ? ";" : "") + to_string(s.parts[i]);
      return r + ")";
    }
  }
  return "?";
}

void validate(const LcaModel& m, const SetDescriptor& s) {
  auto fit = [&](ModelKind k) {
    if (m.kind != k) throw DomainError("descriptor " + to_string(s) + " does not fit model " + m.name());
  };
  switch (s.kind) {
    case DescriptorKind::Whole: return;
    case DescriptorKind::Arc: fit(ModelKind::Circle); return;
    case DescriptorKind::Interval: fit(ModelKind::Reals); return;
    case DescriptorKind::IntegerBall: fit(ModelKind::Integers); return;
    case DescriptorKind::SubgroupLevel: fit(ModelKind::Tower); return;
    case DescriptorKind::FiniteSet:
      fit(ModelKind::Finite);
      if (!(s.finite->group() == *m.finite)) throw DomainError("finite descriptor lives on a different group");
      return;
    case DescriptorKind::Box:
      fit(ModelKind::Product);
      if (s.parts.size() != m.factors.size()) throw DomainError("box has the wrong number of parts");
      for (std::size_t i = 0; i < s.parts.size(); ++i) validate(m.factors[i], s.parts[i]);
      return;
  }
}

bool contains(const LcaModel& m, const SetDescriptor& s, const LcaPoint& x) {
  validate(m, s);
  require_point(x, m.kind);
  switch (s.kind) {
    case DescriptorKind::Whole: return true;
    case DescriptorKind::Arc: return std::abs(x.real) <= s.radius + kArgSlack;
    case DescriptorKind::Interval: return std::abs(x.real) <= s.radius + interval_slack(s.radius);
    case DescriptorKind::IntegerBall: return x.integer >= -s.bound && x.integer <= s.bound;
    case DescriptorKind::FiniteSet: return s.finite->contains_index(m.finite->index_of_residues(x.residues));
    case DescriptorKind::SubgroupLevel: return valuation(m, x) >= s.level;
    case DescriptorKind::Box:
      require_parts(m, x);
      for (std::size_t i = 0; i < s.parts.size(); ++i) {
        if (!contains(m.factors[i], s.parts[i], x.parts[i])) return false;
      }
      return true;
  }
  return false;
}

namespace {

bool is_whole(const LcaModel& m, const SetDescriptor& s) {
  switch (s.kind) {
    case DescriptorKind::Whole: return true;
    case DescriptorKind::Arc: return s.radius >= kPi;
    case DescriptorKind::FiniteSet: return s.finite->size() == m.finite->count();
    case DescriptorKind::Box:
      for (std::size_t i = 0; i < s.parts.size(); ++i) {
        if (!is_whole(m.factors[i], s.parts[i])) return false;
      }
      return true;
    default: return false;
  }
}

}  // namespace

bool descriptor_subset(const LcaModel& m, const SetDescriptor& a, const SetDescriptor& b) {
  validate(m, a);
  validate(m, b);
  if (is_whole(m, b)) return true;
  if (a.kind == DescriptorKind::Whole) return false;
  if (a.kind != b.kind) throw DomainError("cannot compare descriptors " + to_string(a) + " and " + to_string(b));
  switch (a.kind) {
    case DescriptorKind::Arc: return a.radius <= b.radius + kArgSlack;
    case DescriptorKind::Interval: return a.radius <= b.radius + interval_slack(b.radius);
    case DescriptorKind::IntegerBall: return a.bound <= b.bound;
    case DescriptorKind::FiniteSet: return a.finite->is_subset_of(*b.finite);
    case DescriptorKind::SubgroupLevel: return a.level >= b.level;
    case DescriptorKind::Box:
      for (std::size_t i = 0; i < a.parts.size(); ++i) {
        if (!descriptor_subset(m.factors[i], a.parts[i], b.parts[i])) return false;
      }
      return true;
    case DescriptorKind::Whole: break;
  }
  return false;
}

SetDescriptor minkowski_sum(const LcaModel& m, const SetDescriptor& a, const SetDescriptor& b) {
  validate(m, a);
  validate(m, b);
  if (a.kind == DescriptorKind::Whole || b.kind == DescriptorKind::Whole) return SetDescriptor::whole();
  if (a.kind != b.kind) throw DomainError("cannot add descriptors " + to_string(a) + " and " + to_string(b));
  switch (a.kind) {
    case DescriptorKind::Arc: return SetDescriptor::arc(std::min(a.radius + b.radius, kPi));
    case DescriptorKind::Interval: return SetDescriptor::interval(a.radius + b.radius);
    case DescriptorKind::IntegerBall: return SetDescriptor::integer_ball(a.bound + b.bound);
    case DescriptorKind::FiniteSet: return SetDescriptor::finite_set(sumset(*a.finite, *b.finite));
    case DescriptorKind::SubgroupLevel: return SetDescriptor::subgroup_level(std::min(a.level, b.level));
    case DescriptorKind::Box: {
      std::vector<SetDescriptor> parts;
      for (std::size_t i = 0; i < a.parts.size(); ++i) parts.push_back(minkowski_sum(m.factors[i], a.parts[i], b.parts[i]));
      return SetDescriptor::box(std::move(parts));
    }
    case DescriptorKind::Whole: break;
  }
  return SetDescriptor::whole();
}

double haar_measure(const LcaModel& m, const SetDescriptor& s) {
  validate(m, s);
  switch (s.kind) {
    case DescriptorKind::Whole:
      switch (m.kind) {
        case ModelKind::Circle: return m.haar_scale;
        case ModelKind::Finite: return m.haar_scale * static_cast<double>(m.finite->size());
        case ModelKind::Product: {
          double v = 1.0;
          for (const auto& f : m.factors) v *= haar_measure(f, SetDescriptor::whole());
          return v;
        }
        default: throw DomainError("the whole of " + m.name() + " is not compact");
      }
    case DescriptorKind::Arc: return m.haar_scale * std::min(s.radius, kPi) / kPi;
    case DescriptorKind::Interval: return m.haar_scale * 2.0 * s.radius;
    case DescriptorKind::IntegerBall: return m.haar_scale * static_cast<double>(2 * s.bound + 1);
    case DescriptorKind::FiniteSet: return m.haar_scale * static_cast<double>(s.finite->size());
    case DescriptorKind::SubgroupLevel: return m.haar_scale * std::pow(static_cast<double>(m.prime), -s.level);
    case DescriptorKind::Box: {
      double v = 1.0;
      for (std::size_t i = 0; i < s.parts.size(); ++i) v *= haar_measure(m.factors[i], s.parts[i]);
      return v;
    }
  }
  return 0.0;
}

namespace {

bool is_subgroup_descriptor(const LcaModel& m, const SetDescriptor& s) {
  switch (s.kind) {
    case DescriptorKind::Whole:
    case DescriptorKind::SubgroupLevel: return true;
    case DescriptorKind::Arc: return s.radius == 0.0 || s.radius >= kPi;
    case DescriptorKind::Interval: return s.radius == 0.0;
    case DescriptorKind::IntegerBall: return s.bound == 0;
    case DescriptorKind::FiniteSet: return s.finite->is_subgroup();
    case DescriptorKind::Box:
      for (std::size_t i = 0; i < s.parts.size(); ++i) {
        if (!is_subgroup_descriptor(m.factors[i], s.parts[i])) return false;
      }
      return true;
  }
  return false;
}

[[noreturn]] void unsupported_bohr(const LcaModel& m, const SetDescriptor& s, double alpha) {
  throw UnsupportedError("no closed-form Bohr set for " + to_string(s) + " on " + m.name() + " at alpha " +
                         csv::number(alpha));
}

}  // namespace

SetDescriptor bohr_closed_form(const LcaModel& m, const SetDescriptor& s, double alpha) {
  validate(m, s);
  if (!(alpha >= 0.0 && alpha <= kPi)) throw DomainError("alpha must lie in [0, pi]");
  if (alpha >= kPi) return SetDescriptor::whole();
  const bool below_two_thirds = alpha < 2.0 * kPi / 3.0;
  switch (m.kind) {
    case ModelKind::Circle: {
      const double r = s.kind == DescriptorKind::Whole ? kPi : s.radius;
      if (r == 0.0) return SetDescriptor::whole();
      if (r >= kPi) return SetDescriptor::integer_ball(0);
      return SetDescriptor::integer_ball(static_cast<std::int64_t>(std::floor((alpha + kArgSlack) / r)));
    }
    case ModelKind::Integers: {
      if (s.kind == DescriptorKind::Whole) {
        if (!below_two_thirds) unsupported_bohr(m, s, alpha);
        return SetDescriptor::arc(0.0);
      }
      if (s.bound == 0) return SetDescriptor::whole();
      if (s.bound == 1) return SetDescriptor::arc(alpha);
      if (!below_two_thirds) unsupported_bohr(m, s, alpha);
      return SetDescriptor::arc(alpha / static_cast<double>(s.bound));
    }
    case ModelKind::Reals: {
      if (s.kind == DescriptorKind::Whole) return SetDescriptor::interval(0.0);
      if (s.radius == 0.0) return SetDescriptor::whole();
      const double scale = m.period == kTwoPi ? 1.0 : m.period / kTwoPi;
      return SetDescriptor::interval(alpha * scale / s.radius);
    }
    case ModelKind::Finite: {
      const Subset a = s.kind == DescriptorKind::Whole ? Subset::whole(*m.finite) : *s.finite;
      return SetDescriptor::finite_set(bohr(a, alpha));
    }
    case ModelKind::Tower:
      if (s.kind == DescriptorKind::Whole || !below_two_thirds) unsupported_bohr(m, s, alpha);
      return SetDescriptor::subgroup_level(-s.level);
    case ModelKind::Product: {
      if (!below_two_thirds || !is_subgroup_descriptor(m, s)) unsupported_bohr(m, s, alpha);
      std::vector<SetDescriptor> parts;
      for (std::size_t i = 0; i < m.factors.size(); ++i) {
        const SetDescriptor part = s.kind == DescriptorKind::Whole ? SetDescriptor::whole() : s.parts[i];
        parts.push_back(bohr_closed_form(m.factors[i], part, alpha));
      }
      return SetDescriptor::box(std::move(parts));
    }
  }
  unsupported_bohr(m, s, alpha);
}

// ---------------------------------------------------------------------------
// Reference functions
// ---------------------------------------------------------------------------

std::string to_string(RefFamily f) {
  switch (f) {
    case RefFamily::Gaussian: return "gaussian";
    case RefFamily::TrigPoly: return "trig-poly";
    case RefFamily::IndicatorInterval: return "indicator-interval";
    case RefFamily::FiniteSeq: return "finite-seq";
    case RefFamily::LocallyConstant: return "locally-constant";
    case RefFamily::Sinc: return "sinc";
  }
  return "unknown";
}

RefFunction RefFunction::gaussian(const LcaModel& reals, double sigma, double amplitude) {
  require_kind(reals, ModelKind::Reals, "Gaussian");
  if (!(sigma > 0.0)) throw DomainError("Gaussian width must be positive");
  RefFunction f;
  f.family = RefFamily::Gaussian;
  f.model = reals;
  f.sigma = sigma;
  f.amplitude = amplitude;
  return f;
}

RefFunction RefFunction::indicator_interval(const LcaModel& reals, double width, double amplitude) {
  require_kind(reals, ModelKind::Reals, "interval indicator");
  if (!(width >= 0.0)) throw DomainError("indicator half-width must be non-negative");
  RefFunction f;
  f.family = RefFamily::IndicatorInterval;
  f.model = reals;
  f.width = width;
  f.amplitude = amplitude;
  return f;
}

RefFunction RefFunction::trig_poly(const LcaModel& circle, std::int64_t first, std::vector<Complex> coeffs) {
  require_kind(circle, ModelKind::Circle, "trigonometric polynomial");
  RefFunction f;
  f.family = RefFamily::TrigPoly;
  f.model = circle;
  f.first = first;
  f.coeffs = std::move(coeffs);
  return f;
}

RefFunction RefFunction::finite_seq(const LcaModel& integers, std::int64_t first, std::vector<Complex> values) {
  require_kind(integers, ModelKind::Integers, "finite sequence");
  RefFunction f;
  f.family = RefFamily::FiniteSeq;
  f.model = integers;
  f.first = first;
  f.coeffs = std::move(values);
  return f;
}

RefFunction RefFunction::locally_constant(const LcaModel& tower, int level, double amplitude) {
  require_kind(tower, ModelKind::Tower, "locally constant function");
  RefFunction f;
  f.family = RefFamily::LocallyConstant;
  f.model = tower;
  f.level = level;
  f.amplitude = amplitude;
  return f;
}

namespace {

// Angular frequency 2 pi gamma / period of a real character.
double angular(const LcaModel& m, double gamma) { return m.period == kTwoPi ? gamma : kTwoPi * gamma / m.period; }

}  // namespace

Complex evaluate(const RefFunction& f, const LcaPoint& x) {
  require_point(x, f.model.kind);
  switch (f.family) {
    case RefFamily::Gaussian: return f.amplitude * std::exp(-x.real * x.real / (2.0 * f.sigma * f.sigma));
    case RefFamily::IndicatorInterval: return std::abs(x.real) <= f.width ? f.amplitude : 0.0;
    case RefFamily::Sinc: {
      const double w = angular(f.model, x.real);
      if (w == 0.0) return f.amplitude * 2.0 * f.width;
      return f.amplitude * 2.0 * std::sin(f.width * w) / w;
    }
    case RefFamily::TrigPoly: {
      Complex acc{};
      for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        acc += f.coeffs[i] * std::polar(1.0, static_cast<double>(f.first + static_cast<std::int64_t>(i)) * x.real);
      }
      return acc;
    }
    case RefFamily::FiniteSeq: {
      const std::int64_t i = x.integer - f.first;
      if (i < 0 || i >= static_cast<std::int64_t>(f.coeffs.size())) return 0.0;
      return f.coeffs[static_cast<std::size_t>(i)];
    }
    case RefFamily::LocallyConstant: return valuation(f.model, x) >= f.level ? f.amplitude : 0.0;
  }
  return 0.0;
}

RefFunction reference_transform(const RefFunction& f) {
  const LcaModel& m = f.model;
  const LcaModel dm = m.dual();
  switch (f.family) {
    case RefFamily::Gaussian: {
      // c A sqrt(2 pi) sigma exp(-sigma^2 w^2 / 2) with w = 2 pi gamma / period.
      const double amp = m.haar_scale * f.amplitude * std::sqrt(kTwoPi) * f.sigma;
      const double sigma = m.period / (kTwoPi * f.sigma);
      return RefFunction::gaussian(dm, sigma, amp);
    }
    case RefFamily::IndicatorInterval: {
      RefFunction g;
      g.family = RefFamily::Sinc;
      g.model = dm;
      g.width = f.width;
      g.amplitude = m.haar_scale * f.amplitude;
      return g;
    }
    case RefFamily::TrigPoly: {
      std::vector<Complex> v = f.coeffs;
      for (auto& z : v) z *= m.haar_scale;
      return RefFunction::finite_seq(dm, f.first, std::move(v));
    }
    case RefFamily::FiniteSeq: {
      std::vector<Complex> v(f.coeffs.rbegin(), f.coeffs.rend());
      for (auto& z : v) z *= m.haar_scale;
      const std::int64_t last = f.first + static_cast<std::int64_t>(f.coeffs.size()) - 1;
      return RefFunction::trig_poly(dm, -last, std::move(v));
    }
    case RefFamily::LocallyConstant: {
      const double amp = f.amplitude * m.haar_scale * std::pow(static_cast<double>(m.prime), -f.level);
      return RefFunction::locally_constant(dm, -f.level, amp);
    }
    case RefFamily::Sinc: break;
  }
  throw UnsupportedError("no closed-form transform for the " + to_string(f.family) + " family");
}

double l1_norm(const RefFunction& f) {
  const double c = f.model.haar_scale;
  switch (f.family) {
    case RefFamily::Gaussian: return c * std::abs(f.amplitude) * f.sigma * std::sqrt(kTwoPi);
    case RefFamily::IndicatorInterval: return c * std::abs(f.amplitude) * 2.0 * f.width;
    case RefFamily::FiniteSeq: {
      double s = 0.0;
      for (const auto& z : f.coeffs) s += std::abs(z);
      return c * s;
    }
    case RefFamily::LocallyConstant:
      return c * std::abs(f.amplitude) * std::pow(static_cast<double>(f.model.prime), -f.level);
    case RefFamily::TrigPoly: {
      // Periodic trapezoid rule; |f| is Lipschitz, so the error decays like 1/N^2.
      std::int64_t deg = 1;
      for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        deg = std::max(deg, std::abs(f.first + static_cast<std::int64_t>(i)));
      }
      const std::int64_t n = 8192 * deg;
      double s = 0.0;
      for (std::int64_t j = 0; j < n; ++j) {
        s += std::abs(evaluate(f, LcaPoint::circle(kTwoPi * static_cast<double>(j) / static_cast<double>(n))));
      }
      return c * s / static_cast<double>(n);
    }
    case RefFamily::Sinc: break;
  }
  throw DomainError("the " + to_string(f.family) + " family is not integrable");
}

Complex integrate_over(const RefFunction& f, const LcaPoint& x, const SetDescriptor& u) {
  const LcaModel& m = f.model;
  validate(m, u);
  require_point(x, m.kind);
  const double c = m.haar_scale;
  switch (f.family) {
    case RefFamily::Gaussian: {
      if (u.kind == DescriptorKind::Whole) return l1_norm(f) * (f.amplitude < 0 ? -1.0 : 1.0);
      const double k = f.sigma * std::sqrt(2.0);
      const double lo = (x.real - u.radius) / k;
      const double hi = (x.real + u.radius) / k;
      // Subtracting complementary error functions keeps precision when both ends sit in the same tail.
      double diff;
      if (lo > 0.0) diff = std::erfc(lo) - std::erfc(hi);
      else if (hi < 0.0) diff = std::erfc(-hi) - std::erfc(-lo);
      else diff = std::erf(hi) - std::erf(lo);
      return c * f.amplitude * f.sigma * std::sqrt(kPi / 2.0) * diff;
    }
    case RefFamily::IndicatorInterval: {
      if (u.kind == DescriptorKind::Whole) return c * f.amplitude * 2.0 * f.width;
      const double lo = std::max(x.real - u.radius, -f.width);
      const double hi = std::min(x.real + u.radius, f.width);
      return c * f.amplitude * std::max(0.0, hi - lo);
    }
    case RefFamily::TrigPoly: {
      const double r = u.kind == DescriptorKind::Whole ? kPi : std::min(u.radius, kPi);
      Complex acc{};
      for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        const std::int64_t k = f.first + static_cast<std::int64_t>(i);
        double weight;
        if (k == 0) weight = r / kPi;
        else if (r >= kPi) weight = 0.0;
        else weight = std::sin(static_cast<double>(k) * r) / (kPi * static_cast<double>(k));
        acc += f.coeffs[i] * std::polar(1.0, static_cast<double>(k) * x.real) * weight;
      }
      return c * acc;
    }
    case RefFamily::FiniteSeq: {
      Complex acc{};
      for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        const std::int64_t k = f.first + static_cast<std::int64_t>(i);
        if (u.kind == DescriptorKind::Whole || std::abs(k - x.integer) <= u.bound) acc += f.coeffs[i];
      }
      return c * acc;
    }
    case RefFamily::LocallyConstant: {
      if (u.kind == DescriptorKind::Whole) throw DomainError("the whole tower is not compact");
      const int vx = valuation(m, x);
      const double p = static_cast<double>(m.prime);
      if (u.level >= f.level) return vx >= f.level ? c * f.amplitude * std::pow(p, -u.level) : 0.0;
      return vx >= u.level ? c * f.amplitude * std::pow(p, -f.level) : 0.0;
    }
    case RefFamily::Sinc: break;
  }
  throw UnsupportedError("no closed-form integral for the " + to_string(f.family) + " family");
}

}  // namespace finharm
