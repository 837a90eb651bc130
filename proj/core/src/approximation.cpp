#include "finharm/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "finharm/csv.hpp"
#include "finharm/errors.hpp"
#include "finharm/parallel.hpp"
#include "wide_int.hpp"

namespace finharm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double principal(double v) {
  double r = std::remainder(v, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

std::int64_t ipow(std::int64_t p, int e) {
  std::int64_t v = 1;
  for (int i = 0; i < e; ++i) {
    if (v > (std::int64_t{1} << 62) / p) throw ResourceError("p^" + std::to_string(e) + " exceeds 62 bits");
    v *= p;
  }
  return v;
}

std::int64_t pow_mod(std::int64_t p, int e, std::int64_t mod) {
  detail::int128 v = 1 % mod;
  for (int i = 0; i < e; ++i) v = v * p % mod;
  return static_cast<std::int64_t>(v);
}

void compute_flags(ApproxMap& m) {
  const std::vector<LcaPoint> img = m.image();
  const GroupSpec& g = m.source;
  m.strict = points_equal(m.target, img[0], identity(m.target));
  for (std::size_t a = 0; a < g.count() && m.strict; ++a) {
    if (!points_equal(m.target, img[g.neg_index(a)], negate(m.target, img[a]))) m.strict = false;
  }
}

// Scalar coordinate of a point of a one-dimensional model.
double coordinate(const LcaPoint& x) {
  switch (x.kind) {
    case ModelKind::Circle:
    case ModelKind::Reals: return x.real;
    case ModelKind::Integers: return static_cast<double>(x.integer);
    default: throw DomainError("point has no scalar coordinate");
  }
}

struct Cover {
  double radius = kInf;
  double where = 0.0;
};

// Largest distance from a point of [lo, hi] to the nearest of `pts`.
Cover covering_radius(std::vector<double> pts, double lo, double hi, bool integral) {
  Cover c;
  if (pts.empty()) {
    c.where = lo;
    return c;
  }
  std::sort(pts.begin(), pts.end());
  c.radius = 0.0;
  auto consider = [&](double r, double x) {
    if (r > c.radius) {
      c.radius = r;
      c.where = x;
    }
  };
  if (lo < pts.front()) consider(pts.front() - lo, lo);
  if (hi > pts.back()) consider(hi - pts.back(), hi);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double p = pts[i], q = pts[i + 1];
    const double a = std::max(p, lo), b = std::min(q, hi);
    if (a > b) continue;
    const double mid = 0.5 * (p + q);
    if (integral) {
      for (double x : {std::floor(mid), std::ceil(mid)}) {
        const double xc = std::clamp(x, a, b);
        consider(std::min(xc - p, q - xc), xc);
      }
    } else {
      const double xc = std::clamp(mid, a, b);
      consider(std::min(xc - p, q - xc), xc);
    }
  }
  return c;
}

std::string describe_pair(const GroupSpec& g, std::size_t a, std::size_t b) {
  return "x=" + to_string(g.element(a)) + " y=" + to_string(g.element(b));
}

CheckResult coverage_check(const ApproxMap& eta, const SetDescriptor& k, const SetDescriptor& u,
                           const std::vector<LcaPoint>& img) {
  const LcaModel& m = eta.target;
  CheckResult r;
  r.name = "coverage";
  switch (m.kind) {
    case ModelKind::Circle:
    case ModelKind::Reals:
    case ModelKind::Integers: {
      const bool circle = m.kind == ModelKind::Circle;
      const bool integral = m.kind == ModelKind::Integers;
      double lo, hi;
      if (k.kind == DescriptorKind::Whole) {
        if (!circle) throw DomainError("K must be compact; the whole of " + m.name() + " is not");
        lo = -kPi;
        hi = kPi;
      } else if (circle) {
        hi = std::min(k.radius, kPi);
        lo = -hi;
      } else if (integral) {
        hi = static_cast<double>(k.bound);
        lo = -hi;
      } else {
        hi = k.radius;
        lo = -hi;
      }
      std::vector<double> pts;
      for (const auto& p : img) {
        const double c = coordinate(p);
        pts.push_back(c);
        if (circle) {
          pts.push_back(c - kTwoPi);
          pts.push_back(c + kTwoPi);
        }
      }
      const Cover c = covering_radius(std::move(pts), lo, hi, integral);
      double bound;
      if (u.kind == DescriptorKind::Whole) bound = kInf;
      else if (integral) bound = static_cast<double>(u.bound);
      else bound = u.radius;
      const double slack = integral ? 0.0 : (circle ? kArgSlack : 1e-12 * std::max(1.0, bound));
      r.worst = c.radius;
      r.bound = bound;
      r.passed = c.radius <= bound + slack;
      r.test_set = "exact covering radius of " + to_string(k) + " by the sorted image";
      if (!r.passed) r.witness = "uncovered point " + csv::number(c.where) + " at distance " + csv::number(c.radius);
      return r;
    }
    case ModelKind::Finite: {
      std::vector<std::size_t> idx;
      for (const auto& p : img) idx.push_back(m.finite->index_of_residues(p.residues));
      const Subset image = Subset::from_indices(*m.finite, idx);
      const Subset uu = u.kind == DescriptorKind::Whole ? Subset::whole(*m.finite) : *u.finite;
      const Subset kk = k.kind == DescriptorKind::Whole ? Subset::whole(*m.finite) : *k.finite;
      const Subset covered = sumset(image, uu);
      r.test_set = "all " + std::to_string(kk.size()) + " points of K";
      r.passed = true;
      for (std::size_t x : kk.indices()) {
        if (!covered.contains_index(x)) {
          r.passed = false;
          r.worst = 1.0;
          r.witness = "uncovered point " + to_string(m.finite->element(x));
          break;
        }
      }
      return r;
    }
    case ModelKind::Tower: {
      if (k.kind != DescriptorKind::SubgroupLevel || u.kind != DescriptorKind::SubgroupLevel) {
        throw DomainError("tower coverage needs subgroup levels for K and U");
      }
      const double p = static_cast<double>(m.prime);
      r.bound = std::pow(p, -u.level);
      if (u.level <= k.level) {
        r.passed = std::any_of(img.begin(), img.end(), [&](const LcaPoint& y) { return valuation(m, y) >= u.level; });
        r.test_set = "U contains K";
        if (!r.passed) r.witness = "no image point in U";
        return r;
      }
      const std::int64_t classes = ipow(m.prime, u.level - k.level);
      if (classes > static_cast<std::int64_t>(kDefaultEnumerationCap)) throw ResourceError("too many cosets of U in K");
      std::vector<char> hit(static_cast<std::size_t>(classes), 0);
      for (const auto& y : img) {
        if (valuation(m, y) < k.level) continue;
        // y / p^level(K) is an integer; its residue names the coset of U.
        std::int64_t key;
        if (k.level <= 0) {
          const std::int64_t mult = pow_mod(m.prime, -k.level - y.padic.exp, classes);
          key = static_cast<std::int64_t>(static_cast<detail::int128>(y.padic.num % classes) * mult % classes);
        } else {
          key = (y.padic.num / ipow(m.prime, k.level)) % classes;
        }
        if (key < 0) key += classes;
        hit[static_cast<std::size_t>(key)] = 1;
      }
      r.test_set = "all " + std::to_string(classes) + " cosets of U in K";
      r.passed = true;
      for (std::int64_t c = 0; c < classes; ++c) {
        if (!hit[static_cast<std::size_t>(c)]) {
          r.passed = false;
          r.worst = 1.0;
          r.witness = "coset " + std::to_string(c) + " * p^" + std::to_string(k.level) + " + U has no image point";
          break;
        }
      }
      return r;
    }
    default: throw UnsupportedError("coverage check is not available for tabulated maps into " + m.name());
  }
}

CheckResult homomorphy_check(const ApproxMap& eta, const SetDescriptor& k, const SetDescriptor& u,
                             const std::vector<LcaPoint>& img) {
  const LcaModel& m = eta.target;
  const GroupSpec& g = eta.source;
  const Subset dom = preimage(eta, k);
  const std::vector<std::size_t>& d = dom.indices();
  CheckResult r;
  r.name = "homomorphy";
  r.test_set = "all " + std::to_string(d.size() * d.size()) + " pairs in eta^-1[K]";
  std::vector<double> worst(d.size(), 0.0);
  std::vector<std::size_t> arg(d.size(), 0);
  std::vector<char> bad(d.size(), 0);

  const bool scalar = m.kind == ModelKind::Circle || m.kind == ModelKind::Reals || m.kind == ModelKind::Integers;
  if (scalar) {
    std::vector<double> c(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) c[i] = coordinate(img[i]);
    double bound;
    if (u.kind == DescriptorKind::Whole) bound = kInf;
    else if (m.kind == ModelKind::Integers) bound = static_cast<double>(u.bound);
    else bound = u.radius;
    const double slack =
        m.kind == ModelKind::Integers ? 0.0 : (m.kind == ModelKind::Circle ? kArgSlack : 1e-12 * std::max(1.0, bound));
    r.bound = bound;
    parallel_for(0, d.size(), [&](std::size_t i) {
      const std::size_t a = d[i];
      for (std::size_t j = 0; j < d.size(); ++j) {
        const std::size_t b = d[j];
        double dev = c[a] + c[b] - c[g.add_index(a, b)];
        if (m.kind == ModelKind::Circle) dev = principal(dev);
        dev = std::abs(dev);
        if (dev > worst[i]) {
          worst[i] = dev;
          arg[i] = b;
        }
      }
      bad[i] = worst[i] > bound + slack;
    }, 8);
  } else {
    const bool tower = m.kind == ModelKind::Tower;
    if (tower && u.kind != DescriptorKind::SubgroupLevel) throw DomainError("tower U must be a subgroup level");
    r.bound = tower ? std::pow(static_cast<double>(m.prime), -u.level) : 0.0;
    if (eta.family == ApproxFamily::TowerSection) {
      // eta(a) + eta(b) - eta(a + b) = t / p^shift where t is the integer carry of the residue sum.
      std::vector<std::int64_t> res(g.count());
      for (std::size_t i = 0; i < g.count(); ++i) res[i] = g.residues(i)[0];
      const double p = static_cast<double>(m.prime);
      parallel_for(0, d.size(), [&](std::size_t i) {
        const std::size_t a = d[i];
        for (std::size_t b : d) {
          std::int64_t t = res[a] + res[b] - res[g.add_index(a, b)];
          if (t == 0) continue;
          int v = -eta.shift;
          for (; t % m.prime == 0; t /= m.prime) ++v;
          const bool inside = v >= u.level;
          const double size = std::pow(p, -v);
          if (size > worst[i] || (!inside && !bad[i])) {
            worst[i] = std::max(worst[i], size);
            arg[i] = b;
          }
          if (!inside) bad[i] = 1;
        }
      }, 8);
    } else {
    parallel_for(0, d.size(), [&](std::size_t i) {
      const std::size_t a = d[i];
      for (std::size_t j = 0; j < d.size(); ++j) {
        const std::size_t b = d[j];
        const LcaPoint dev = subtract(m, add(m, img[a], img[b]), img[g.add_index(a, b)]);
        const bool inside = contains(m, u, dev);
        double size;
        if (tower) {
          const int v = valuation(m, dev);
          size = v == kInfiniteValuation ? 0.0 : std::pow(static_cast<double>(m.prime), -v);
        } else {
          size = inside ? 0.0 : 1.0;
        }
        if (size > worst[i] || (!inside && !bad[i])) {
          worst[i] = std::max(worst[i], size);
          arg[i] = b;
        }
        if (!inside) bad[i] = 1;
      }
    }, 8);
    }
  }
  r.passed = true;
  for (std::size_t i = 0; i < d.size(); ++i) {
    r.worst = std::max(r.worst, worst[i]);
    if (bad[i] && r.passed) {
      r.passed = false;
      r.witness = describe_pair(g, d[i], arg[i]) + " deviate by " + csv::number(worst[i]);
    }
  }
  return r;
}

CheckResult merge(std::string name, const ApproxCertificate& c) {
  CheckResult r;
  r.name = std::move(name);
  r.passed = c.certified();
  for (const auto& x : c.checks) {
    r.worst = std::max(r.worst, x.bound > 0.0 && std::isfinite(x.bound) ? x.worst / x.bound : x.worst);
    r.test_set += (r.test_set.empty() ? "" : "; ") + x.name + ": " + x.test_set;
    if (!x.passed && !r.witness) r.witness = x.name + ": " + x.witness.value_or("failed");
  }
  r.bound = 1.0;
  return r;
}

}  // namespace

std::string to_string(ApproxFamily f) {
  switch (f) {
    case ApproxFamily::IntegerIdentity: return "integer-identity";
    case ApproxFamily::CircleExp: return "circle-exp";
    case ApproxFamily::RealLattice: return "real-lattice";
    case ApproxFamily::TowerSection: return "tower-section";
    case ApproxFamily::Product: return "product";
    case ApproxFamily::Tabulated: return "tabulated";
  }
  return "unknown";
}

LcaPoint ApproxMap::operator()(std::size_t index) const {
  switch (family) {
    case ApproxFamily::IntegerIdentity: return LcaPoint::integer_point(source.residues(index)[0]);
    case ApproxFamily::CircleExp: {
      const std::int64_t a = source.residues(index)[0];
      return LcaPoint::circle(kTwoPi * static_cast<double>(a) / static_cast<double>(source.size()));
    }
    case ApproxFamily::RealLattice: return LcaPoint::reals(static_cast<double>(source.residues(index)[0]) * step);
    case ApproxFamily::TowerSection: return LcaPoint::tower(target.prime, source.residues(index)[0], shift);
    case ApproxFamily::Product: {
      const std::size_t inner = factors[1].source.count();
      return LcaPoint::product({factors[0](index / inner), factors[1](index % inner)});
    }
    case ApproxFamily::Tabulated: return table.at(index);
  }
  throw DomainError("unknown approximation family");
}

std::vector<LcaPoint> ApproxMap::image() const {
  std::vector<LcaPoint> out;
  out.reserve(source.count());
  for (std::size_t i = 0; i < source.count(); ++i) out.push_back((*this)(i));
  return out;
}

ApproxMap build_integer_approx(std::int64_t n, std::int64_t k) {
  if (n < 1) throw ParameterError("group order n must be at least 1");
  if (k < 0 || 4 * k >= n) {
    throw ParameterError("the identity Z_n -> Z approximates K = {|m| <= k} only for 0 <= k < n/4 (n=" +
                         std::to_string(n) + ", k=" + std::to_string(k) + ")");
  }
  ApproxMap m{GroupSpec::cyclic(n), LcaModel::integers(), ApproxFamily::IntegerIdentity};
  m.injective = true;
  compute_flags(m);
  return m;
}

ApproxMap build_circle_approx(std::int64_t n) {
  if (n < 1) throw ParameterError("group order n must be at least 1");
  ApproxMap m{GroupSpec::cyclic(n), LcaModel::circle(), ApproxFamily::CircleExp};
  m.injective = true;
  compute_flags(m);
  return m;
}

ApproxMap build_real_approx(std::int64_t n, double d, const LcaModel& reals) {
  if (n < 1) throw ParameterError("group order n must be at least 1");
  if (!(d > 0.0) || !std::isfinite(d)) throw ParameterError("lattice spacing d must be positive");
  if (reals.kind != ModelKind::Reals) throw DomainError("lattice target must be a reals model");
  ApproxMap m{GroupSpec::cyclic(n), reals, ApproxFamily::RealLattice};
  m.step = d;
  m.injective = true;
  compute_flags(m);
  return m;
}

ApproxMap build_tower_approx(std::int64_t p, int j, int k) {
  const LcaModel t = LcaModel::tower(p, j, k);
  ApproxMap m{GroupSpec::cyclic(ipow(p, j + k)), t, ApproxFamily::TowerSection};
  m.shift = j;
  m.injective = true;
  compute_flags(m);
  return m;
}

ApproxMap product_approx(const ApproxMap& a, const ApproxMap& b) {
  ApproxMap m{a.source.product(b.source), LcaModel::product({a.target, b.target}), ApproxFamily::Product};
  m.factors = {a, b};
  m.injective = a.injective && b.injective;
  m.strict = a.strict && b.strict;
  return m;
}

ApproxMap tabulated_approx(GroupSpec source, LcaModel target, std::vector<LcaPoint> points) {
  if (points.size() != source.count()) throw ShapeError("tabulated map needs one point per group element");
  for (const auto& p : points) {
    if (p.kind != target.kind) throw DomainError("tabulated point does not belong to " + target.name());
  }
  ApproxMap m{std::move(source), std::move(target), ApproxFamily::Tabulated};
  m.table = std::move(points);
  m.injective = true;
  for (std::size_t i = 0; i < m.table.size() && m.injective; ++i) {
    for (std::size_t j = i + 1; j < m.table.size(); ++j) {
      if (points_equal(m.target, m.table[i], m.table[j])) {
        m.injective = false;
        break;
      }
    }
  }
  compute_flags(m);
  return m;
}

Subset preimage(const ApproxMap& eta, const SetDescriptor& x, Side side) {
  validate(eta.target, x);
  std::vector<bool> mask(eta.source.count());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = contains(eta.target, x, eta(i));
  return Subset::from_mask(eta.source, mask, side);
}

bool ApproxCertificate::certified() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult& ApproxCertificate::check(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("certificate has no check named " + std::string(name));
}

ApproxCertificate certify_KU(const ApproxMap& eta, const SetDescriptor& k, const SetDescriptor& u) {
  validate(eta.target, k);
  validate(eta.target, u);
  if (eta.family == ApproxFamily::Product) {
    ApproxCertificate out;
    std::vector<ApproxCertificate> parts;
    for (std::size_t i = 0; i < 2; ++i) {
      const SetDescriptor ki = k.kind == DescriptorKind::Whole ? SetDescriptor::whole() : k.parts[i];
      const SetDescriptor ui = u.kind == DescriptorKind::Whole ? SetDescriptor::whole() : u.parts[i];
      parts.push_back(certify_KU(eta.factors[i], ki, ui));
    }
    for (const char* name : {"coverage", "homomorphy"}) {
      CheckResult r;
      r.name = name;
      r.passed = true;
      r.bound = kInf;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const CheckResult& c = parts[i].check(name);
        r.worst = std::max(r.worst, c.worst);
        r.bound = std::min(r.bound, c.bound);
        r.test_set += (i ? " x " : "") + std::string("[") + c.test_set + "]";
        if (!c.passed && r.passed) {
          r.passed = false;
          r.witness = "factor " + std::to_string(i) + ": " + c.witness.value_or("failed");
        }
      }
      out.checks.push_back(std::move(r));
    }
    return out;
  }
  const std::vector<LcaPoint> img = eta.image();
  ApproxCertificate out;
  out.checks.push_back(coverage_check(eta, k, u, img));
  out.checks.push_back(homomorphy_check(eta, k, u, img));
  return out;
}

AlphaAdjointSets make_alpha_adjoint_pairs(const LcaModel& model, const SetDescriptor& u, const SetDescriptor& omega,
                                          double alpha) {
  const LcaModel dual = model.dual();
  validate(model, u);
  validate(dual, omega);
  if (!(alpha > 0.0 && alpha < kPi)) throw ParameterError("alpha must lie in (0, pi)");
  const SetDescriptor bohr_omega = bohr_closed_form(dual, omega, alpha);
  if (!descriptor_subset(model, u, bohr_omega)) {
    throw ContractError("U = " + to_string(u) + " and Omega = " + to_string(omega) +
                        " are incompatible: Bohr_alpha(Omega) = " + to_string(bohr_omega) + " does not contain U");
  }
  AlphaAdjointSets s{model, bohr_omega, u, bohr_closed_form(model, u, alpha), omega, alpha};
  if (!is_alpha_adjoint(s)) throw ContractError("closed-form sets fail the alpha-adjointness chain");
  return s;
}

bool is_alpha_adjoint(const AlphaAdjointSets& s) {
  const LcaModel& m = s.model;
  const LcaModel dual = m.dual();
  const SetDescriptor b_gamma = bohr_closed_form(dual, s.gamma, s.alpha);
  const SetDescriptor b_omega = bohr_closed_form(dual, s.omega, s.alpha);
  const SetDescriptor b_k = bohr_closed_form(m, s.k, s.alpha);
  const SetDescriptor b_u = bohr_closed_form(m, s.u, s.alpha);
  return descriptor_subset(m, s.u, b_gamma) && descriptor_subset(m, b_gamma, b_omega) &&
         descriptor_subset(m, b_omega, s.k) && descriptor_subset(dual, s.omega, b_k) &&
         descriptor_subset(dual, b_k, b_u) && descriptor_subset(dual, b_u, s.gamma);
}

AdjointPair build_adjoint_pair_circle(std::int64_t n, double alpha, double r) {
  if (!(r > 0.0 && r <= alpha && alpha <= kPi / 3.0)) throw ParameterError("circle pair needs 0 < r <= alpha <= pi/3");
  if (!(static_cast<double>(n) > kPi / r)) throw ParameterError("circle pair needs n > pi / r");
  const std::int64_t k = static_cast<std::int64_t>(std::floor((alpha + kArgSlack) / r));
  if (k < 1 || 4 * k >= n) throw ParameterError("circle pair needs 1 <= k = floor(alpha/r) < n/4");
  const LcaModel t = LcaModel::circle();
  AdjointPair p{build_circle_approx(n), build_integer_approx(n, k),
                make_alpha_adjoint_pairs(t, SetDescriptor::arc(r), SetDescriptor::integer_ball(0), alpha)};
  p.d = 1.0 / static_cast<double>(n);
  p.d_hat = 1.0;
  p.exact_identity = true;
  return p;
}

AdjointPair build_adjoint_pair_reals(std::int64_t n, double d, double alpha, double r, double rho, double d_prime) {
  if (n < 1) throw ParameterError("group order n must be at least 1");
  if (!(d > 0.0)) throw ParameterError("lattice spacing d must be positive");
  if (!(d_prime > 0.0)) d_prime = kTwoPi / (static_cast<double>(n) * d);
  if (!(r > 0.0 && rho > 0.0 && r <= alpha && rho <= alpha && alpha <= kPi / 3.0)) {
    throw ParameterError("reals pair needs r, rho <= alpha <= pi/3");
  }
  const double kd = alpha / (rho * d);
  const double md = alpha / (r * d_prime);
  const double k = std::round(kd), m = std::round(md);
  if (std::abs(kd - k) > 1e-9 * std::max(1.0, kd) || std::abs(md - m) > 1e-9 * std::max(1.0, md)) {
    throw ParameterError("reals pair needs rho * k d = r * m d' = alpha for integers k, m (got k=" + csv::number(kd) +
                         ", m=" + csv::number(md) + ")");
  }
  if (k < 1 || m < 1 || 4 * k >= static_cast<double>(n) || 4 * m >= static_cast<double>(n)) {
    throw ParameterError("reals pair needs 1 <= k, m < n/4");
  }
  if (!(d / 2 < r && r <= k * d * (1 + 1e-12))) throw ParameterError("reals pair needs d/2 < r <= k d");
  if (!(d_prime / 2 < rho && rho <= m * d_prime * (1 + 1e-12))) throw ParameterError("reals pair needs d'/2 < rho <= m d'");
  const LcaModel reals = LcaModel::reals();
  AdjointPair p{build_real_approx(n, d, reals), build_real_approx(n, d_prime, reals.dual()),
                make_alpha_adjoint_pairs(reals, SetDescriptor::interval(r), SetDescriptor::interval(rho), alpha)};
  p.d = d;
  p.d_hat = 1.0 / (static_cast<double>(n) * d);
  p.exact_identity = std::abs(static_cast<double>(n) * d * d_prime - kTwoPi) <= 1e-12 * kTwoPi;
  return p;
}

AdjointPair build_adjoint_pair_tower(std::int64_t p, int j, int k, double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0 * kPi / 3.0)) throw ParameterError("tower pair needs 0 < alpha < 2 pi / 3");
  ApproxMap eta = build_tower_approx(p, j, k);
  ApproxMap phi = build_tower_approx(p, k, j);
  phi.target = eta.target.dual();
  AdjointPair pair{std::move(eta), std::move(phi),
                   make_alpha_adjoint_pairs(LcaModel::tower(p, j, k), SetDescriptor::subgroup_level(k),
                                            SetDescriptor::subgroup_level(j), alpha)};
  pair.d = std::pow(static_cast<double>(p), -k);
  pair.d_hat = 1.0 / (pair.d * static_cast<double>(pair.eta.source.size()));
  pair.exact_identity = true;
  return pair;
}

namespace {

// Worst |arg((phi gamma)(eta a) / gamma(a))| over the given index lists.
double pairing_deviation(const AdjointPair& pair, const std::vector<std::size_t>& as,
                         const std::vector<std::size_t>& gs, std::size_t* wa, std::size_t* wg) {
  const GroupSpec& g = pair.eta.source;
  const LcaModel& m = pair.eta.target;
  std::vector<LcaPoint> x(as.size()), c(gs.size());
  for (std::size_t i = 0; i < as.size(); ++i) x[i] = pair.eta(as[i]);
  for (std::size_t i = 0; i < gs.size(); ++i) c[i] = pair.phi(gs[i]);
  std::vector<double> worst(as.size(), 0.0);
  std::vector<std::size_t> arg(as.size(), 0);
  parallel_for(0, as.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < gs.size(); ++j) {
      const double dev = std::abs(principal(pairing_arg(m, x[i], c[j]) - g.pairing_arg_index(as[i], gs[j])));
      if (dev > worst[i]) {
        worst[i] = dev;
        arg[i] = j;
      }
    }
  }, 8);
  double w = 0.0;
  for (std::size_t i = 0; i < as.size(); ++i) {
    if (worst[i] > w) {
      w = worst[i];
      if (wa) *wa = as[i];
      if (wg) *wg = gs[arg[i]];
    }
  }
  return w;
}

std::vector<std::size_t> all_indices(const GroupSpec& g) {
  std::vector<std::size_t> v(g.count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
  return v;
}

// Points of `b` whose image under `map` misses the descriptor `target`.
std::optional<std::size_t> first_outside(const Subset& b, const ApproxMap& map, const SetDescriptor& target) {
  for (std::size_t i : b.indices()) {
    if (!contains(map.target, target, map(i))) return i;
  }
  return std::nullopt;
}

}  // namespace

double pairing_identity_deviation(const AdjointPair& pair) {
  const auto idx = all_indices(pair.eta.source);
  return pairing_deviation(pair, idx, idx, nullptr, nullptr);
}

double window_pairing_deviation(const AdjointPair& pair) {
  const Subset dk = preimage(pair.eta, pair.sets.k);
  const Subset dg = preimage(pair.phi, pair.sets.gamma, Side::Dual);
  return pairing_deviation(pair, dk.indices(), dg.indices(), nullptr, nullptr);
}

ApproxCertificate verify_strong_adjointness(const AdjointPair& pair, double alpha, double eps, const SetDescriptor& v,
                                            const SetDescriptor& upsilon) {
  const AlphaAdjointSets& s = pair.sets;
  const LcaModel& m = pair.eta.target;
  const LcaModel& dm = pair.phi.target;
  const GroupSpec& g = pair.eta.source;
  ApproxCertificate out;

  CheckResult hyp;
  hyp.name = "hypotheses";
  hyp.test_set = "0 < eps < alpha <= pi/3, V in U, Upsilon in Omega";
  hyp.passed = true;
  if (!(eps > 0.0 && eps < alpha && alpha <= kPi / 3.0 + 1e-15)) {
    hyp.passed = false;
    hyp.witness = "need 0 < eps < alpha <= pi/3 (alpha=" + csv::number(alpha) + ", eps=" + csv::number(eps) + ")";
  } else if (!descriptor_subset(m, v, s.u)) {
    hyp.passed = false;
    hyp.witness = "V = " + to_string(v) + " is not inside U = " + to_string(s.u);
  } else if (!descriptor_subset(dm, upsilon, s.omega)) {
    hyp.passed = false;
    hyp.witness = "Upsilon = " + to_string(upsilon) + " is not inside Omega = " + to_string(s.omega);
  }
  out.checks.push_back(hyp);

  {
    const Subset dk = preimage(pair.eta, s.k);
    const Subset dg = preimage(pair.phi, s.gamma, Side::Dual);
    std::size_t wa = 0, wg = 0;
    CheckResult r;
    r.name = "pairing";
    r.worst = pairing_deviation(pair, dk.indices(), dg.indices(), &wa, &wg);
    r.bound = eps;
    r.passed = r.worst <= eps + kArgSlack;
    r.test_set = std::to_string(dk.size()) + " x " + std::to_string(dg.size()) + " pairs in eta^-1[K] x phi^-1[Gamma]";
    if (!r.passed) r.witness = "a=" + to_string(g.element(wa)) + " gamma=" + to_string(g.character(wg));
    out.checks.push_back(std::move(r));
  }
  {
    const Subset b = bohr(preimage(pair.eta, s.u), alpha);
    const SetDescriptor target = bohr_closed_form(m, v, eps);
    CheckResult r;
    r.name = "bohr-primal";
    r.test_set = std::to_string(b.size()) + " characters of Bohr_alpha(eta^-1[U])";
    const auto bad = first_outside(b, pair.phi, target);
    r.passed = !bad;
    r.worst = bad ? 1.0 : 0.0;
    if (bad) r.witness = "gamma=" + to_string(g.character(*bad)) + " misses phi^-1[" + to_string(target) + "]";
    out.checks.push_back(std::move(r));
  }
  {
    const Subset b = bohr(preimage(pair.phi, s.omega, Side::Dual), alpha);
    const SetDescriptor target = bohr_closed_form(dm, upsilon, eps);
    CheckResult r;
    r.name = "bohr-dual";
    r.test_set = std::to_string(b.size()) + " elements of Bohr_alpha(phi^-1[Omega])";
    const auto bad = first_outside(b, pair.eta, target);
    r.passed = !bad;
    r.worst = bad ? 1.0 : 0.0;
    if (bad) r.witness = "a=" + to_string(g.element(*bad)) + " misses eta^-1[" + to_string(target) + "]";
    out.checks.push_back(std::move(r));
  }
  out.checks.push_back(merge("eta-KV", certify_KU(pair.eta, s.k, v)));
  out.checks.push_back(merge("phi-Gamma-Upsilon", certify_KU(pair.phi, s.gamma, upsilon)));
  return out;
}

BoundReport check_bohr_transfer(const AdjointPair& pair, double eps, const SetDescriptor& v,
                                const SetDescriptor& upsilon, const SetDescriptor& x, const SetDescriptor& delta) {
  const AlphaAdjointSets& s = pair.sets;
  const double alpha = s.alpha;
  const LcaModel& m = pair.eta.target;
  const LcaModel& dm = pair.phi.target;
  const GroupSpec& g = pair.eta.source;
  BoundReport rep;
  rep.statement = "bohr_transfer";
  rep.rhs = 0.0;

  const bool window = descriptor_subset(m, s.u, x) && descriptor_subset(m, x, s.k) &&
                      descriptor_subset(dm, s.omega, delta) && descriptor_subset(dm, delta, s.gamma);
  const ApproxCertificate strong = verify_strong_adjointness(pair, alpha, eps, v, upsilon);
  const SetDescriptor xv = minkowski_sum(m, x, v);
  const SetDescriptor du = minkowski_sum(dm, delta, upsilon);
  const bool additional = descriptor_subset(m, xv, s.k) && descriptor_subset(dm, du, s.gamma);
  rep.params = {{"alpha", alpha}, {"eps", eps}, {"additional", additional ? 1.0 : 0.0}};
  if (!window || !strong.certified()) {
    rep.status = ReportStatus::HypothesisFailed;
    std::string why = !window ? "need U in X in K and Omega in Delta in Gamma" : "pair is not strongly adjoint";
    if (window) {
      for (const auto& c : strong.checks) {
        if (!c.passed) {
          why += " (" + c.name + ": " + c.witness.value_or("failed") + ")";
          break;
        }
      }
    }
    rep.witness = Witness{{}, why};
    return rep;
  }

  std::size_t violations = 0;
  auto record = [&](const std::vector<std::int64_t>& point, const std::string& what) {
    if (violations++ == 0) rep.witness = Witness{point, what};
  };
  // Dual-side inclusion: phi^-1[Bohr_{alpha-eps}(X)] in Bohr_alpha(eta^-1[X]).
  {
    const Subset lhs = preimage(pair.phi, bohr_closed_form(m, x, alpha - eps), Side::Dual);
    const Subset rhs = bohr(preimage(pair.eta, x), alpha);
    for (std::size_t i : lhs.indices()) {
      if (!rhs.contains_index(i)) record(g.residues(i), "first inclusion fails at this character");
    }
  }
  {
    const Subset lhs = preimage(pair.eta, bohr_closed_form(dm, delta, alpha - eps));
    const Subset rhs = bohr(preimage(pair.phi, delta, Side::Dual), alpha);
    for (std::size_t i : lhs.indices()) {
      if (!rhs.contains_index(i)) record(g.residues(i), "second inclusion fails at this element");
    }
  }
  if (additional) {
    const Subset lhs = bohr(preimage(pair.eta, xv), alpha - eps);
    const SetDescriptor target = bohr_closed_form(m, x, alpha + eps);
    for (std::size_t i : lhs.indices()) {
      if (!contains(dm, target, pair.phi(i))) record(g.residues(i), "third inclusion fails at this character");
    }
    const Subset lhs2 = bohr(preimage(pair.phi, du, Side::Dual), alpha - eps);
    const SetDescriptor target2 = bohr_closed_form(dm, delta, alpha + eps);
    for (std::size_t i : lhs2.indices()) {
      if (!contains(m, target2, pair.eta(i))) record(g.residues(i), "fourth inclusion fails at this element");
    }
  }
  rep.lhs = static_cast<double>(violations);
  rep.status = violations == 0 ? ReportStatus::Holds : ReportStatus::ConclusionFailed;
  return rep;
}

void write_certificate_csv(std::ostream& os, const ApproxCertificate& c) {
  os << "check,passed,worst,bound,test_set,witness\n";
  for (const auto& r : c.checks) {
    os << csv::row({csv::field(r.name), r.passed ? "true" : "false", csv::number(r.worst), csv::number(r.bound),
                    csv::field(r.test_set), csv::field(r.witness.value_or(""))})
       << '\n';
  }
}

}  // namespace finharm
