#include "finharm/lifting_transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "finharm/csv.hpp"
#include "finharm/errors.hpp"
#include "finharm/parallel.hpp"

namespace finharm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxGrid = std::size_t{1} << 22;

std::vector<double> midpoints(double lo, double hi, std::size_t count) {
  std::vector<double> v(count);
  const double h = (hi - lo) / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = lo + (static_cast<double>(i) + 0.5) * h;
  return v;
}

std::int64_t ipow(std::int64_t p, int e) {
  std::int64_t v = 1;
  for (int i = 0; i < e; ++i) {
    if (v > std::numeric_limits<std::int64_t>::max() / p) throw ResourceError("p-adic grid too large");
    v *= p;
  }
  return v;
}

// Scalar coordinate of a one-dimensional point (angle, real, integer).
double coordinate(const LcaPoint& x) {
  return x.kind == ModelKind::Integers ? static_cast<double>(x.integer) : x.real;
}

bool is_scalar_model(ModelKind k) {
  return k == ModelKind::Circle || k == ModelKind::Reals || k == ModelKind::Integers;
}

// Distance used to match phi(gamma) with a grid character.
double distance(const LcaModel& m, const LcaPoint& a, const LcaPoint& b) {
  switch (m.kind) {
    case ModelKind::Circle: {
      double r = std::remainder(a.real - b.real, kTwoPi);
      return std::abs(r);
    }
    case ModelKind::Reals: return std::abs(a.real - b.real);
    case ModelKind::Integers: return std::abs(static_cast<double>(a.integer - b.integer));
    case ModelKind::Finite: return a.residues == b.residues ? 0.0 : 1.0;
    case ModelKind::Tower: {
      const int v = valuation(m, subtract(m, a, b));
      return v >= kInfiniteValuation ? 0.0 : std::pow(static_cast<double>(m.prime), -v);
    }
    case ModelKind::Product: {
      double w = 0.0;
      for (std::size_t i = 0; i < m.factors.size(); ++i) w = std::max(w, distance(m.factors[i], a.parts[i], b.parts[i]));
      return w;
    }
  }
  return kInf;
}

double l1_of(const Signal& f) {
  double s = 0.0;
  for (const auto& z : f.values()) s += std::abs(z);
  return f.scale() * s;
}

void require_source(const Signal& f, const ApproxMap& eta) {
  if (f.size() != eta.source.count()) {
    throw ShapeError("signal has " + std::to_string(f.size()) + " values but the map's source has " +
                     std::to_string(eta.source.count()) + " elements");
  }
}

Complex modified_ft_image(const Signal& f, const LcaModel& m, const std::vector<LcaPoint>& image,
                          const LcaCharacter& chi) {
  Complex s = 0.0;
  for (std::size_t a = 0; a < image.size(); ++a) s += f[a] * std::conj(eval_pairing(m, image[a], chi));
  return f.scale() * s;
}

// chi + Omega lies in Gamma.
bool translate_inside(const LcaModel& dm, const LcaPoint& chi, const SetDescriptor& omega, const SetDescriptor& gamma) {
  if (!contains(dm, gamma, chi)) return false;
  if (gamma.kind == DescriptorKind::Whole) return true;
  switch (omega.kind) {
    case DescriptorKind::Arc:
      return gamma.kind == DescriptorKind::Arc &&
             std::abs(coordinate(chi)) + omega.radius <= gamma.radius + kArgSlack;
    case DescriptorKind::Interval:
      return gamma.kind == DescriptorKind::Interval &&
             std::abs(coordinate(chi)) + omega.radius <= gamma.radius * (1.0 + 1e-12) + 1e-12;
    case DescriptorKind::IntegerBall:
      return gamma.kind == DescriptorKind::IntegerBall && std::abs(chi.integer) + omega.bound <= gamma.bound;
    case DescriptorKind::SubgroupLevel:
      return descriptor_subset(dm, omega, gamma);
    case DescriptorKind::FiniteSet: {
      const GroupSpec& g = omega.finite->group();
      for (std::size_t i : omega.finite->indices()) {
        if (!contains(dm, gamma, add(dm, chi, LcaPoint::finite(g.residues(i))))) return false;
      }
      return true;
    }
    default: return false;
  }
}

}  // namespace

MeasureModel MeasureModel::point_mass(const LcaModel& m, LcaPoint at, Complex weight) {
  MeasureModel mu;
  mu.model = m;
  mu.atoms.push_back({std::move(at), weight});
  return mu;
}

MeasureModel MeasureModel::haar(const LcaModel& m) {
  MeasureModel mu;
  mu.model = m;
  switch (m.kind) {
    case ModelKind::Circle:
      mu.density = RefFunction::trig_poly(m, 0, {Complex(1.0)});
      return mu;
    case ModelKind::Finite: {
      const GroupSpec& g = *m.finite;
      for (std::size_t i = 0; i < g.count(); ++i) mu.atoms.push_back({LcaPoint::finite(g.residues(i)), m.haar_scale});
      return mu;
    }
    default: throw UnsupportedError("Haar measure is a finite measure only on compact models (" + m.name() + ")");
  }
}

MeasureModel MeasureModel::with_density(RefFunction f) {
  MeasureModel mu;
  mu.model = f.model;
  mu.density = std::move(f);
  return mu;
}

double MeasureModel::total_variation() const {
  double s = 0.0;
  for (const auto& a : atoms) s += std::abs(a.weight);
  if (density) {
    // A constant trig polynomial has |f| constant; skip the quadrature.
    if (density->family == RefFamily::TrigPoly && density->coeffs.size() == 1 && density->first == 0) {
      s += std::abs(density->coeffs[0]) * density->model.haar_scale;
    } else {
      s += l1_norm(*density);
    }
  }
  return s;
}

Complex measure_of(const MeasureModel& mu, const LcaPoint& x, const SetDescriptor& u) {
  Complex s = 0.0;
  for (const auto& a : mu.atoms) {
    if (contains(mu.model, u, subtract(mu.model, a.point, x))) s += a.weight;
  }
  if (mu.density) s += integrate_over(*mu.density, x, u);
  return s;
}

Complex fourier_stieltjes(const MeasureModel& mu, const LcaCharacter& chi) {
  Complex s = 0.0;
  for (const auto& a : mu.atoms) s += a.weight * std::conj(eval_pairing(mu.model, a.point, chi));
  if (mu.density) s += evaluate(reference_transform(*mu.density), chi);
  return s;
}

double scaling_d(const ApproxMap& eta, const SetDescriptor& u) {
  const std::size_t c = preimage(eta, u).size();
  if (c == 0) throw DomainError("eta^-1[U] is empty for U = " + to_string(u));
  return haar_measure(eta.target, u) / static_cast<double>(c);
}

SampleGrid sample_grid(const LcaModel& m, const SetDescriptor& k, const SetDescriptor& u, std::size_t count) {
  validate(m, k);
  if (count == 0) throw ParameterError("grid needs at least one point");
  SampleGrid g;
  switch (m.kind) {
    case ModelKind::Circle: {
      const double r = k.kind == DescriptorKind::Whole ? kPi : std::min(k.radius, kPi);
      for (double t : midpoints(-r, r, count)) g.points.push_back(LcaPoint::circle(t));
      g.weights.assign(count, m.haar_scale * (2.0 * r / kTwoPi) / static_cast<double>(count));
      g.description = std::to_string(count) + " midpoints of " + to_string(k);
      return g;
    }
    case ModelKind::Reals: {
      if (k.kind != DescriptorKind::Interval) throw DomainError("K must be a compact interval on the reals");
      for (double t : midpoints(-k.radius, k.radius, count)) g.points.push_back(LcaPoint::reals(t));
      g.weights.assign(count, m.haar_scale * 2.0 * k.radius / static_cast<double>(count));
      g.description = std::to_string(count) + " midpoints of " + to_string(k);
      return g;
    }
    case ModelKind::Integers: {
      if (k.kind != DescriptorKind::IntegerBall) throw DomainError("K must be a finite ball in the integers");
      for (std::int64_t i = -k.bound; i <= k.bound; ++i) g.points.push_back(LcaPoint::integer_point(i));
      g.weights.assign(g.points.size(), m.haar_scale);
      g.description = "every point of " + to_string(k);
      return g;
    }
    case ModelKind::Finite: {
      const GroupSpec& grp = *m.finite;
      for (std::size_t i = 0; i < grp.count(); ++i) {
        LcaPoint p = LcaPoint::finite(grp.residues(i));
        if (contains(m, k, p)) g.points.push_back(std::move(p));
      }
      g.weights.assign(g.points.size(), m.haar_scale);
      g.description = "every point of " + to_string(k);
      return g;
    }
    case ModelKind::Tower: {
      if (k.kind != DescriptorKind::SubgroupLevel || u.kind != DescriptorKind::SubgroupLevel || u.level < k.level) {
        throw DomainError("tower grids need K = p^i Z_p containing U = p^l Z_p");
      }
      const std::int64_t p = m.prime;
      const std::int64_t reps = ipow(p, u.level - k.level);
      if (static_cast<std::size_t>(reps) > kMaxGrid) throw ResourceError("too many cosets of U in K");
      for (std::int64_t t = 0; t < reps; ++t) {
        const std::int64_t c = t - reps / 2;
        if (k.level >= 0) g.points.push_back(LcaPoint::tower(p, c * ipow(p, k.level), 0));
        else g.points.push_back(LcaPoint::tower(p, c, -k.level));
      }
      g.weights.assign(g.points.size(), haar_measure(m, u));
      g.description = "one point per coset of " + to_string(u) + " in " + to_string(k);
      return g;
    }
    case ModelKind::Product: {
      if (k.kind != DescriptorKind::Box || u.kind != DescriptorKind::Box) throw DomainError("product grids need boxes");
      const auto per = std::max<std::size_t>(2, static_cast<std::size_t>(std::sqrt(static_cast<double>(count))));
      std::vector<SampleGrid> parts;
      std::size_t total = 1;
      for (std::size_t i = 0; i < m.factors.size(); ++i) {
        parts.push_back(sample_grid(m.factors[i], k.parts[i], u.parts[i], per));
        total *= parts.back().points.size();
        if (total > kMaxGrid) throw ResourceError("product grid too large");
      }
      for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rest = flat;
        std::vector<LcaPoint> coords(parts.size());
        double w = 1.0;
        for (std::size_t i = parts.size(); i-- > 0;) {
          const std::size_t j = rest % parts[i].points.size();
          rest /= parts[i].points.size();
          coords[i] = parts[i].points[j];
          w *= parts[i].weights[j];
        }
        g.points.push_back(LcaPoint::product(std::move(coords)));
        g.weights.push_back(w);
      }
      g.description = "product of per-factor grids";
      return g;
    }
  }
  throw DomainError("unsupported model for grids");
}

PreimageIndex::PreimageIndex(const ApproxMap& eta, SetDescriptor u) : eta_(&eta), u_(std::move(u)) {
  validate(eta.target, u_);
  image_ = eta.image();
  const DescriptorKind k = u_.kind;
  scalar_ = is_scalar_model(eta.target.kind) &&
            (k == DescriptorKind::Arc || k == DescriptorKind::Interval || k == DescriptorKind::IntegerBall);
  if (scalar_) {
    sorted_.reserve(image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i) sorted_.emplace_back(coordinate(image_[i]), i);
    std::sort(sorted_.begin(), sorted_.end());
  }
  base_ = query(identity(eta.target)).size();
}

std::vector<std::size_t> PreimageIndex::query(const LcaPoint& x) const {
  const LcaModel& m = eta_->target;
  std::vector<std::size_t> out;
  auto keep = [&](std::size_t i) {
    if (contains(m, u_, subtract(m, image_[i], x))) out.push_back(i);
  };
  if (!scalar_ || (u_.kind == DescriptorKind::Arc && u_.radius >= kPi)) {
    for (std::size_t i = 0; i < image_.size(); ++i) keep(i);
    return out;
  }
  const double r = u_.kind == DescriptorKind::IntegerBall ? static_cast<double>(u_.bound) : u_.radius;
  const double c = coordinate(x);
  const double pad = 1e-9 * std::max(1.0, std::abs(c) + r);
  auto scan = [&](double lo, double hi) {
    auto it = std::lower_bound(sorted_.begin(), sorted_.end(), std::make_pair(lo, std::size_t{0}));
    for (; it != sorted_.end() && it->first <= hi; ++it) keep(it->second);
  };
  if (m.kind == ModelKind::Circle) {
    for (double shift : {-kTwoPi, 0.0, kTwoPi}) scan(c - r - pad + shift, c + r + pad + shift);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  } else {
    scan(c - r - pad, c + r + pad);
    std::sort(out.begin(), out.end());
  }
  return out;
}

std::string to_string(LiftingMode m) {
  switch (m) {
    case LiftingMode::WeakLifting: return "weak-lifting";
    case LiftingMode::Lifting: return "lifting";
    case LiftingMode::Approximation: return "approximation";
  }
  return "?";
}

namespace {

// Shared driver: deviation(x, preimage of x + U) per grid point.
template <class Dev>
LiftingReport run_grid(LiftingMode mode, const ApproxMap& eta, const SetDescriptor& u, const SetDescriptor& k,
                       double delta, std::size_t grid_count, Dev&& dev) {
  if (!(delta >= 0.0)) throw ParameterError("delta must be non-negative");
  const PreimageIndex index(eta, u);
  if (index.base_count() == 0) throw DomainError("eta^-1[U] is empty for U = " + to_string(u));
  const SampleGrid grid = sample_grid(eta.target, k, u, grid_count);
  std::vector<double> devs(grid.points.size());
  parallel_for(0, grid.points.size(), [&](std::size_t i) {
    devs[i] = dev(grid.points[i], index.query(grid.points[i]), index.base_count());
  }, 16);
  LiftingReport rep;
  rep.mode = mode;
  rep.delta = delta;
  rep.grid = grid.description;
  rep.grid_size = grid.points.size();
  std::size_t worst = 0;
  for (std::size_t i = 0; i < devs.size(); ++i) {
    if (devs[i] > delta) rep.exceptional_mass += grid.weights[i];
    if (devs[i] > devs[worst]) worst = i;
  }
  if (!devs.empty()) {
    rep.worst_deviation = devs[worst];
    rep.worst_point = grid.points[worst];
  }
  rep.passed = mode == LiftingMode::Approximation ? rep.worst_deviation <= delta : rep.exceptional_mass <= delta;
  return rep;
}

}  // namespace

LiftingReport is_weak_lifting(const Signal& f, const MeasureModel& mu, const ApproxMap& eta, const SetDescriptor& u,
                              const SetDescriptor& k, double delta, std::size_t grid_count) {
  require_source(f, eta);
  if (!mu.model.same_group(eta.target)) throw DomainError("measure and map live on different models");
  const double mu_u = haar_measure(eta.target, u);
  return run_grid(LiftingMode::WeakLifting, eta, u, k, delta, grid_count,
                  [&](const LcaPoint& x, const std::vector<std::size_t>& pre, std::size_t base) {
                    Complex s = 0.0;
                    for (std::size_t a : pre) s += f[a];
                    return std::abs(measure_of(mu, x, u) / mu_u - s / static_cast<double>(base));
                  });
}

LiftingReport is_lifting(const Signal& f, const RefFunction& f_cont, const ApproxMap& eta, const SetDescriptor& u,
                         const SetDescriptor& k, double delta, std::size_t grid_count) {
  LiftingReport r = is_weak_lifting(f, MeasureModel::with_density(f_cont), eta, u, k, delta, grid_count);
  r.mode = LiftingMode::Lifting;
  return r;
}

Signal sample_lifting(const RefFunction& f_cont, const ApproxMap& eta, double d) {
  if (!f_cont.model.same_group(eta.target)) throw DomainError("function and map live on different models");
  const auto image = eta.image();
  std::vector<Complex> v(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) v[i] = evaluate(f_cont, image[i]);
  return Signal(eta.source, std::move(v), d);
}

LiftingReport is_approximation(const Signal& f, const RefFunction& f_cont, const ApproxMap& eta,
                               const SetDescriptor& u, const SetDescriptor& k, double delta, std::size_t grid_count) {
  require_source(f, eta);
  return run_grid(LiftingMode::Approximation, eta, u, k, delta, grid_count,
                  [&](const LcaPoint& x, const std::vector<std::size_t>& pre, std::size_t) {
                    const Complex fx = evaluate(f_cont, x);
                    double w = 0.0;
                    for (std::size_t a : pre) w = std::max(w, std::abs(fx - f[a]));
                    return w;
                  });
}

double delta1_of_approx(const RefFunction& f_cont, const ApproxMap& eta, const SetDescriptor& u,
                        const SetDescriptor& k, double delta, std::size_t grid_count) {
  const LiftingReport r = run_grid(LiftingMode::Approximation, eta, u, k, delta, grid_count,
                                   [&](const LcaPoint& x, const std::vector<std::size_t>& pre, std::size_t base) {
                                     const double q = static_cast<double>(pre.size()) / static_cast<double>(base);
                                     return (1.0 + q) * delta + std::abs(1.0 - q) * std::abs(evaluate(f_cont, x));
                                   });
  return r.worst_deviation;
}

Complex modified_ft(const Signal& f, const ApproxMap& eta, const LcaCharacter& chi) {
  require_source(f, eta);
  return modified_ft_image(f, eta.target, eta.image(), chi);
}

std::vector<LcaPoint> character_grid(const LcaModel& dual, const SetDescriptor& gamma0, std::size_t count) {
  validate(dual, gamma0);
  if (count == 0) throw ParameterError("grid needs at least one point");
  std::vector<LcaPoint> out;
  auto line = [&](double r, auto make) {
    if (count == 1) {
      out.push_back(make(0.0));
      return;
    }
    for (std::size_t i = 0; i < count; ++i) {
      out.push_back(make(-r + 2.0 * r * static_cast<double>(i) / static_cast<double>(count - 1)));
    }
  };
  switch (gamma0.kind) {
    case DescriptorKind::Interval: line(gamma0.radius, [](double t) { return LcaPoint::reals(t); }); break;
    case DescriptorKind::Arc: line(std::min(gamma0.radius, kPi), [](double t) { return LcaPoint::circle(t); }); break;
    case DescriptorKind::IntegerBall:
      for (std::int64_t m = -gamma0.bound; m <= gamma0.bound; ++m) out.push_back(LcaPoint::integer_point(m));
      break;
    case DescriptorKind::FiniteSet: {
      const GroupSpec& g = gamma0.finite->group();
      for (std::size_t i : gamma0.finite->indices()) out.push_back(LcaPoint::finite(g.residues(i)));
      break;
    }
    default: throw UnsupportedError("no character grid for " + to_string(gamma0));
  }
  return out;
}

TransformErrorReport transform_experiment(const RefFunction& f_cont, const AdjointPair& pair,
                                          const std::vector<LcaPoint>& grid) {
  const ApproxMap& eta = pair.eta;
  const LcaModel& dm = pair.phi.target;
  const Signal f = sample_lifting(f_cont, eta, pair.d);
  const Spectrum fh = dft(f);
  const RefFunction ref = reference_transform(f_cont);
  const auto image = eta.image();
  const auto phis = pair.phi.image();

  TransformErrorReport rep;
  rep.grid = std::to_string(grid.size()) + " characters";
  rep.bound = (2.0 * l1_norm(f_cont) + 3.0) * pair.sets.alpha;
  rep.rows.resize(grid.size());
  parallel_for(0, grid.size(), [&](std::size_t i) {
    TransformRow& row = rep.rows[i];
    row.chi = grid[i];
    row.reference = evaluate(ref, grid[i]);
    row.mft = modified_ft_image(f, eta.target, image, grid[i]);
    double best = kInf;
    for (std::size_t g = 0; g < phis.size(); ++g) {
      const double dist = distance(dm, phis[g], grid[i]);
      if (dist < best) {
        best = dist;
        row.gamma = g;
      }
    }
    row.match_slack = best;
    row.dft = fh[row.gamma];
    row.covered = contains(dm, pair.sets.gamma, grid[i]) &&
                  contains(dm, pair.sets.omega, subtract(dm, phis[row.gamma], grid[i]));
    row.mft_err = std::abs(row.reference - row.mft);
    row.dft_err = std::abs(row.reference - row.dft);
  }, 4);
  rep.bound_satisfied = true;
  for (const auto& row : rep.rows) {
    rep.sup_mft_err = std::max(rep.sup_mft_err, row.mft_err);
    if (row.covered) {
      rep.sup_dft_err = std::max(rep.sup_dft_err, row.dft_err);
      if (row.dft_err > rep.bound) rep.bound_satisfied = false;
    }
  }
  return rep;
}

void write_transform_csv(std::ostream& os, const TransformErrorReport& r) {
  os << "chi,ref_re,ref_im,mft_err,dft_err,bound,pass\n";
  for (const auto& row : r.rows) {
    std::string chi;
    switch (row.chi.kind) {
      case ModelKind::Circle:
      case ModelKind::Reals: chi = csv::number(row.chi.real); break;
      case ModelKind::Integers: chi = csv::number(row.chi.integer); break;
      default: chi = csv::field(to_string(row.chi));
    }
    const char* pass = !row.covered ? "uncovered" : (row.dft_err <= r.bound ? "1" : "0");
    os << csv::row({chi, csv::number(row.reference.real()), csv::number(row.reference.imag()),
                    csv::number(row.mft_err), csv::number(row.dft_err), csv::number(r.bound), pass})
       << '\n';
  }
}

namespace {

BoundReport hypothesis_failed(BoundReport rep, std::string why) {
  rep.status = ReportStatus::HypothesisFailed;
  rep.witness = Witness{{}, std::move(why)};
  return rep;
}

// max over grid chi and gamma with phi(gamma) in chi + Omega of |ref(chi) - f_hat(gamma)|.
template <class Ref>
double matched_error(const AdjointPair& pair, const Spectrum& fh, const std::vector<LcaPoint>& grid, Ref&& ref,
                     std::optional<std::size_t>* witness) {
  const LcaModel& dm = pair.phi.target;
  const auto phis = pair.phi.image();
  std::vector<double> worst(grid.size(), 0.0);
  std::vector<std::size_t> arg(grid.size(), phis.size());
  parallel_for(0, grid.size(), [&](std::size_t i) {
    const Complex r = ref(grid[i]);
    for (std::size_t g = 0; g < phis.size(); ++g) {
      if (!contains(dm, pair.sets.omega, subtract(dm, phis[g], grid[i]))) continue;
      const double e = std::abs(r - fh[g]);
      if (arg[i] == phis.size() || e > worst[i]) {
        worst[i] = e;
        arg[i] = g;
      }
    }
  }, 4);
  double w = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (arg[i] != phis.size() && worst[i] >= w) {
      w = worst[i];
      *witness = arg[i];
    }
  }
  return w;
}

}  // namespace

BoundReport check_measure_transform_bound(const MeasureModel& mu, const Signal& f, const AdjointPair& pair,
                                          const std::vector<LcaPoint>& grid, double delta, std::size_t lifting_grid) {
  const ApproxMap& eta = pair.eta;
  const AlphaAdjointSets& s = pair.sets;
  const LcaModel& dm = pair.phi.target;
  require_source(f, eta);
  const double alpha = s.alpha;
  const double mu_norm = mu.total_variation();
  const double bound = (2.0 * mu_norm + 3.0) * alpha;

  BoundReport rep;
  rep.statement = "measure_transform_bound";
  rep.rhs = bound;
  rep.params = {{"alpha", alpha}, {"delta", delta}, {"mu_norm", mu_norm}, {"f_l1", l1_of(f)}};

  if (!(delta > 0.0 && delta <= alpha)) return hypothesis_failed(rep, "need 0 < delta <= alpha");
  for (const auto& chi : grid) {
    if (!translate_inside(dm, chi, s.omega, s.gamma)) {
      return hypothesis_failed(rep, "grid character " + to_string(chi) + " has chi + Omega outside Gamma");
    }
  }
  const double pdev = window_pairing_deviation(pair);
  rep.params.emplace_back("pairing_deviation", pdev);
  if (pdev > alpha + kArgSlack) return hypothesis_failed(rep, "pairing deviation exceeds alpha on the window");

  const LiftingReport lift = is_weak_lifting(f, mu, eta, s.u, s.k, delta, lifting_grid);
  rep.params.emplace_back("lifting_worst", lift.worst_deviation);
  rep.params.emplace_back("lifting_exceptional_mass", lift.exceptional_mass);
  if (!lift.passed) return hypothesis_failed(rep, "f is not a weak (U, delta) lifting of mu on K");

  const double du = scaling_d(eta, s.u);
  double outside = 0.0;
  const auto image = eta.image();
  for (std::size_t a = 0; a < image.size(); ++a) {
    if (!contains(eta.target, s.k, image[a])) outside += std::abs(f[a]);
  }
  outside *= du;
  rep.params.emplace_back("mass_outside_K", outside);
  if (outside > delta) return hypothesis_failed(rep, "mass of f outside eta^-1[K] exceeds delta");
  if (l1_of(f) > mu_norm * (1.0 + kCheckRelTol)) return hypothesis_failed(rep, "||f||_1 exceeds ||mu||");

  double mft_err = 0.0;
  for (const auto& chi : grid) {
    mft_err = std::max(mft_err, std::abs(fourier_stieltjes(mu, chi) - modified_ft_image(f, eta.target, image, chi)));
  }
  rep.params.emplace_back("modified_ft_error", mft_err);
  if (mft_err > alpha) return hypothesis_failed(rep, "|mu_hat - F_{eta,d}(f)| exceeds alpha on the grid");

  const Spectrum fh = dft(f);
  std::optional<std::size_t> w;
  rep.lhs = matched_error(pair, fh, grid, [&](const LcaPoint& chi) { return fourier_stieltjes(mu, chi); }, &w);
  if (rep.lhs > bound) {
    rep.status = ReportStatus::ConclusionFailed;
    rep.witness = Witness{eta.source.residues(*w), "transform error exceeds the bound at this character"};
  }
  return rep;
}

BoundReport check_spectral_tail_bound(const RefFunction& f_cont, const Signal& f, const AdjointPair& pair,
                                      const std::vector<LcaPoint>& grid, double delta, double t,
                                      const SetDescriptor& v, const SetDescriptor& upsilon) {
  const ApproxMap& eta = pair.eta;
  const AlphaAdjointSets& s = pair.sets;
  const LcaModel& dm = pair.phi.target;
  require_source(f, eta);
  const double alpha = s.alpha;
  const double big = l1_norm(f_cont);
  const double small = l1_of(f);

  BoundReport rep;
  rep.statement = "spectral_tail_bound";
  rep.rhs = t * small;
  rep.params = {{"alpha", alpha}, {"delta", delta}, {"t", t}, {"f_cont_l1", big}, {"f_l1", small}};

  if (!(t > 0.0 && t < 1.0)) return hypothesis_failed(rep, "need 0 < t < 1");
  if (!(delta > 0.0 && delta <= alpha)) return hypothesis_failed(rep, "need 0 < delta <= alpha");
  const double cap = 2.0 * t * t * big * std::sin(alpha / 2.0);
  rep.params.emplace_back("delta_cap", cap);
  if (delta > cap) return hypothesis_failed(rep, "need delta <= 2 t^2 ||f||_1 sin(alpha/2)");
  if (!(t * big < small && small <= big * (1.0 + kCheckRelTol))) {
    return hypothesis_failed(rep, "need t ||f_cont||_1 < ||f||_1 <= ||f_cont||_1");
  }

  const GroupSpec& g = eta.source;
  const Subset pu = preimage(eta, s.u);
  double shift_worst = 0.0;
  {
    const auto shifts = pu.indices();
    std::vector<double> per(shifts.size(), 0.0);
    parallel_for(0, shifts.size(), [&](std::size_t i) {
      double acc = 0.0;
      for (std::size_t x = 0; x < f.size(); ++x) acc += std::abs(f[g.sub_index(x, shifts[i])] - f[x]);
      per[i] = f.scale() * acc;
    }, 1);
    for (double p : per) shift_worst = std::max(shift_worst, p);
  }
  rep.params.emplace_back("shift_l1", shift_worst);
  if (shift_worst > delta) return hypothesis_failed(rep, "||f_a - f||_1 exceeds delta for some a in eta^-1[U]");

  const ApproxCertificate strong = verify_strong_adjointness(pair, alpha, delta, v, upsilon);
  if (!strong.certified()) {
    std::string why = "pair is not strongly (alpha, delta)-adjoint";
    for (const auto& c : strong.checks) {
      if (!c.passed) {
        why += " (" + c.name + ": " + c.witness.value_or("failed") + ")";
        break;
      }
    }
    return hypothesis_failed(rep, why);
  }

  const Spectrum fh = dft(f);
  const SetDescriptor target = bohr_closed_form(eta.target, v, delta);
  const auto phis = pair.phi.image();
  double tail = 0.0;
  std::optional<std::size_t> tail_at;
  for (std::size_t c = 0; c < phis.size(); ++c) {
    if (contains(dm, target, phis[c])) continue;
    const double a = std::abs(fh[c]);
    if (!tail_at || a > tail) {
      tail = a;
      tail_at = c;
    }
  }
  rep.lhs = tail;
  rep.params.emplace_back("outside_count", static_cast<double>(phis.size() - preimage(pair.phi, target, Side::Dual).size()));

  const RefFunction ref = reference_transform(f_cont);
  std::optional<std::size_t> w;
  const double grid_err = matched_error(pair, fh, grid, [&](const LcaPoint& chi) { return evaluate(ref, chi); }, &w);
  const double grid_bound = (2.0 * small + 3.0) * alpha;
  rep.params.emplace_back("grid_error", grid_err);
  rep.params.emplace_back("grid_bound", grid_bound);

  if (tail_at && tail >= rep.rhs) {
    rep.status = ReportStatus::ConclusionFailed;
    rep.witness = Witness{g.residues(*tail_at), "|f_hat| reaches t ||f||_1 outside phi^-1[Bohr_delta(V)]"};
  }
  rep.params.emplace_back("grid_within_bound", grid_err <= grid_bound ? 1.0 : 0.0);
  return rep;
}

}  // namespace finharm
