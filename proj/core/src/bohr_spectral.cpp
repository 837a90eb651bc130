#include "finharm/bohr_spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "finharm/csv.hpp"
#include "finharm/errors.hpp"
#include "wide_int.hpp"
#include "finharm/parallel.hpp"

namespace finharm {

namespace {

constexpr double kPi = std::numbers::pi;

bool arg_within(std::int64_t turn, std::int64_t size, double alpha) {
  return std::abs(turn_arg(turn, size)) <= alpha + kArgSlack;
}

}  // namespace

Subset bohr(const Subset& a, double alpha, std::size_t cap) {
  if (!(alpha >= 0.0 && alpha <= kPi)) throw DomainError("Bohr radius must lie in [0, pi]");
  const GroupSpec& g = a.group();
  if (g.count() > cap) throw ResourceError("Bohr set over " + g.to_string() + " exceeds the cap");
  const Side target = opposite(a.side());
  if (alpha >= kPi) return Subset::whole(g, target);

  const std::size_t r = g.rank();
  const std::int64_t size = g.size();
  std::vector<std::int64_t> coeff;
  coeff.reserve(a.size() * r);
  for (std::size_t x : a.indices()) {
    if (x == 0) continue;  // the identity pairs trivially with everything
    const auto c = g.phase_coefficients(x);
    coeff.insert(coeff.end(), c.begin(), c.end());
  }
  const std::size_t members = coeff.size() / std::max<std::size_t>(r, 1);

  std::vector<char> keep(g.count(), 0);
  parallel_for(0, g.count(), [&](std::size_t y) {
    std::vector<std::int64_t> d(r);
    g.digits(y, d);
    for (std::size_t m = 0; m < members; ++m) {
      detail::int128 k = 0;
      for (std::size_t j = 0; j < r; ++j) k += static_cast<detail::int128>(d[j]) * coeff[m * r + j];
      if (!arg_within(static_cast<std::int64_t>(k % size), size, alpha)) return;
    }
    keep[y] = 1;
  });
  std::vector<bool> mask(keep.begin(), keep.end());
  return Subset::from_mask(g, mask, target);
}

Signal normalized(const Signal& f) {
  return f.with_scale(1.0 / static_cast<double>(f.group().size()));
}

namespace {

// Spectrum and l1 norm under d = 1/|G|.
struct NormalizedData {
  Signal f;
  Spectrum fh;
  double l1;
};

NormalizedData prepare(const Signal& f) {
  Signal fn = normalized(f);
  Spectrum fh = dft(fn);
  const double l1 = norm(fn, 1.0);
  return {std::move(fn), std::move(fh), l1};
}

Subset spec_from(const NormalizedData& nd, double t, double rel) {
  const GroupSpec& g = nd.f.group();
  if (t <= 0.0) return Subset::whole(g, Side::Dual);
  const double thr = t * nd.l1 * (1.0 - rel);
  std::vector<bool> mask(g.count());
  for (std::size_t i = 0; i < g.count(); ++i) mask[i] = std::abs(nd.fh[i]) >= thr;
  return Subset::from_mask(g, mask, Side::Dual);
}

}  // namespace

Subset spec(const Signal& f, double t) { return spec_from(prepare(f), t, kSpecTieTol); }

std::string to_string(ReportStatus s) {
  switch (s) {
    case ReportStatus::Holds:
      return "true";
    case ReportStatus::ConclusionFailed:
      return "false";
    case ReportStatus::HypothesisFailed:
      return "hypothesis_failed";
  }
  return "unknown";
}

double BoundReport::param(std::string_view name) const {
  for (const auto& [k, v] : params) {
    if (k == name) return v;
  }
  throw std::out_of_range("report has no parameter " + std::string(name));
}

namespace {

BoundReport hypothesis_failure(BoundReport r, std::string why,
                               std::vector<std::int64_t> point = {}) {
  r.status = ReportStatus::HypothesisFailed;
  r.witness = Witness{std::move(point), std::move(why)};
  return r;
}

BoundReport conclusion_failure(BoundReport r, std::string why, std::vector<std::int64_t> point = {}) {
  r.status = ReportStatus::ConclusionFailed;
  r.witness = Witness{std::move(point), std::move(why)};
  return r;
}

void require_group_side(const Signal& f, const Subset& s, const char* name) {
  if (!(s.group() == f.group())) throw ShapeError(std::string(name) + " lives on a different group");
  if (s.side() != Side::Group) throw ShapeError(std::string(name) + " must be a subset of G");
}

// Returns the index of the first point violating f >= 0, or npos.
std::size_t first_negative(const Signal& f) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i].imag() != 0.0 || f[i].real() < 0.0) return i;
  }
  return static_cast<std::size_t>(-1);
}

std::size_t first_outside(const Subset& inner_set, const Subset& outer) {
  for (std::size_t i : inner_set.indices()) {
    if (!outer.contains_index(i)) return i;
  }
  return static_cast<std::size_t>(-1);
}

bool is_zero(const Signal& f) {
  return std::all_of(f.values().begin(), f.values().end(), [](const Complex& z) { return z == Complex{}; });
}

constexpr std::size_t npos = static_cast<std::size_t>(-1);

}  // namespace

BoundReport check_energy_lower_bound(const Signal& f, const Subset& d_set) {
  require_group_side(f, d_set, "D");
  BoundReport r;
  r.statement = "energy_lower_bound";
  const GroupSpec& g = f.group();
  if (d_set.empty()) return hypothesis_failure(r, "D is empty");
  if (auto i = first_negative(f); i != npos) {
    return hypothesis_failure(r, "f is not non-negative", g.residues(i));
  }
  const Subset supp = support(f);
  if (!supp.empty()) {
    const Subset ss = sumset(supp, supp);
    if (auto i = first_outside(ss, d_set); i != npos) {
      return hypothesis_failure(r, "supp(f*f) is not contained in D", g.residues(i));
    }
  }
  const NormalizedData nd = prepare(f);
  double lhs = 0.0;
  for (const auto& z : nd.fh.values()) lhs += std::norm(z) * std::norm(z);
  const double ind_l1 = static_cast<double>(d_set.size()) / static_cast<double>(g.size());
  const double rhs = std::pow(nd.l1, 4) / ind_l1;
  r.params = {{"f_l1", nd.l1}, {"D_size", static_cast<double>(d_set.size())}};
  r.lhs = lhs;
  r.rhs = rhs;
  if (lhs < rhs * (1.0 - kCheckRelTol)) {
    return conclusion_failure(r, "sum |f_hat|^4 falls below ||f||_1^4/||1_D||_1");
  }
  return r;
}

BoundReport check_bohr_in_spec(const Signal& f, const Subset& d_set, double alpha, double t) {
  require_group_side(f, d_set, "D");
  BoundReport r;
  r.statement = "bohr_in_spec";
  r.params = {{"alpha", alpha}, {"t", t}};
  const GroupSpec& g = f.group();
  if (!(alpha >= 0.0 && alpha <= kPi / 2 + kArgSlack)) return hypothesis_failure(r, "alpha outside [0, pi/2]");
  if (!(t >= 0.0 && t <= std::cos(alpha) + kArgSlack)) return hypothesis_failure(r, "t outside [0, cos alpha]");
  if (auto i = first_negative(f); i != npos) {
    return hypothesis_failure(r, "f is not non-negative", g.residues(i));
  }
  double fmax = 0.0;
  for (const auto& z : f.values()) fmax = std::max(fmax, std::abs(z));
  for (std::size_t x = 0; x < g.count(); ++x) {
    if (std::abs(f[x] - f[g.neg_index(x)]) > 1e-12 * fmax) {
      return hypothesis_failure(r, "f is not even", g.residues(x));
    }
  }
  if (auto i = first_outside(support(f), d_set); i != npos) {
    return hypothesis_failure(r, "supp f is not contained in D", g.residues(i));
  }
  const NormalizedData nd = prepare(f);
  const Subset b = d_set.empty() ? Subset::whole(g, Side::Dual) : bohr(d_set, alpha);
  r.lhs = static_cast<double>(b.size());
  r.rhs = static_cast<double>(spec_from(nd, t, kSpecTieTol).size());
  const double thr = t * nd.l1 * (1.0 - kCheckRelTol);
  for (std::size_t gamma : b.indices()) {
    if (std::abs(nd.fh[gamma]) < thr) {
      return conclusion_failure(r, "character in Bohr_alpha(D) but outside Spec_t(f)", g.residues(gamma));
    }
  }
  return r;
}

double diffset_threshold(const Signal& f, const Subset& d_set, double alpha) {
  const Signal fn = normalized(f);
  const double l1 = norm(fn, 1.0);
  const double l2 = norm(fn, 2.0);
  const double ind_l2 = std::sqrt(static_cast<double>(d_set.size()) / static_cast<double>(f.group().size()));
  const double c = std::cos(alpha);
  return l1 / (l2 * ind_l2) * std::sqrt(c / (1.0 + c));
}

BoundReport check_spec_bohr_in_diffset(const Signal& f, const Subset& d_set, double alpha, double t) {
  require_group_side(f, d_set, "D");
  BoundReport r;
  r.statement = "spec_bohr_in_diffset";
  r.params = {{"alpha", alpha}, {"t", t}};
  const GroupSpec& g = f.group();
  if (!(alpha > 0.0 && alpha < kPi / 2)) return hypothesis_failure(r, "alpha outside (0, pi/2)");
  if (!(t >= 0.0 && t <= 1.0)) return hypothesis_failure(r, "t outside [0, 1]");
  if (auto i = first_negative(f); i != npos) {
    return hypothesis_failure(r, "f is not non-negative", g.residues(i));
  }
  if (is_zero(f)) return hypothesis_failure(r, "f vanishes identically");
  const Subset supp = support(f);
  if (auto i = first_outside(sumset(supp, supp), d_set); i != npos) {
    return hypothesis_failure(r, "supp(f*f) is not contained in D", g.residues(i));
  }
  const double bound = diffset_threshold(f, d_set, alpha);
  r.params.emplace_back("t_bound", bound);
  if (t > bound * (1.0 + kSpecTieTol)) return hypothesis_failure(r, "t exceeds the admitted threshold");

  const NormalizedData nd = prepare(f);
  const Subset sp = spec_from(nd, t, kCheckRelTol);
  const Subset b = bohr(sp, alpha);
  const Subset dd = difference_set(d_set, d_set);
  r.lhs = static_cast<double>(b.size());
  r.rhs = static_cast<double>(dd.size());
  if (auto i = first_outside(b, dd); i != npos) {
    return conclusion_failure(r, "element of Bohr_alpha(Spec_t f) outside D - D", g.residues(i));
  }
  return r;
}

BoundReport check_spec_size_bounds(const Signal& f, const Subset& d_set, double t) {
  require_group_side(f, d_set, "D");
  BoundReport r;
  r.statement = "spec_size_bounds";
  r.params = {{"t", t}};
  const GroupSpec& g = f.group();
  if (!(t > 0.0 && t <= 1.0)) return hypothesis_failure(r, "t outside (0, 1]");
  if (auto i = first_negative(f); i != npos) {
    return hypothesis_failure(r, "f is not non-negative", g.residues(i));
  }
  if (is_zero(f)) return hypothesis_failure(r, "f vanishes identically");
  const Subset supp = support(f);
  if (auto i = first_outside(sumset(supp, supp), d_set); i != npos) {
    return hypothesis_failure(r, "supp(f*f) is not contained in D", g.residues(i));
  }
  const NormalizedData nd = prepare(f);
  const double l2 = norm(nd.f, 2.0);
  const double ratio = (l2 * l2) / (nd.l1 * nd.l1);
  const double upper = ratio / (t * t);
  const double lower = static_cast<double>(g.size()) / static_cast<double>(d_set.size()) - t * t * ratio;
  const double ind_l2 = std::sqrt(static_cast<double>(d_set.size()) / static_cast<double>(g.size()));
  const bool lower_relevant = t < nd.l1 / (l2 * ind_l2);
  const auto count = static_cast<double>(spec_from(nd, t, kSpecTieTol).size());
  r.params.emplace_back("lower", lower);
  r.params.emplace_back("upper", upper);
  r.params.emplace_back("lower_relevant", lower_relevant ? 1.0 : 0.0);
  r.lhs = count;
  r.rhs = upper;
  if (count > upper * (1.0 + kCheckRelTol)) {
    return conclusion_failure(r, "|Spec_t(f)| exceeds the upper bound");
  }
  if (count < lower - kCheckRelTol * std::max(1.0, std::abs(lower))) {
    return conclusion_failure(r, "|Spec_t(f)| falls below the lower bound");
  }
  return r;
}

BoundReport check_smoothness_decay(const Signal& f, const Subset& c_set, const Subset& d_set, double t,
                                   double alpha, double eps, ShiftNorm variant) {
  require_group_side(f, c_set, "C");
  BoundReport r;
  r.statement = variant == ShiftNorm::Sup ? "smoothness_decay_sup" : "smoothness_decay_l1";
  r.params = {{"t", t}, {"alpha", alpha}, {"eps", eps}};
  const GroupSpec& g = f.group();
  if (is_zero(f)) return hypothesis_failure(r, "f vanishes identically");
  if (!(t > 0.0 && t <= 1.0)) return hypothesis_failure(r, "t outside (0, 1]");
  if (!(alpha > 0.0 && alpha < kPi)) return hypothesis_failure(r, "alpha outside (0, pi)");
  if (!(eps > 0.0)) return hypothesis_failure(r, "eps must be positive");

  const NormalizedData nd = prepare(f);
  const double tol = 1.0 + kSpecTieTol;
  if (variant == ShiftNorm::Sup) {
    require_group_side(f, d_set, "D");
    if (d_set.empty()) return hypothesis_failure(r, "D is empty");
    const Subset supp = support(f);
    const Subset reach = set_union(supp, sumset(supp, c_set));
    if (auto i = first_outside(reach, d_set); i != npos) {
      return hypothesis_failure(r, "supp f together with supp f + C is not contained in D", g.residues(i));
    }
    const double ind_l1 = static_cast<double>(d_set.size()) / static_cast<double>(g.size());
    const double eps_max = 2.0 * t * (nd.l1 / ind_l1) * std::sin(alpha / 2.0);
    r.params.emplace_back("eps_bound", eps_max);
    if (eps > eps_max * tol) return hypothesis_failure(r, "eps exceeds 2 t (||f||_1/||1_D||_1) sin(alpha/2)");
    for (std::size_t a : c_set.indices()) {
      double dev = 0.0;
      for (std::size_t x = 0; x < g.count(); ++x) dev = std::max(dev, std::abs(f[g.sub_index(x, a)] - f[x]));
      if (dev > eps * tol) return hypothesis_failure(r, "||f_a - f||_inf exceeds eps", g.residues(a));
    }
  } else {
    const double eps_max = 2.0 * t * std::sin(alpha / 2.0);
    r.params.emplace_back("eps_bound", eps_max);
    if (eps > eps_max * tol) return hypothesis_failure(r, "eps exceeds 2 t sin(alpha/2)");
    for (std::size_t a : c_set.indices()) {
      double dev = 0.0;
      for (std::size_t x = 0; x < g.count(); ++x) dev += std::abs(f[g.sub_index(x, a)] - f[x]);
      dev /= static_cast<double>(g.size());
      if (dev > eps * nd.l1 * tol) return hypothesis_failure(r, "||f_a - f||_1 exceeds eps ||f||_1", g.residues(a));
    }
  }

  const Subset b = c_set.empty() ? Subset::whole(g, Side::Dual) : bohr(c_set, alpha);
  const double thr = t * nd.l1 * (1.0 + kCheckRelTol);
  r.lhs = static_cast<double>(spec_from(nd, t, kSpecTieTol).size());
  r.rhs = static_cast<double>(b.size());
  for (std::size_t gamma = 0; gamma < g.count(); ++gamma) {
    if (!b.contains_index(gamma) && std::abs(nd.fh[gamma]) >= thr) {
      return conclusion_failure(r, "character in Spec_t(f) but outside Bohr_alpha(C)", g.residues(gamma));
    }
  }
  return r;
}

void write_report_header(std::ostream& os) { os << "statement,params,lhs,rhs,holds,witness\n"; }

void write_report_row(std::ostream& os, const BoundReport& r) {
  std::string params;
  for (std::size_t i = 0; i < r.params.size(); ++i) {
    if (i) params += ';';
    params += r.params[i].first + "=" + csv::number(r.params[i].second);
  }
  std::string witness;
  if (r.witness) {
    std::ostringstream w;
    if (!r.witness->point.empty()) w << to_string(GroupElement{r.witness->point}) << ' ';
    w << r.witness->description;
    witness = w.str();
  }
  os << csv::row({csv::field(r.statement), csv::field(params), csv::number(r.lhs), csv::number(r.rhs),
                  to_string(r.status), csv::field(witness)})
     << '\n';
}

}  // namespace finharm
