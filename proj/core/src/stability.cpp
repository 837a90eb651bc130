#include "finharm/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "finharm/errors.hpp"
#include "finharm/parallel.hpp"

namespace finharm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double principal(double v) {
  double r = std::remainder(v, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

void require_inside(const Subset& x, const Subset& domain, const char* what) {
  if (!(x.group() == domain.group())) throw ShapeError(std::string(what) + " lives on a different group");
  if (!x.is_subset_of(domain.as_side(x.side()))) throw ContractError(std::string(what) + " is not inside the domain");
}

std::size_t generator_multiple(const GroupSpec& g, std::size_t j, std::int64_t t) {
  std::vector<std::int64_t> r(g.rank(), 0);
  r[j] = normalize_residue(t, g.orders()[j]);
  return g.index_of_residues(r);
}

}  // namespace

PartialMap::PartialMap(Subset domain, std::vector<std::complex<double>> values) : domain_(std::move(domain)) {
  if (values.size() != domain_.size()) {
    throw ShapeError("partial map has " + std::to_string(values.size()) + " values for a domain of " +
                     std::to_string(domain_.size()));
  }
  dense_.assign(domain_.group().count(), std::complex<double>(0.0));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::abs(std::abs(values[i]) - 1.0) > 1e-12) throw DomainError("partial map values must have modulus 1");
    dense_[domain_.indices()[i]] = values[i];
  }
}

PartialMap PartialMap::character(Subset domain, const Character& gamma) {
  const GroupSpec& g = domain.group();
  const std::size_t gi = g.index(gamma);
  std::vector<std::complex<double>> v;
  v.reserve(domain.size());
  for (std::size_t i : domain.indices()) v.push_back(g.pairing_index(i, gi));
  return PartialMap(std::move(domain), std::move(v));
}

PartialMap PartialMap::noisy_character(Subset domain, const Character& gamma, double delta, std::mt19937_64& rng) {
  if (!(delta >= 0.0)) throw ParameterError("noise level must be non-negative");
  const GroupSpec& g = domain.group();
  const std::size_t gi = g.index(gamma);
  std::uniform_real_distribution<double> u(-delta, delta);
  std::vector<std::complex<double>> v;
  v.reserve(domain.size());
  for (std::size_t i : domain.indices()) v.push_back(std::polar(1.0, g.pairing_arg_index(i, gi) + u(rng)));
  return PartialMap(std::move(domain), std::move(v));
}

std::complex<double> PartialMap::at(std::size_t index) const {
  if (!domain_.contains_index(index)) throw DomainError("index outside the partial map's domain");
  return dense_[index];
}

StabilityCheck is_eps_homomorphic(const PartialMap& g, const Subset& x, double eps) {
  require_inside(x, g.domain(), "X");
  const GroupSpec& grp = g.group();
  const auto& xs = x.indices();
  std::vector<double> worst(xs.size(), 0.0);
  std::vector<std::size_t> partner(xs.size(), 0);
  std::vector<char> hit(xs.size(), 0);
  parallel_for(0, xs.size(), [&](std::size_t i) {
    const std::complex<double> gx = g.at(xs[i]);
    for (std::size_t y : xs) {
      const std::size_t s = grp.add_index(xs[i], y);
      if (!x.contains_index(s)) continue;
      const double dev = std::abs(std::arg(gx * g.at(y) * std::conj(g.at(s))));
      if (!hit[i] || dev > worst[i]) {
        worst[i] = dev;
        partner[i] = y;
        hit[i] = 1;
      }
    }
  }, 8);
  StabilityCheck out;
  out.holds = true;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (hit[i] && (out.witness.empty() || worst[i] > out.worst)) {
      out.worst = worst[i];
      out.witness = {xs[i], partner[i], grp.add_index(xs[i], partner[i])};
    }
  }
  out.holds = out.worst <= eps;
  return out;
}

StabilityCheck is_eps_close(const PartialMap& f, const PartialMap& g, const Subset& x, double eps) {
  require_inside(x, f.domain(), "X");
  require_inside(x, g.domain(), "X");
  StabilityCheck out;
  for (std::size_t i : x.indices()) {
    const double dev = std::abs(std::arg(f.at(i) * std::conj(g.at(i))));
    if (out.witness.empty() || dev > out.worst) {
      out.worst = dev;
      out.witness = {i};
    }
  }
  out.holds = out.worst <= eps;
  return out;
}

std::string to_string(FitStrategy s) { return s == FitStrategy::Brute ? "brute" : "factorwise"; }

double closeness(const PartialMap& g, const Character& gamma, const Subset& a0) {
  require_inside(a0, g.domain(), "A0");
  const GroupSpec& grp = g.group();
  const std::size_t gi = grp.index(gamma);
  double w = 0.0;
  for (std::size_t i : a0.indices()) {
    w = std::max(w, std::abs(principal(std::arg(g.at(i)) - grp.pairing_arg_index(i, gi))));
  }
  return w;
}

bool factorwise_applicable(const Subset& a0) {
  const GroupSpec& g = a0.group();
  if (!a0.contains_index(g.index(g.zero()))) return false;
  for (std::size_t j = 0; j < g.rank(); ++j) {
    for (std::int64_t t = 1; t < g.orders()[j]; t *= 2) {
      if (!a0.contains_index(generator_multiple(g, j, t))) return false;
    }
  }
  return true;
}

namespace {

std::size_t brute_search(const PartialMap& g, const Subset& a0, std::size_t cap) {
  const GroupSpec& grp = g.group();
  if (grp.count() > cap) throw ResourceError("character enumeration exceeds the cap of " + std::to_string(cap));
  // Visit A0 in a scrambled order so wrong characters exceed the running best after few points.
  std::vector<std::size_t> pts = a0.indices();
  std::vector<double> phase(pts.size());
  {
    std::vector<std::size_t> order(pts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng(0x5eed);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> p2(pts.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      p2[i] = pts[order[i]];
      phase[i] = std::arg(g.at(p2[i]));
    }
    pts.swap(p2);
  }
  const std::size_t n = grp.count();
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(n, 64));
  const std::size_t per = (n + chunks - 1) / chunks;
  std::vector<double> best(chunks, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> arg(chunks, n);
  parallel_for(0, chunks, [&](std::size_t c) {
    const std::size_t lo = c * per, hi = std::min(n, lo + per);
    for (std::size_t gi = lo; gi < hi; ++gi) {
      double w = 0.0;
      bool pruned = false;
      for (std::size_t k = 0; k < pts.size(); ++k) {
        w = std::max(w, std::abs(principal(phase[k] - grp.pairing_arg_index(pts[k], gi))));
        if (w > best[c]) {
          pruned = true;
          break;
        }
      }
      if (!pruned && w < best[c]) {
        best[c] = w;
        arg[c] = gi;
      }
    }
  }, 1);
  std::size_t winner = n;
  double b = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < chunks; ++c) {
    if (arg[c] != n && best[c] < b) {
      b = best[c];
      winner = arg[c];
    }
  }
  return winner == n ? 0 : winner;
}

std::size_t factorwise_search(const PartialMap& g, const Subset& a0) {
  const GroupSpec& grp = g.group();
  if (!factorwise_applicable(a0)) {
    throw ContractError("factorwise fit needs 0 and t e_j for t = 1, 2, 4, ... < n_j in A0");
  }
  const std::complex<double> g0 = g.at(grp.index(grp.zero()));
  std::vector<std::int64_t> freq(grp.rank());
  for (std::size_t j = 0; j < grp.rank(); ++j) {
    const std::int64_t nj = grp.orders()[j];
    double slope = 0.0;
    for (std::int64_t t = 1; t < nj; t *= 2) {
      const double psi = std::arg(g.at(generator_multiple(grp, j, t)) / g0);
      slope += principal(psi - slope * static_cast<double>(t)) / static_cast<double>(t);
    }
    const auto f = static_cast<std::int64_t>(std::llround(slope * static_cast<double>(nj) / kTwoPi));
    freq[j] = normalize_residue(f, nj);
  }
  return grp.index_of_residues(freq);
}

}  // namespace

FitResult fit_character(const PartialMap& g, const Subset& a0, FitStrategy strategy, std::size_t cap) {
  require_inside(a0, g.domain(), "A0");
  if (a0.empty()) throw ParameterError("A0 must be nonempty");
  FitResult r;
  r.strategy = strategy;
  r.index = strategy == FitStrategy::Brute ? brute_search(g, a0, cap) : factorwise_search(g, a0);
  r.character = g.group().character(r.index);
  r.closeness = closeness(g, r.character, a0);
  return r;
}

BoundReport bohr_chain_check(const std::vector<Subset>& chain, double alpha, double beta) {
  BoundReport rep;
  rep.statement = "bohr_chain";
  rep.rhs = 0.0;
  const std::size_t n = chain.empty() ? 0 : chain.size() - 1;
  rep.params = {{"alpha", alpha}, {"beta", beta}, {"n", static_cast<double>(n)}};
  auto fail = [&](std::string why) {
    rep.status = ReportStatus::HypothesisFailed;
    rep.witness = Witness{{}, std::move(why)};
    return rep;
  };
  if (chain.empty()) return fail("chain is empty");
  const double top = 2.0 * kPi / 3.0;
  if (!(alpha > 0.0 && alpha < top && beta > 0.0 && beta < top)) return fail("need alpha, beta in (0, 2 pi / 3)");
  const GroupSpec& g = chain[0].group();
  for (std::size_t j = 0; j < chain.size(); ++j) {
    if (!(chain[j].group() == g) || chain[j].side() != Side::Group) {
      return fail("A_" + std::to_string(j) + " is not a subset of the same group");
    }
    if (!chain[j].is_symmetric()) return fail("A_" + std::to_string(j) + " is not symmetric");
  }
  if (!chain[n].contains_index(g.index(g.zero()))) return fail("0 is not in A_n");
  for (std::size_t j = 1; j <= n; ++j) {
    if (!chain[j].is_subset_of(chain[j - 1])) return fail("A_" + std::to_string(j) + " is not inside A_" + std::to_string(j - 1));
    if (!sumset(chain[j], chain[j]).is_subset_of(chain[j - 1])) {
      return fail("A_" + std::to_string(j) + " + A_" + std::to_string(j) + " is not inside A_" + std::to_string(j - 1));
    }
    rep.params.emplace_back("index_" + std::to_string(j),
                            static_cast<double>(chain[j - 1].size()) / static_cast<double>(chain[j].size()));
  }
  const Subset twice = bohr(bohr(chain[n], alpha), beta);
  std::size_t bad = 0;
  for (std::size_t i : twice.indices()) {
    if (chain[0].contains_index(i)) continue;
    if (bad++ == 0) rep.witness = Witness{g.residues(i), "point of Bohr_beta(Bohr_alpha(A_n)) outside A_0"};
  }
  rep.lhs = static_cast<double>(bad);
  rep.params.emplace_back("double_bohr_size", static_cast<double>(twice.size()));
  rep.status = bad == 0 ? ReportStatus::Holds : ReportStatus::ConclusionFailed;
  return rep;
}

}  // namespace finharm
