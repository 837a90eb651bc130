#include "finharm/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <set>

#include "finharm/errors.hpp"
#include "finharm/fft.hpp"

namespace finharm::experiments {

namespace {

constexpr double kPi = std::numbers::pi;

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

std::int64_t pick_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

std::vector<Complex> gaussian_values(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::vector<Complex> v(n);
  for (auto& z : v) z = {nd(rng), nd(rng)};
  return v;
}

double rel(double a, double b, double scale) { return std::abs(a - b) / std::max(scale, 1e-300); }

Subset random_points(const GroupSpec& g, std::size_t k, std::mt19937_64& rng) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < k; ++i) idx.push_back(pick(rng, g.count()));
  return Subset::from_indices(g, idx);
}

Subset with_extras(const Subset& s, std::mt19937_64& rng) {
  return set_union(s, random_points(s.group(), pick(rng, 4), rng));
}

Subset translate(const Subset& s, std::size_t x0) {
  const GroupSpec& g = s.group();
  std::vector<std::size_t> idx;
  for (std::size_t i : s.indices()) idx.push_back(g.add_index(i, x0));
  return Subset::from_indices(g, idx);
}

// A support of one of three shapes: scattered points, a coset of a random subgroup, a small box.
Subset random_support(const GroupSpec& g, std::mt19937_64& rng) {
  const std::size_t x0 = pick(rng, g.count());
  switch (pick(rng, 3)) {
    case 0: return random_points(g, 1 + pick(rng, std::min<std::size_t>(10, g.count())), rng);
    case 1: return translate(random_subgroup(g, rng), x0);
    default: {
      std::vector<std::int64_t> r;
      for (std::int64_t n : g.orders()) r.push_back(pick_int(rng, 0, std::max<std::int64_t>(0, std::min<std::int64_t>(3, n / 4))));
      return translate(box(g, r), x0);
    }
  }
}

double random_scale(const GroupSpec& g, std::mt19937_64& rng) {
  switch (pick(rng, 3)) {
    case 0: return 1.0;
    case 1: return 1.0 / static_cast<double>(g.size());
    default: return uniform(rng, 0.1, 2.0);
  }
}

// Non-negative weights on s, integer valued half of the time so ties and equality cases occur.
std::vector<Complex> weights(const Subset& s, std::mt19937_64& rng) {
  std::vector<Complex> v(s.group().count(), 0.0);
  const bool integral = pick(rng, 2) == 0;
  const bool flat = pick(rng, 4) == 0;
  for (std::size_t i : s.indices()) {
    if (flat) v[i] = 1.0;
    else v[i] = integral ? static_cast<double>(pick_int(rng, 1, 5)) : uniform(rng, 0.1, 1.0);
  }
  return v;
}

BoundReport energy_instance(const GroupSpec& g, std::mt19937_64& rng) {
  const Subset s = random_support(g, rng);
  const Signal f(g, weights(s, rng), random_scale(g, rng));
  return check_energy_lower_bound(f, with_extras(sumset(s, s), rng));
}

BoundReport bohr_in_spec_instance(const GroupSpec& g, std::mt19937_64& rng) {
  const Subset s0 = random_support(g, rng);
  const Subset s = set_union(s0, negate(s0));
  const std::vector<Complex> w = weights(s, rng);
  std::vector<Complex> v(g.count());
  for (std::size_t x = 0; x < g.count(); ++x) v[x] = w[x] + w[g.neg_index(x)];
  const double alpha = uniform(rng, 0.01, kPi / 2);
  const double t = std::cos(alpha) * uniform(rng, 0.0, 1.0);
  return check_bohr_in_spec(Signal(g, v, random_scale(g, rng)), with_extras(s, rng), alpha, t);
}

BoundReport diffset_instance(const GroupSpec& g, std::mt19937_64& rng) {
  const Subset s = random_support(g, rng);
  const Signal f(g, weights(s, rng), random_scale(g, rng));
  const Subset d = with_extras(sumset(s, s), rng);
  const double alpha = uniform(rng, 0.05, kPi / 2 - 0.01);
  const double t = uniform(rng, 0.0, 1.0) * std::min(1.0, diffset_threshold(f, d, alpha));
  return check_spec_bohr_in_diffset(f, d, alpha, t);
}

BoundReport size_instance(const GroupSpec& g, std::mt19937_64& rng) {
  const Subset s = random_support(g, rng);
  const Signal f(g, weights(s, rng), random_scale(g, rng));
  return check_spec_size_bounds(f, with_extras(sumset(s, s), rng), uniform(rng, 0.02, 1.0));
}

BoundReport smoothness_instance(const GroupSpec& g, std::mt19937_64& rng) {
  const bool l1 = pick(rng, 2) == 0;
  const ShiftNorm variant = l1 ? ShiftNorm::L1Relative : ShiftNorm::Sup;
  const std::size_t n = g.count();
  for (int attempt = 0;; ++attempt) {
    std::vector<Complex> v(n, 0.0);
    std::vector<std::size_t> c_idx;
    const std::size_t x0 = pick(rng, n);
    if (attempt < 3 && pick(rng, 3) != 0) {
      // Triangle-like profile 1_{x0+B} * 1_B, moved by unit steps.
      std::vector<std::int64_t> r;
      for (std::int64_t m : g.orders()) r.push_back(pick_int(rng, 0, std::max<std::int64_t>(0, m / 8)));
      const Subset b = box(g, r);
      for (std::size_t p : b.indices()) {
        for (std::size_t q : b.indices()) v[g.add_index(g.add_index(p, q), x0)] += 1.0;
      }
      const Subset unit = box(g, std::vector<std::int64_t>(g.rank(), 1));
      for (std::size_t k = 1 + pick(rng, 3); k > 0; --k) c_idx.push_back(unit.indices()[pick(rng, unit.size())]);
    } else {
      // Flat on a coset of H and shifted only inside H.
      const Subset h = random_subgroup(g, rng);
      const double c = uniform(rng, 0.5, 2.0);
      for (std::size_t i : h.indices()) v[g.add_index(i, x0)] = c;
      for (std::size_t k = 1 + pick(rng, 3); k > 0; --k) c_idx.push_back(h.indices()[pick(rng, h.size())]);
    }
    const Signal f(g, v, random_scale(g, rng));
    const Subset c_set = Subset::from_indices(g, c_idx);
    const Subset supp = support(f);
    const Subset d_set = with_extras(set_union(supp, sumset(supp, c_set)), rng);

    double mass = 0.0;
    for (const auto& z : v) mass += std::abs(z);
    double dev = 0.0;
    for (std::size_t a : c_set.indices()) {
      double s = 0.0;
      for (std::size_t x = 0; x < n; ++x) {
        const double e = std::abs(v[g.sub_index(x, a)] - v[x]);
        s = l1 ? s + e : std::max(s, e);
      }
      dev = std::max(dev, l1 ? s / mass : s);
    }
    // Admissible eps lies in [dev, 2 t factor sin(alpha/2)].
    const double factor = l1 ? 1.0 : mass / static_cast<double>(d_set.size());
    const double lo = dev / (2.0 * factor);
    if (lo > 0.95) continue;
    const double t = uniform(rng, std::max(lo / 0.99, 0.02), 1.0);
    const double alpha = 2.0 * std::asin(uniform(rng, lo / t, 0.999));
    const double eps_max = 2.0 * t * factor * std::sin(alpha / 2.0);
    double eps = dev + uniform(rng, 0.001, 0.999) * (eps_max - dev);
    if (!(eps > 0.0)) eps = eps_max;
    return check_smoothness_decay(f, c_set, d_set, t, alpha, eps, variant);
  }
}

}  // namespace

void Tally::add(const BoundReport& r) {
  if (statement.empty()) statement = r.statement;
  ++instances;
  switch (r.status) {
    case ReportStatus::Holds: ++holds; break;
    case ReportStatus::ConclusionFailed: ++conclusion_failed; break;
    case ReportStatus::HypothesisFailed: ++hypothesis_failed; break;
  }
  if (!r.holds() && first_failure.empty()) first_failure = r.witness ? r.witness->description : to_string(r.status);
}

GroupSpec random_group(std::mt19937_64& rng, std::int64_t max_order, std::size_t max_rank) {
  if (max_order < 2) return GroupSpec({1});
  const std::size_t rank = 1 + pick(rng, max_rank);
  std::vector<std::int64_t> orders;
  std::int64_t prod = 1;
  for (std::size_t i = 0; i < rank; ++i) {
    const std::int64_t room = max_order / prod;
    if (room < 2) break;
    // Log-uniform order in [2, room].
    const double x = std::exp(uniform(rng, std::log(2.0), std::log(static_cast<double>(room) + 1.0)));
    const std::int64_t n = std::clamp<std::int64_t>(static_cast<std::int64_t>(x), 2, room);
    orders.push_back(n);
    prod *= n;
  }
  return GroupSpec(orders);
}

Subset random_subgroup(const GroupSpec& g, std::mt19937_64& rng) {
  std::vector<std::size_t> gens{pick(rng, g.count())};
  if (pick(rng, 2) == 0) gens.push_back(pick(rng, g.count()));
  return generated_subgroup(Subset::from_indices(g, gens));
}

Subset box(const GroupSpec& g, const std::vector<std::int64_t>& radius) {
  if (radius.size() != g.rank()) throw ShapeError("box needs one radius per factor");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < g.count(); ++i) {
    const auto r = g.residues(i);
    bool in = true;
    for (std::size_t j = 0; j < r.size() && in; ++j) in = std::abs(r[j]) <= radius[j];
    if (in) idx.push_back(i);
  }
  return Subset::from_indices(g, idx);
}

LawDeviations dft_law_deviations(const GroupSpec& g, double d, std::mt19937_64& rng) {
  const std::size_t n = g.count();
  LawDeviations out;
  const Signal f(g, gaussian_values(n, rng), d);
  const Signal h(g, gaussian_values(n, rng), d);
  const Spectrum fh = dft(f);
  const Spectrum hh = dft(h);

  const double nf = norm(f, 2.0), nh = norm(h, 2.0);
  out.plancherel = std::max(rel(nf, norm(fh, 2.0), nf), std::abs(inner(f, h) - inner(fh, hh)) / (nf * nh));
  out.inversion = relative_l2_distance(idft(fh).values(), f.values());

  // Sparse second factor so the convolution sum can be formed directly.
  std::vector<Complex> sv(n, 0.0);
  const std::vector<Complex> noise = gaussian_values(16, rng);
  for (std::size_t k = 0; k < 1 + pick(rng, 16); ++k) sv[pick(rng, n)] += noise[k];
  const Signal s(g, sv, d);
  std::vector<std::size_t> supp;
  for (std::size_t a = 0; a < n; ++a) if (sv[a] != Complex{}) supp.push_back(a);
  std::vector<Complex> conv(n);
  for (std::size_t x = 0; x < n; ++x) {
    Complex acc{};
    for (std::size_t a : supp) acc += f[g.sub_index(x, a)] * sv[a];
    conv[x] = d * acc;
  }
  const Spectrum sh = dft(s);
  std::vector<Complex> prod(n);
  for (std::size_t i = 0; i < n; ++i) prod[i] = fh[i] * sh[i];
  out.convolution = relative_l2_distance(dft(Signal(g, conv, d)).values(), prod);

  const std::size_t a = pick(rng, n);
  const Spectrum shifted = dft(shift_index(f, a));
  std::vector<Complex> want(n);
  for (std::size_t gamma = 0; gamma < n; ++gamma) want[gamma] = std::conj(g.pairing_index(a, gamma)) * fh[gamma];
  out.shift = relative_l2_distance(shifted.values(), want);

  const Character chi = g.character(pick(rng, n));
  out.modulation = relative_l2_distance(dft(modulate(f, chi)).values(), shift(fh, chi).values());
  return out;
}

DftComparison compare_dft(const GroupSpec& g, std::mt19937_64& rng) {
  using clock = std::chrono::steady_clock;
  DftComparison out{g};
  const Signal f(g, gaussian_values(g.count(), rng), 1.0);
  auto t0 = clock::now();
  const Spectrum ref = dft(f, DftMode::Reference);
  out.reference_seconds = std::chrono::duration<double>(clock::now() - t0).count();
  const Spectrum fast = dft(f, DftMode::Fast);
  int reps = 0;
  t0 = clock::now();
  double elapsed = 0.0;
  do {
    const Spectrum again = dft(f, DftMode::Fast);
    ++reps;
    elapsed = std::chrono::duration<double>(clock::now() - t0).count();
  } while (elapsed < 0.05 && reps < 1000);
  out.fast_seconds = elapsed / reps;
  out.rel_diff = relative_l2_distance(ref.values(), fast.values());
  for (std::int64_t n : g.orders()) out.bluestein = out.bluestein || fft_plan(static_cast<std::size_t>(n))->uses_bluestein();
  return out;
}

std::vector<BoundReport> inequality_instances(const GroupSpec& g, std::mt19937_64& rng) {
  return {energy_instance(g, rng), bohr_in_spec_instance(g, rng), diffset_instance(g, rng), size_instance(g, rng),
          smoothness_instance(g, rng)};
}

std::vector<Subset> subgroup_catalogue(const GroupSpec& g, std::mt19937_64& rng, bool& exhaustive, std::size_t cap,
                                       std::size_t extra) {
  try {
    exhaustive = true;
    return all_subgroups(g, cap);
  } catch (const ResourceError&) {
    exhaustive = false;
  }
  std::set<std::vector<bool>> seen;
  std::vector<Subset> out;
  auto keep = [&](const Subset& s) {
    if (seen.insert(s.mask()).second) out.push_back(s);
  };
  for (const Subset& s : cyclic_subgroups(g)) keep(s);
  for (const Subset& s : torsion_and_multiple_subgroups(g)) keep(s);
  for (std::size_t i = 0; i < extra; ++i) {
    keep(generated_subgroup(Subset::from_indices(g, {pick(rng, g.count()), pick(rng, g.count())})));
  }
  return out;
}

FitTrial fit_trial(std::int64_t max_order, double delta, std::mt19937_64& rng) {
  FitTrial out{random_group(rng, max_order)};
  const GroupSpec& g = out.group;
  std::vector<std::size_t> idx{0};
  for (std::size_t j = 0; j < g.rank(); ++j) {
    for (std::int64_t t = 1; t < g.orders()[j]; t *= 2) idx.push_back(static_cast<std::size_t>(t) * g.stride(j));
  }
  for (std::size_t k = 0; k < 64; ++k) idx.push_back(pick(rng, g.count()));
  const Subset a0 = g.count() <= 256 && pick(rng, 2) == 0 ? Subset::whole(g) : Subset::from_indices(g, idx);
  out.a0_size = a0.size();
  out.delta = delta;
  const Character src = g.character(pick(rng, g.count()));
  const PartialMap m = PartialMap::noisy_character(a0, src, delta, rng);
  const FitResult b = fit_character(m, a0, FitStrategy::Brute);
  out.closeness = b.closeness;
  out.recovered = b.character == src;
  out.factorwise_applicable = factorwise_applicable(a0);
  if (out.factorwise_applicable) out.factorwise_agrees = fit_character(m, a0, FitStrategy::Factorwise).character == b.character;
  return out;
}

ChainInstance chain_instance(std::mt19937_64& rng) {
  ChainInstance out;
  std::vector<Subset> chain;
  const double alpha = uniform(rng, 0.2, kPi / 3);
  const double beta = uniform(rng, 0.2, kPi / 3);
  switch (pick(rng, 4)) {
    case 0: {
      out.family = "subgroup";
      const GroupSpec g = random_group(rng, 1024);
      const std::size_t n = 1 + pick(rng, 4);
      std::vector<Subset> rev{pick(rng, 2) ? random_subgroup(g, rng) : Subset::identity(g)};
      for (std::size_t j = 0; j < n; ++j) {
        rev.push_back(generated_subgroup(set_union(rev.back(), Subset::from_indices(g, {pick(rng, g.count())}))));
      }
      chain.assign(rev.rbegin(), rev.rend());
      break;
    }
    case 1: {
      out.family = "interval";
      const int n = static_cast<int>(pick_int(rng, 3, 6));
      std::int64_t r = pick_int(rng, 1, 4), c = pick_int(rng, 1, 3);
      while (r * c * (std::int64_t{1} << (n + 3)) > 4096) (c > 1 ? c : r) -= 1;
      const GroupSpec g({r * c * (std::int64_t{1} << (n + 3))});
      for (int j = 0; j <= n; ++j) chain.push_back(box(g, {r << (n - j)}));
      break;
    }
    case 2: {
      out.family = "box";
      const int n = 3;
      const GroupSpec g({std::int64_t{1} << (n + 3), std::int64_t{1} << (n + 3)});
      for (int j = 0; j <= n; ++j) chain.push_back(box(g, {std::int64_t{1} << (n - j), std::int64_t{1} << (n - j)}));
      break;
    }
    default: {
      out.family = "interval-by-subgroup";
      const int n = static_cast<int>(pick_int(rng, 3, 4));
      const std::int64_t m = pick_int(rng, 2, 12);
      const GroupSpec g({std::int64_t{1} << (n + 3), m});
      const Subset h = random_subgroup(GroupSpec({m}), rng);
      for (int j = 0; j <= n; ++j) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < g.count(); ++i) {
          const auto r = g.residues(i);
          if (std::abs(r[0]) <= (std::int64_t{1} << (n - j)) && h.contains(GroupElement{{r[1]}})) idx.push_back(i);
        }
        chain.push_back(Subset::from_indices(g, idx));
      }
      break;
    }
  }
  out.report = bohr_chain_check(chain, alpha, beta);
  return out;
}

}  // namespace finharm::experiments
