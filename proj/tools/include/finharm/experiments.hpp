#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "finharm/bohr_spectral.hpp"
#include "finharm/finite_group.hpp"
#include "finharm/harmonic.hpp"
#include "finharm/stability.hpp"

namespace finharm::experiments {

/// Counts of BoundReport outcomes for one statement.
struct Tally {
  std::string statement;
  std::size_t instances = 0;
  std::size_t holds = 0;
  std::size_t conclusion_failed = 0;
  std::size_t hypothesis_failed = 0;
  std::string first_failure;

  void add(const BoundReport& r);
  /// Every instance satisfied its hypotheses and its conclusion.
  bool clean() const { return instances > 0 && holds == instances; }
};

/// Random product of at most `max_rank` cyclic factors of total order at most `max_order`.
GroupSpec random_group(std::mt19937_64& rng, std::int64_t max_order, std::size_t max_rank = 3);

/// Subgroup generated by one or two random elements.
Subset random_subgroup(const GroupSpec& g, std::mt19937_64& rng);

/// Points whose residues satisfy |r_j| <= radius[j] in every coordinate.
Subset box(const GroupSpec& g, const std::vector<std::int64_t>& radius);

/// Worst relative deviations of the transform laws on one random instance.
struct LawDeviations {
  double plancherel = 0.0;   ///< norms and inner products on both sides
  double inversion = 0.0;    ///< idft(dft f) against f
  double convolution = 0.0;  ///< dft(f * h) against f_hat h_hat, with f * h summed directly
  double shift = 0.0;        ///< dft(f_a) against conj(gamma(a)) f_hat
  double modulation = 0.0;   ///< dft(chi f) against the translate of f_hat by chi
};

LawDeviations dft_law_deviations(const GroupSpec& g, double d, std::mt19937_64& rng);

struct DftComparison {
  GroupSpec group;
  double rel_diff = 0.0;
  double reference_seconds = 0.0;
  double fast_seconds = 0.0;
  bool bluestein = false;
};

/// Fast against reference transform of one random signal, each timed once (fast path repeated for resolution).
DftComparison compare_dft(const GroupSpec& g, std::mt19937_64& rng);

/// The five inequality checks on freshly generated instances over `g`; every
/// instance is built to satisfy the hypotheses of its statement.
std::vector<BoundReport> inequality_instances(const GroupSpec& g, std::mt19937_64& rng);

/**
 * Every subgroup when the lattice has at most `cap` members; otherwise the
 * cyclic subgroups, the torsion and multiple subgroups and `extra` random
 * two-generator subgroups. `exhaustive` reports which case applied.
 */
std::vector<Subset> subgroup_catalogue(const GroupSpec& g, std::mt19937_64& rng, bool& exhaustive,
                                       std::size_t cap = 1024, std::size_t extra = 32);

struct FitTrial {
  GroupSpec group;
  std::size_t a0_size = 0;
  double delta = 0.0;
  double closeness = 0.0;
  bool recovered = false;
  bool factorwise_applicable = false;
  bool factorwise_agrees = false;
};

/// One brute fit of a noisy random character on a random A0 that contains every doubling ray.
FitTrial fit_trial(std::int64_t max_order, double delta, std::mt19937_64& rng);

/// A symmetric chain A_0 >= ... >= A_n with A_j + A_j in A_{j-1}, checked at random alpha, beta.
struct ChainInstance {
  std::string family;
  BoundReport report;
};

ChainInstance chain_instance(std::mt19937_64& rng);

}  // namespace finharm::experiments
