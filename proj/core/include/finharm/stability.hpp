#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "finharm/bohr_spectral.hpp"
#include "finharm/finite_group.hpp"

namespace finharm {

/// A map g: D -> T on a subset D of a finite group.
class PartialMap {
 public:
  /// `values` lists g on domain.indices() in order; each must have modulus 1 within 1e-12.
  PartialMap(Subset domain, std::vector<std::complex<double>> values);

  /// A character of the group restricted to the domain.
  static PartialMap character(Subset domain, const Character& gamma);
  /// gamma times exp(i u_x) with u_x drawn uniformly from [-delta, delta].
  static PartialMap noisy_character(Subset domain, const Character& gamma, double delta, std::mt19937_64& rng);

  const GroupSpec& group() const { return domain_.group(); }
  const Subset& domain() const { return domain_; }
  /// g at a group index; throws DomainError outside the domain.
  std::complex<double> at(std::size_t index) const;

 private:
  Subset domain_;
  std::vector<std::complex<double>> dense_;
};

/// Worst case found by an exhaustive check.
struct StabilityCheck {
  bool holds = false;
  double worst = 0.0;
  std::vector<std::size_t> witness;  ///< (x, y, x+y) for homomorphy, (x) for closeness
};

/// max |arg(g(x) g(y) / g(x+y))| over x, y in X with x + y in X, compared with eps.
StabilityCheck is_eps_homomorphic(const PartialMap& g, const Subset& x, double eps);

/// max |arg(f(x) / g(x))| over X, compared with eps.
StabilityCheck is_eps_close(const PartialMap& f, const PartialMap& g, const Subset& x, double eps);

enum class FitStrategy { Brute, Factorwise };

std::string to_string(FitStrategy s);

struct FitResult {
  Character character;
  std::size_t index = 0;
  double closeness = 0.0;  ///< max over A0 of |arg(g(x) / gamma(x))|, recomputed after the search
  FitStrategy strategy = FitStrategy::Brute;
};

/// max over A0 of |arg(g(x) conj(gamma(x)))|.
double closeness(const PartialMap& g, const Character& gamma, const Subset& a0);

/**
 * Brute: the character minimizing closeness on A0, smallest canonical index
 * among ties; throws ResourceError when |G| exceeds `cap`.
 *
 * Factorwise: for each cyclic factor j, an estimate of the phase slope
 * arg(g(e_j)/g(0)) is refined along t e_j for t = 2, 4, 8, ... < n_j and the
 * final slope is rounded to the nearest frequency. Needs 0 and every such
 * t e_j in A0 (ContractError otherwise). With per-point noise delta < pi/6
 * around a character this recovers the character exactly.
 */
FitResult fit_character(const PartialMap& g, const Subset& a0, FitStrategy strategy,
                        std::size_t cap = kDefaultEnumerationCap);

/// Whether A0 contains 0 and the doubling ray of every generator.
bool factorwise_applicable(const Subset& a0);

/**
 * For symmetric sets 0 in A_n in ... in A_0 with A_j + A_j in A_{j-1},
 * checks Bohr_beta(Bohr_alpha(A_n)) in A_0 exhaustively. lhs counts points
 * of the double Bohr set outside A_0 (rhs = 0); params carry alpha, beta, n
 * and the indices index_j = |A_{j-1}| / |A_j|. Requires alpha, beta in (0, 2 pi / 3).
 */
BoundReport bohr_chain_check(const std::vector<Subset>& chain, double alpha, double beta);

}  // namespace finharm
