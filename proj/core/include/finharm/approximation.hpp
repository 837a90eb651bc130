#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "finharm/bohr_spectral.hpp"
#include "finharm/finite_group.hpp"
#include "finharm/lca_model.hpp"

namespace finharm {

enum class ApproxFamily { IntegerIdentity, CircleExp, RealLattice, TowerSection, Product, Tabulated };

std::string to_string(ApproxFamily f);

/**
 * A map eta from a finite group into a model. The rule is symbolic for the
 * builder families: IntegerIdentity a -> a, CircleExp a -> 2 pi a / n,
 * RealLattice a -> a * step, TowerSection a -> a / p^shift, Product applies
 * its factors coordinatewise. Tabulated maps store one point per index.
 * Residues are always the absolutely smallest representatives.
 */
struct ApproxMap {
  ApproxMap(GroupSpec src, LcaModel tgt, ApproxFamily fam)
      : source(std::move(src)), target(std::move(tgt)), family(fam) {}

  GroupSpec source;
  LcaModel target;
  ApproxFamily family = ApproxFamily::Tabulated;
  double step = 0.0;
  int shift = 0;
  std::vector<ApproxMap> factors;
  std::vector<LcaPoint> table;
  bool injective = false;
  bool strict = false;

  LcaPoint operator()(std::size_t index) const;
  LcaPoint operator()(const GroupElement& a) const { return (*this)(source.index(a)); }
  /// eta applied to every index in canonical order.
  std::vector<LcaPoint> image() const;
};

/// The identity Z_n -> Z; requires 0 <= k < n/4 for the intended K = {|m| <= k}.
ApproxMap build_integer_approx(std::int64_t n, std::int64_t k);
/// a -> exp(2 pi i a / n) on the circle.
ApproxMap build_circle_approx(std::int64_t n);
/// a -> a d on the reals (pairing period taken from `reals`).
ApproxMap build_real_approx(std::int64_t n, double d, const LcaModel& reals = LcaModel::reals());
/// Z_{p^(j+k)} = p^-j Z_p / p^k Z_p with the section a -> a / p^j.
ApproxMap build_tower_approx(std::int64_t p, int j, int k);
/// eta_1 x eta_2 on G_1 x G_2.
ApproxMap product_approx(const ApproxMap& a, const ApproxMap& b);
/// Arbitrary map given by its values; flags are computed exhaustively.
ApproxMap tabulated_approx(GroupSpec source, LcaModel target, std::vector<LcaPoint> points);

/// eta^-1[X] as a subset of the source group, on the requested side.
Subset preimage(const ApproxMap& eta, const SetDescriptor& x, Side side = Side::Group);

/// Outcome of one verified clause.
struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;   ///< worst observed quantity (covering radius, deviation, violation count)
  double bound = 0.0;   ///< the bound it is compared against
  std::string test_set; ///< what was enumerated
  std::optional<std::string> witness;
};

struct ApproxCertificate {
  std::vector<CheckResult> checks;

  bool certified() const;
  /// Throws std::out_of_range if no check carries this name.
  const CheckResult& check(std::string_view name) const;
};

/**
 * Verifies that eta is a finite (K, U) approximation: K lies in eta[G] + U
 * ("coverage") and eta(x) + eta(y) - eta(x + y) lies in U for all x, y in
 * eta^-1[K] ("homomorphy"). Coverage is decided exactly from the sorted image
 * for arcs, intervals and balls, coset by coset for towers, and by sumset for
 * finite targets. Homomorphy is checked on every pair.
 */
ApproxCertificate certify_KU(const ApproxMap& eta, const SetDescriptor& k, const SetDescriptor& u);

/// (K, U) in a model and (Gamma, Omega) in its dual, linked through Bohr sets at level alpha.
struct AlphaAdjointSets {
  LcaModel model;
  SetDescriptor k, u, gamma, omega;
  double alpha = 0.0;
};

/**
 * Gamma = Bohr_alpha(U) and K = Bohr_alpha(Omega) from the closed forms,
 * after checking that U lies in Bohr_alpha(Omega). Throws ContractError naming
 * the violating pair when that compatibility fails, and re-verifies the full
 * chain U in Bohr(Gamma) in Bohr(Omega) in K and its dual before returning.
 */
AlphaAdjointSets make_alpha_adjoint_pairs(const LcaModel& model, const SetDescriptor& u, const SetDescriptor& omega,
                                          double alpha);

/// Re-checks both inclusion chains with the closed forms.
bool is_alpha_adjoint(const AlphaAdjointSets& s);

/// Approximations eta of G and phi of its dual sharing one finite group, with their window sets.
struct AdjointPair {
  ApproxMap eta;
  ApproxMap phi;
  AlphaAdjointSets sets;
  double d = 0.0;      ///< coefficient for signals on the finite group
  double d_hat = 0.0;  ///< the adjoint coefficient 1 / (d |G|)
  bool exact_identity = false;
};

/// Circle and its dual: U = Arc(r), Omega = {0}, requires 0 < r <= alpha <= pi/3, n > pi/r, 1 <= floor(alpha/r) < n/4.
AdjointPair build_adjoint_pair_circle(std::int64_t n, double alpha, double r);

/**
 * Reals with itself: U = [-r, r], Omega = [-rho, rho], eta(a) = a d and
 * phi(gamma) = gamma d'. Requires k = alpha/(rho d) and m = alpha/(r d') to be
 * integers with 1 <= k, m < n/4, r, rho <= alpha <= pi/3, d/2 < r <= kd and
 * d'/2 < rho <= md'. A non-positive d_prime selects 2 pi / (n d).
 */
AdjointPair build_adjoint_pair_reals(std::int64_t n, double d, double alpha, double r, double rho,
                                     double d_prime = 0.0);

/// p-adic window K = p^-j Z_p, U = p^k Z_p with Gamma = p^-k Z_p, Omega = p^j Z_p; requires 0 < alpha < 2 pi / 3.
AdjointPair build_adjoint_pair_tower(std::int64_t p, int j, int k, double alpha);

/// max |arg((phi gamma)(eta a) / gamma(a))| over every a and gamma of the finite group.
double pairing_identity_deviation(const AdjointPair& pair);

/// The same maximum restricted to eta^-1[K] x phi^-1[Gamma].
double window_pairing_deviation(const AdjointPair& pair);

/**
 * Checks strong (alpha, eps)-adjointness witnessed by V and Upsilon. Checks:
 * "hypotheses" (0 < eps < alpha <= pi/3, V in U, Upsilon in Omega),
 * "pairing" (deviation <= eps on eta^-1[K] x phi^-1[Gamma]),
 * "bohr-primal" (Bohr_alpha(eta^-1[U]) in phi^-1[Bohr_eps(V)]),
 * "bohr-dual" (Bohr_alpha(phi^-1[Omega]) in eta^-1[Bohr_eps(Upsilon)]),
 * "eta-KV" and "phi-Gamma-Upsilon" (the two approximation certificates).
 */
ApproxCertificate verify_strong_adjointness(const AdjointPair& pair, double alpha, double eps,
                                            const SetDescriptor& v, const SetDescriptor& upsilon);

/**
 * The four inclusions that carry Bohr sets between a strongly adjoint pair
 * and its finite group, for U in X in K and Omega in Delta in Gamma:
 *   phi^-1[Bohr_{alpha-eps}(X)]        in Bohr_alpha(eta^-1[X])
 *   eta^-1[Bohr_{alpha-eps}(Delta)]    in Bohr_alpha(phi^-1[Delta])
 *   Bohr_{alpha-eps}(eta^-1[X + V])    in phi^-1[Bohr_{alpha+eps}(X)]        when X + V in K
 *   Bohr_{alpha-eps}(phi^-1[Delta + Upsilon]) in eta^-1[Bohr_{alpha+eps}(Delta)]  when Delta + Upsilon in Gamma
 * lhs counts violating points (rhs = 0). Hypotheses include strong adjointness itself.
 */
BoundReport check_bohr_transfer(const AdjointPair& pair, double eps, const SetDescriptor& v,
                                const SetDescriptor& upsilon, const SetDescriptor& x, const SetDescriptor& delta);

/// CSV schema: check,passed,worst,bound,test_set,witness.
void write_certificate_csv(std::ostream& os, const ApproxCertificate& c);

}  // namespace finharm
