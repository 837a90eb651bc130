#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "finharm/approximation.hpp"
#include "finharm/bohr_spectral.hpp"
#include "finharm/harmonic.hpp"
#include "finharm/lca_model.hpp"

namespace finharm {

struct Atom {
  LcaPoint point;
  Complex weight;
};

/// A complex measure made of point masses plus an optional density against Haar measure.
struct MeasureModel {
  LcaModel model;
  std::vector<Atom> atoms;
  std::optional<RefFunction> density;

  static MeasureModel point_mass(const LcaModel& m, LcaPoint at, Complex weight = 1.0);
  /// Haar measure of a compact model (density 1).
  static MeasureModel haar(const LcaModel& m);
  static MeasureModel with_density(RefFunction f);

  /// sum |weights| + ||density||_1.
  double total_variation() const;
};

/// mu(x + U).
Complex measure_of(const MeasureModel& mu, const LcaPoint& x, const SetDescriptor& u);
/// mu_hat(chi) = integral conj(chi) d mu.
Complex fourier_stieltjes(const MeasureModel& mu, const LcaCharacter& chi);

/// m(U) / |eta^-1[U]|; throws DomainError when the preimage is empty.
double scaling_d(const ApproxMap& eta, const SetDescriptor& u);

/// Deterministic sample of a compact set with a measure attached to each sample.
struct SampleGrid {
  std::vector<LcaPoint> points;
  std::vector<double> weights;
  std::string description;
};

/**
 * Midpoint grid of `count` cells on arcs and intervals, every point of an
 * integer ball or finite set, and one representative per coset of U inside a
 * tower level K (the lifting inequalities only see x + U there).
 */
SampleGrid sample_grid(const LcaModel& m, const SetDescriptor& k, const SetDescriptor& u, std::size_t count);

/// Fast lookup of eta^-1[x + U] for a fixed map and neighbourhood.
class PreimageIndex {
 public:
  PreimageIndex(const ApproxMap& eta, SetDescriptor u);
  std::vector<std::size_t> query(const LcaPoint& x) const;
  std::size_t base_count() const { return base_; }

 private:
  const ApproxMap* eta_;
  SetDescriptor u_;
  std::vector<LcaPoint> image_;
  std::vector<std::pair<double, std::size_t>> sorted_;
  bool scalar_ = false;
  std::size_t base_ = 0;
};

enum class LiftingMode { WeakLifting, Lifting, Approximation };

std::string to_string(LiftingMode m);

struct LiftingReport {
  LiftingMode mode = LiftingMode::WeakLifting;
  double delta = 0.0;
  double worst_deviation = 0.0;
  double exceptional_mass = 0.0;  ///< grid estimate of m{x in K : deviation > delta}
  std::size_t grid_size = 0;
  std::string grid;
  bool passed = false;
  std::optional<LcaPoint> worst_point;
};

/**
 * Weak (U, delta) lifting of mu on K: for grid points x of K,
 * |mu(x+U)/m(U) - sum_{eta^-1[x+U]} f / |eta^-1[U]|| <= delta, except on a
 * set of grid mass at most delta. A lifting of a function is the same check
 * with mu = f dm; the report mode says which was asked for.
 */
LiftingReport is_weak_lifting(const Signal& f, const MeasureModel& mu, const ApproxMap& eta, const SetDescriptor& u,
                              const SetDescriptor& k, double delta, std::size_t grid_count = 2048);
LiftingReport is_lifting(const Signal& f, const RefFunction& f_cont, const ApproxMap& eta, const SetDescriptor& u,
                         const SetDescriptor& k, double delta, std::size_t grid_count = 2048);

/// f(a) = f_cont(eta(a)) carrying the coefficient d.
Signal sample_lifting(const RefFunction& f_cont, const ApproxMap& eta, double d);

/// |f_cont(x) - f(a)| <= delta for grid x in K and every a in eta^-1[x + U].
LiftingReport is_approximation(const Signal& f, const RefFunction& f_cont, const ApproxMap& eta,
                               const SetDescriptor& u, const SetDescriptor& k, double delta,
                               std::size_t grid_count = 2048);

/**
 * sup over grid x in K of (1 + q(x)) delta + |1 - q(x)| |f_cont(x)| with
 * q(x) = |eta^-1[x+U]| / |eta^-1[U]|: the lifting accuracy implied by a
 * (U, delta) approximation.
 */
double delta1_of_approx(const RefFunction& f_cont, const ApproxMap& eta, const SetDescriptor& u,
                        const SetDescriptor& k, double delta, std::size_t grid_count = 2048);

/// F_{eta,d}(f)(chi) = d sum_a f(a) conj(chi(eta a)) with d = f.scale().
Complex modified_ft(const Signal& f, const ApproxMap& eta, const LcaCharacter& chi);

struct TransformRow {
  LcaPoint chi;
  Complex reference;
  Complex mft;
  Complex dft;
  std::size_t gamma = 0;     ///< index of the matched finite character
  double match_slack = 0.0;  ///< distance from phi(gamma) to chi
  bool covered = false;      ///< phi(gamma) lies in chi + Omega
  double mft_err = 0.0;
  double dft_err = 0.0;
};

struct TransformErrorReport {
  std::vector<TransformRow> rows;
  std::string grid;
  double sup_mft_err = 0.0;  ///< over every row
  double sup_dft_err = 0.0;  ///< over covered rows
  double bound = 0.0;        ///< (2 ||f||_1 + 3) alpha
  bool bound_satisfied = false;
};

/// Uniform grid of `count` points on [-r, r] (arcs, intervals) or every point of a ball.
std::vector<LcaPoint> character_grid(const LcaModel& dual, const SetDescriptor& gamma0, std::size_t count);

/**
 * Samples f_cont along eta with d = pair.d, then for each grid character chi
 * compares the reference transform against F_{eta,d}(f)(chi) and against the
 * DFT value at the character gamma with phi(gamma) nearest to chi.
 */
TransformErrorReport transform_experiment(const RefFunction& f_cont, const AdjointPair& pair,
                                          const std::vector<LcaPoint>& grid);

/// CSV schema: chi,ref_re,ref_im,mft_err,dft_err,bound,pass.
void write_transform_csv(std::ostream& os, const TransformErrorReport& r);

/**
 * |mu_hat(chi) - f_hat(gamma)| <= (2 ||mu|| + 3) alpha for grid chi and every
 * gamma with phi(gamma) in chi + Omega. Hypotheses: delta <= alpha, the pair's
 * pairing deviation <= alpha on its window, f a weak (U, delta) lifting of mu
 * on K, d_U sum over eta^-1[G \ K] of |f| <= delta, ||f||_1 <= ||mu||, and
 * |mu_hat - F_{eta,d}(f)| <= alpha on the grid.
 */
BoundReport check_measure_transform_bound(const MeasureModel& mu, const Signal& f, const AdjointPair& pair,
                                          const std::vector<LcaPoint>& grid, double delta,
                                          std::size_t lifting_grid = 2048);

/**
 * |f_hat(gamma)| < t ||f||_1 for every gamma outside phi^-1[Bohr_delta(V)].
 * Hypotheses: 0 < t < 1, delta <= alpha, delta <= 2 t^2 ||f_cont||_1 sin(alpha/2),
 * t ||f_cont||_1 < ||f||_1 <= ||f_cont||_1, ||f_a - f||_1 <= delta on eta^-1[U],
 * and strong (alpha, delta)-adjointness witnessed by V and Upsilon.
 * The grid error against (2 ||f||_1 + 3) alpha is recorded in the parameters
 * only, since its lifting hypotheses are not checked here.
 */
BoundReport check_spectral_tail_bound(const RefFunction& f_cont, const Signal& f, const AdjointPair& pair,
                                      const std::vector<LcaPoint>& grid, double delta, double t,
                                      const SetDescriptor& v, const SetDescriptor& upsilon);

}  // namespace finharm
