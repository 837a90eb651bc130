#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "finharm/finite_group.hpp"
#include "finharm/harmonic.hpp"

namespace finharm {

/// Slack added to every comparison |arg| <= alpha, so rational rotations that
/// land exactly on the boundary count as inside.
inline constexpr double kArgSlack = 1e-12;

/// Relative slack on the conclusion side of every inequality check.
inline constexpr double kCheckRelTol = 1e-9;

/// Relative slack used when deciding |f_hat(gamma)| >= t ||f||_1, so exact ties survive rounding.
inline constexpr double kSpecTieTol = 1e-12;

/**
 * Bohr set of a subset on either side of the duality: for A in G the
 * characters gamma with |arg gamma(a)| <= alpha for all a in A, and for a set
 * of characters the elements x with |arg gamma(x)| <= alpha for all gamma.
 */
Subset bohr(const Subset& a, double alpha, std::size_t cap = kDefaultEnumerationCap);

/// The same values with d = 1/|G|, the normalization under which spectral sets are studied.
Signal normalized(const Signal& f);

/// Spec_t(f) = {gamma : |f_hat(gamma)| >= t ||f||_1}. The set does not depend on d.
Subset spec(const Signal& f, double t);

enum class ReportStatus { Holds, ConclusionFailed, HypothesisFailed };

std::string to_string(ReportStatus s);

struct Witness {
  std::vector<std::int64_t> point;  // residues of the offending element or character, if any
  std::string description;
};

/// Outcome of checking one conditional statement on one instance.
struct BoundReport {
  std::string statement;
  std::vector<std::pair<std::string, double>> params;
  double lhs = 0.0;
  double rhs = 0.0;
  ReportStatus status = ReportStatus::Holds;
  std::optional<Witness> witness;

  bool holds() const { return status == ReportStatus::Holds; }
  bool hypothesis_failed() const { return status == ReportStatus::HypothesisFailed; }
  /// Value of a named parameter; throws std::out_of_range if absent.
  double param(std::string_view name) const;
};

/// Sum over the dual of |f_hat|^4 against ||f||_1^4 / ||1_D||_1 for f >= 0 with supp(f*f) in D.
BoundReport check_energy_lower_bound(const Signal& f, const Subset& d_set);

/// Bohr_alpha(D) inside Spec_t(f) for even f >= 0 supported in D, alpha <= pi/2, t <= cos alpha.
BoundReport check_bohr_in_spec(const Signal& f, const Subset& d_set, double alpha, double t);

/// The largest threshold t admitted by the difference-set inclusion.
double diffset_threshold(const Signal& f, const Subset& d_set, double alpha);

/// Bohr_alpha(Spec_t(f)) inside D - D for f >= 0 with supp(f*f) in D and t below the admitted threshold.
BoundReport check_spec_bohr_in_diffset(const Signal& f, const Subset& d_set, double alpha, double t);

/// |G|/|D| - t^2 ||f||_2^2/||f||_1^2 <= |Spec_t(f)| <= ||f||_2^2 / (t^2 ||f||_1^2).
BoundReport check_spec_size_bounds(const Signal& f, const Subset& d_set, double t);

/// How the shift hypothesis of the smoothness check is measured.
enum class ShiftNorm {
  Sup,         ///< ||f_a - f||_inf <= eps with eps <= 2 t (||f||_1/||1_D||_1) sin(alpha/2)
  L1Relative,  ///< ||f_a - f||_1 <= eps ||f||_1 with eps <= 2 t sin(alpha/2); D is not used
};

/// Spec_t(f) inside Bohr_alpha(C) when f barely moves under shifts by C.
BoundReport check_smoothness_decay(const Signal& f, const Subset& c_set, const Subset& d_set,
                                   double t, double alpha, double eps,
                                   ShiftNorm variant = ShiftNorm::Sup);

/// CSV schema: statement,params,lhs,rhs,holds,witness.
void write_report_header(std::ostream& os);
void write_report_row(std::ostream& os, const BoundReport& r);

}  // namespace finharm
