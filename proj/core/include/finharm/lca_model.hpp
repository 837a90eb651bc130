#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "finharm/finite_group.hpp"

namespace finharm {

using Complex = std::complex<double>;

enum class ModelKind { Circle, Reals, Integers, Finite, Product, Tower };

std::string to_string(ModelKind k);

/**
 * A concrete locally compact abelian group with a fixed Haar measure and a
 * fixed pairing with its dual model.
 *
 * haar_scale means: total mass for Circle, multiple of Lebesgue for Reals,
 * mass per point for Integers and Finite, mass of Z_p for Tower. The dual
 * model carries the scale that makes Fourier inversion hold.
 *
 * Reals pair through exp(2 pi i x gamma / period); the default period 2 pi
 * gives exp(i x gamma). Tower models the p-adic numbers through points of
 * Z[1/p] and subgroups p^i Z_p; the window (level_j, level_k) names the
 * default compact K = p^-j Z_p and neighbourhood U = p^k Z_p, whose quotient
 * K/U is the finite group actually used.
 */
struct LcaModel {
  ModelKind kind = ModelKind::Circle;
  double haar_scale = 1.0;
  double period = 0.0;                // Reals only
  std::optional<GroupSpec> finite;    // Finite only
  std::int64_t prime = 0;             // Tower only
  int level_j = 0;                    // Tower only
  int level_k = 0;                    // Tower only
  std::vector<LcaModel> factors;      // Product only

  static LcaModel circle(double mass = 1.0);
  static LcaModel reals(double period = 0.0, double lebesgue_multiple = 1.0);
  static LcaModel integers(double point_mass = 1.0);
  static LcaModel finite_group(GroupSpec g, double point_mass = 1.0);
  static LcaModel tower(std::int64_t p, int j, int k, double zp_mass = 1.0);
  static LcaModel product(std::vector<LcaModel> factors);

  LcaModel dual() const;
  std::string name() const;
  bool same_group(const LcaModel& other) const;
};

/// Element of Q_p written as num / p^exp with exp >= 0 and p not dividing num when exp > 0.
struct PAdic {
  std::int64_t num = 0;
  int exp = 0;
  bool operator==(const PAdic&) const = default;
};

/**
 * A point of a model (or, for the dual model, a character). Only the field
 * matching `kind` is meaningful: angle in (-pi, pi] for Circle, real for
 * Reals, integer for Integers, residues for Finite, padic for Tower, parts
 * for Product.
 */
struct LcaPoint {
  ModelKind kind = ModelKind::Circle;
  double real = 0.0;
  std::int64_t integer = 0;
  std::vector<std::int64_t> residues;
  PAdic padic;
  std::vector<LcaPoint> parts;

  static LcaPoint circle(double angle);
  static LcaPoint reals(double x);
  static LcaPoint integer_point(std::int64_t m);
  static LcaPoint finite(std::vector<std::int64_t> residues);
  static LcaPoint tower(std::int64_t p, std::int64_t num, int exp);
  static LcaPoint product(std::vector<LcaPoint> parts);
};

/// Characters are points of the dual model.
using LcaCharacter = LcaPoint;

std::string to_string(const LcaPoint& x);

LcaPoint identity(const LcaModel& m);
LcaPoint add(const LcaModel& m, const LcaPoint& x, const LcaPoint& y);
LcaPoint negate(const LcaModel& m, const LcaPoint& x);
LcaPoint subtract(const LcaModel& m, const LcaPoint& x, const LcaPoint& y);
bool points_equal(const LcaModel& m, const LcaPoint& x, const LcaPoint& y, double tol = 1e-12);

/// p-adic valuation of a tower point; kInfiniteValuation for zero.
int valuation(const LcaModel& m, const LcaPoint& x);

inline constexpr int kInfiniteValuation = 1 << 28;

/// Principal argument in (-pi, pi] of chi(x), where chi is a point of m.dual().
double pairing_arg(const LcaModel& m, const LcaPoint& x, const LcaCharacter& chi);
/// chi(x) as a unit complex number.
Complex eval_pairing(const LcaModel& m, const LcaPoint& x, const LcaCharacter& chi);

enum class DescriptorKind { Whole, Arc, Interval, IntegerBall, FiniteSet, SubgroupLevel, Box };

/**
 * Symbolic symmetric sets: Arc(r) = {|arg x| <= r} on the circle,
 * Interval(r) = [-r, r] on the reals, IntegerBall(k) = {|m| <= k},
 * FiniteSet(A) on a finite model, SubgroupLevel(i) = p^i Z_p on a tower,
 * Box = product of per-factor descriptors, Whole = the entire group.
 */
struct SetDescriptor {
  DescriptorKind kind = DescriptorKind::Whole;
  double radius = 0.0;
  std::int64_t bound = 0;
  int level = 0;
  std::optional<Subset> finite;
  std::vector<SetDescriptor> parts;

  static SetDescriptor whole();
  static SetDescriptor arc(double r);
  static SetDescriptor interval(double r);
  static SetDescriptor integer_ball(std::int64_t k);
  static SetDescriptor finite_set(Subset a);
  static SetDescriptor subgroup_level(int i);
  static SetDescriptor box(std::vector<SetDescriptor> parts);
};

std::string to_string(const SetDescriptor& s);

/// Throws DomainError when the descriptor family does not fit the model.
void validate(const LcaModel& m, const SetDescriptor& s);

/// Membership with the same 1e-12 boundary slack used for Bohr sets.
bool contains(const LcaModel& m, const SetDescriptor& s, const LcaPoint& x);

/// Decides A subset-of B for descriptors of the same family.
bool descriptor_subset(const LcaModel& m, const SetDescriptor& a, const SetDescriptor& b);

/// A + B for descriptors of the same family.
SetDescriptor minkowski_sum(const LcaModel& m, const SetDescriptor& a, const SetDescriptor& b);

/// Haar measure of a compact descriptor.
double haar_measure(const LcaModel& m, const SetDescriptor& s);

/**
 * Bohr_alpha of a descriptor as a descriptor of the dual model. Arcs,
 * intervals and balls use the sweep formulas (valid for alpha < 2 pi / 3 for
 * balls of radius >= 2 and for alpha < pi otherwise); subgroup levels map to
 * their annihilator for alpha < 2 pi / 3; finite sets are computed exactly.
 */
SetDescriptor bohr_closed_form(const LcaModel& m, const SetDescriptor& s, double alpha);

enum class RefFamily { Gaussian, TrigPoly, IndicatorInterval, FiniteSeq, LocallyConstant, Sinc };

std::string to_string(RefFamily f);

/**
 * Test functions with exact Fourier transforms.
 *
 *   Gaussian          amplitude * exp(-x^2 / (2 sigma^2))            on Reals
 *   IndicatorInterval amplitude * 1[-width, width]                   on Reals
 *   Sinc              amplitude * 2 sin(width * w) / w, w = 2 pi gamma / period  on Reals
 *   TrigPoly          sum_m coeffs[m - first] e^{i m theta}           on Circle
 *   FiniteSeq         coeffs[m - first] at integer m, zero elsewhere  on Integers
 *   LocallyConstant   amplitude * 1_{p^level Z_p}                     on Tower
 */
struct RefFunction {
  RefFamily family = RefFamily::Gaussian;
  LcaModel model;
  double amplitude = 1.0;
  double sigma = 1.0;
  double width = 1.0;
  std::int64_t first = 0;
  std::vector<Complex> coeffs;
  int level = 0;

  static RefFunction gaussian(const LcaModel& reals, double sigma, double amplitude = 1.0);
  static RefFunction indicator_interval(const LcaModel& reals, double width, double amplitude = 1.0);
  static RefFunction trig_poly(const LcaModel& circle, std::int64_t first, std::vector<Complex> coeffs);
  static RefFunction finite_seq(const LcaModel& integers, std::int64_t first, std::vector<Complex> values);
  static RefFunction locally_constant(const LcaModel& tower, int level, double amplitude = 1.0);
};

Complex evaluate(const RefFunction& f, const LcaPoint& x);

/// The Fourier transform f_hat(chi) = integral f(x) conj(chi(x)) dm(x) as a function on the dual model.
RefFunction reference_transform(const RefFunction& f);

/// ||f||_1 with respect to the model's Haar measure.
double l1_norm(const RefFunction& f);

/// integral over x + U of f dm.
Complex integrate_over(const RefFunction& f, const LcaPoint& x, const SetDescriptor& u);

}  // namespace finharm
