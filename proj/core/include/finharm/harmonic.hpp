#pragma once

#include <complex>
#include <iosfwd>
#include <limits>
#include <vector>

#include "finharm/finite_group.hpp"

namespace finharm {

using Complex = std::complex<double>;

/**
 * A complex function on a finite group weighted by a positive scaling
 * coefficient. Signals live on G with coefficient d; spectra live on the dual
 * with coefficient d_hat. Values are dense in canonical index order.
 */
template <class Tag>
class Weighted {
 public:
  Weighted(GroupSpec group, std::vector<Complex> values, double scale)
      : group_(std::move(group)), values_(std::move(values)), scale_(scale) {
    validate();
  }

  static Weighted zeros(GroupSpec group, double scale) {
    const std::size_t n = group.count();
    return Weighted(std::move(group), std::vector<Complex>(n), scale);
  }

  const GroupSpec& group() const { return group_; }
  const std::vector<Complex>& values() const { return values_; }
  double scale() const { return scale_; }
  std::size_t size() const { return values_.size(); }
  const Complex& operator[](std::size_t i) const { return values_[i]; }

  /// The adjoint coefficient 1 / (scale |G|).
  double adjoint_scale() const { return 1.0 / (scale_ * static_cast<double>(group_.size())); }

  /// Same values, different coefficient.
  Weighted with_scale(double scale) const { return Weighted(group_, values_, scale); }

 private:
  void validate() const;

  GroupSpec group_;
  std::vector<Complex> values_;
  double scale_;
};

struct SignalTag {};
struct SpectrumTag {};
using Signal = Weighted<SignalTag>;
using Spectrum = Weighted<SpectrumTag>;

enum class DftMode { Reference, Fast };

/// f_hat(gamma) = d sum_x f(x) conj(gamma(x)); the result carries d_hat = 1/(d |G|).
Spectrum dft(const Signal& f, DftMode mode = DftMode::Fast);

/// f(x) = d_hat sum_gamma phi(gamma) gamma(x); the result carries d = 1/(d_hat |G|).
Signal idft(const Spectrum& phi, DftMode mode = DftMode::Fast);

/// (f * g)(x) = d sum_a f(x - a) g(a). Both operands must share d.
Signal convolve(const Signal& f, const Signal& g, DftMode mode = DftMode::Fast);

/// f_a(x) = f(x - a).
Signal shift(const Signal& f, const GroupElement& a);
Signal shift_index(const Signal& f, std::size_t a);
/// Spectrum translate phi_g(gamma) = phi(gamma - g).
Spectrum shift(const Spectrum& phi, const Character& g);
/// (gamma f)(x) = gamma(x) f(x).
Signal modulate(const Signal& f, const Character& gamma);
/// Pointwise product, keeping the coefficient of f.
Signal multiply(const Signal& f, const Signal& g);
/// f(-x).
Signal reflect(const Signal& f);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// ||f||_p = (d sum |f|^p)^(1/p) for finite p >= 1, max |f| for p = infinity.
template <class Tag>
double norm(const Weighted<Tag>& f, double p);

/// <f, g> = d sum f conj(g); coefficients must agree.
template <class Tag>
Complex inner(const Weighted<Tag>& f, const Weighted<Tag>& g);

/// {x : f(x) != 0} with an exact zero test.
Subset support(const Signal& f);
/// {x : |f(x)| > tau}.
Subset support_eps(const Signal& f, double tau);

Signal indicator(const Subset& a, double d);

/// ||a - b||_2 / max(||a||_2, ||b||_2) on raw value vectors; zero when both vanish.
double relative_l2_distance(const std::vector<Complex>& a, const std::vector<Complex>& b);

/// CSV with header r0,...,r{k-1},real,imag; rows in canonical order.
void write_csv(std::ostream& os, const Signal& f);
Signal read_csv(std::istream& is, const GroupSpec& group, double d);

}  // namespace finharm
