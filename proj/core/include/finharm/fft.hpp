#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace finharm {

class GroupSpec;

/**
 * One-dimensional discrete Fourier transform of arbitrary length.
 *
 * Smooth lengths use a recursive mixed-radix Cooley-Tukey decomposition with
 * specialised radix-2 and radix-4 butterflies; prime factors above a small
 * threshold are handled by Bluestein's chirp-z convolution on a power-of-two
 * grid. Transforms are unnormalised.
 */
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::size_t size() const { return n_; }
  const std::vector<std::size_t>& factors() const { return factors_; }
  bool uses_bluestein() const;

  /// X_k = sum_j x_j exp(-2 pi i j k / n), in place.
  void forward(std::complex<double>* data) const;
  /// x_j = sum_k X_k exp(+2 pi i j k / n), in place, without the 1/n factor.
  void inverse(std::complex<double>* data) const;

 private:
  struct Bluestein;

  void recurse(const std::complex<double>* in, std::size_t stride, std::complex<double>* out,
               std::size_t n, std::size_t level) const;
  void butterfly(std::complex<double>* t, std::size_t p, std::complex<double>* scratch) const;

  std::size_t n_;
  std::vector<std::size_t> factors_;
  std::vector<std::complex<double>> twiddle_;  // exp(-2 pi i j / n)
  std::vector<std::unique_ptr<Bluestein>> bluestein_;  // one per distinct large prime
};

/// Shared, thread-safe plan cache.
std::shared_ptr<const FftPlan> fft_plan(std::size_t n);

/// Row-column transform over every cyclic factor of g; data is in canonical index order.
void fft_group(const GroupSpec& g, std::vector<std::complex<double>>& data, bool inverse);

}  // namespace finharm
