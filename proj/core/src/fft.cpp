#include "finharm/fft.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numbers>

#include "finharm/finite_group.hpp"

namespace finharm {

using cd = std::complex<double>;

namespace {

// Primes up to this size use the direct O(p^2) butterfly.
constexpr std::size_t kDirectPrimeLimit = 37;

cd unit_turn(std::size_t j, std::size_t n) {
  // exp(-2 pi i j / n) with the angle folded into [-pi, pi] for accuracy.
  const double x = static_cast<double>(j) / static_cast<double>(n);
  const double ang = -2.0 * std::numbers::pi * (x > 0.5 ? x - 1.0 : x);
  return {std::cos(ang), std::sin(ang)};
}

std::vector<std::size_t> factorize(std::size_t n) {
  std::vector<std::size_t> f;
  while (n % 4 == 0) {
    f.push_back(4);
    n /= 4;
  }
  while (n % 2 == 0) {
    f.push_back(2);
    n /= 2;
  }
  for (std::size_t p = 3; p * p <= n; p += 2) {
    while (n % p == 0) {
      f.push_back(p);
      n /= p;
    }
  }
  if (n > 1) f.push_back(n);
  return f;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

}  // namespace

struct FftPlan::Bluestein {
  std::size_t p;
  std::size_t m;
  std::unique_ptr<FftPlan> inner;
  std::vector<cd> chirp;       // exp(-i pi j^2 / p)
  std::vector<cd> kernel_hat;  // FFT of the conjugate chirp, wrapped

  explicit Bluestein(std::size_t len) : p(len), m(next_pow2(2 * len - 1)) {
    inner = std::make_unique<FftPlan>(m);
    chirp.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
      const std::size_t q = (j * j) % (2 * p);
      const double ang = -std::numbers::pi * static_cast<double>(q) / static_cast<double>(p);
      chirp[j] = {std::cos(ang), std::sin(ang)};
    }
    kernel_hat.assign(m, cd{});
    kernel_hat[0] = std::conj(chirp[0]);
    for (std::size_t j = 1; j < p; ++j) {
      kernel_hat[j] = std::conj(chirp[j]);
      kernel_hat[m - j] = std::conj(chirp[j]);
    }
    inner->forward(kernel_hat.data());
  }

  void apply(cd* t, cd* scratch) const {
    std::fill(scratch, scratch + m, cd{});
    for (std::size_t j = 0; j < p; ++j) scratch[j] = t[j] * chirp[j];
    inner->forward(scratch);
    for (std::size_t j = 0; j < m; ++j) scratch[j] *= kernel_hat[j];
    inner->inverse(scratch);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < p; ++k) t[k] = scratch[k] * chirp[k] * scale;
  }
};

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (n_ == 0) n_ = 1;
  factors_ = factorize(n_);
  twiddle_.resize(n_);
  for (std::size_t j = 0; j < n_; ++j) twiddle_[j] = unit_turn(j, n_);
  for (std::size_t p : factors_) {
    if (p <= kDirectPrimeLimit) continue;
    const bool known = std::any_of(bluestein_.begin(), bluestein_.end(),
                                   [p](const auto& b) { return b->p == p; });
    if (!known) bluestein_.push_back(std::make_unique<Bluestein>(p));
  }
}

FftPlan::~FftPlan() = default;

bool FftPlan::uses_bluestein() const { return !bluestein_.empty(); }

void FftPlan::butterfly(cd* t, std::size_t p, cd* scratch) const {
  switch (p) {
    case 1:
      return;
    case 2: {
      const cd a = t[0], b = t[1];
      t[0] = a + b;
      t[1] = a - b;
      return;
    }
    case 4: {
      const cd a0 = t[0] + t[2], a1 = t[0] - t[2];
      const cd b0 = t[1] + t[3];
      const cd d = t[1] - t[3];
      const cd b1{d.imag(), -d.real()};  // -i * (t1 - t3)
      t[0] = a0 + b0;
      t[1] = a1 + b1;
      t[2] = a0 - b0;
      t[3] = a1 - b1;
      return;
    }
    default:
      break;
  }
  if (p <= kDirectPrimeLimit) {
    const std::size_t step = n_ / p;
    for (std::size_t q = 0; q < p; ++q) {
      cd acc{};
      std::size_t e = 0;
      for (std::size_t r = 0; r < p; ++r) {
        acc += t[r] * twiddle_[e * step];
        e += q;
        if (e >= p) e -= p;
      }
      scratch[q] = acc;
    }
    std::copy(scratch, scratch + p, t);
    return;
  }
  for (const auto& b : bluestein_) {
    if (b->p == p) {
      b->apply(t, scratch);
      return;
    }
  }
}

void FftPlan::recurse(const cd* in, std::size_t stride, cd* out, std::size_t n,
                      std::size_t level) const {
  const std::size_t p = factors_[level];
  const std::size_t m = n / p;
  std::size_t scratch_len = p;
  for (const auto& b : bluestein_) {
    if (b->p == p) scratch_len = std::max(scratch_len, b->m);
  }
  std::vector<cd> t(p), scratch(scratch_len);
  if (m == 1) {
    for (std::size_t r = 0; r < p; ++r) t[r] = in[r * stride];
    butterfly(t.data(), p, scratch.data());
    std::copy(t.begin(), t.end(), out);
    return;
  }
  for (std::size_t r = 0; r < p; ++r) recurse(in + r * stride, stride * p, out + r * m, m, level + 1);
  const std::size_t tw_step = n_ / n;
  for (std::size_t k = 0; k < m; ++k) {
    t[0] = out[k];
    for (std::size_t r = 1; r < p; ++r) t[r] = out[r * m + k] * twiddle_[r * k * tw_step];
    butterfly(t.data(), p, scratch.data());
    for (std::size_t q = 0; q < p; ++q) out[k + q * m] = t[q];
  }
}

void FftPlan::forward(cd* data) const {
  if (n_ == 1) return;
  std::vector<cd> in(data, data + n_);
  recurse(in.data(), 1, data, n_, 0);
}

void FftPlan::inverse(cd* data) const {
  for (std::size_t j = 0; j < n_; ++j) data[j] = std::conj(data[j]);
  forward(data);
  for (std::size_t j = 0; j < n_; ++j) data[j] = std::conj(data[j]);
}

std::shared_ptr<const FftPlan> fft_plan(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const FftPlan>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const FftPlan>(n);
  return slot;
}

void fft_group(const GroupSpec& g, std::vector<cd>& data, bool inverse) {
  const std::size_t total = g.count();
  std::vector<cd> line;
  for (std::size_t j = 0; j < g.rank(); ++j) {
    const auto n = static_cast<std::size_t>(g.orders()[j]);
    if (n == 1) continue;
    const auto plan = fft_plan(n);
    const std::size_t s = g.stride(j);
    const std::size_t block = n * s;
    line.resize(n);
    for (std::size_t base = 0; base < total; base += block) {
      for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t k = 0; k < n; ++k) line[k] = data[base + i + k * s];
        if (inverse) {
          plan->inverse(line.data());
        } else {
          plan->forward(line.data());
        }
        for (std::size_t k = 0; k < n; ++k) data[base + i + k * s] = line[k];
      }
    }
  }
}

}  // namespace finharm
