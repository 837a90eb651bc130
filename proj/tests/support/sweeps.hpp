// Admissible parameter tuples for the adjoint-pair families, shared by the
// unit tests and the acceptance binary.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace sweeps {

inline constexpr double kPi = std::numbers::pi;

// U = Arc(r) with r = 2 pi A / n on the lattice, V = Arc(s) with s = 0.95 r eps / alpha.
struct CircleTuple {
  std::int64_t n;
  double alpha, r, eps, s;
};

// r = A d and rho = B d' on the lattices, alpha = 2 pi c / n so that k = c / B and m = c / A are integers.
struct RealsTuple {
  std::int64_t n;
  double d, alpha, r, rho, eps, s, sigma;
};

struct TowerTuple {
  std::int64_t p;
  int j, k;
  double alpha, eps;
};

inline std::vector<CircleTuple> circle_tuples() {
  std::vector<CircleTuple> out;
  for (std::int64_t n : {48, 64, 100, 128, 200, 256, 360, 512}) {
    for (double alpha : {kPi / 3, kPi / 4, kPi / 5, kPi / 6}) {
      for (double frac : {0.5, 0.25}) {
        const double eps = alpha * frac;
        for (std::int64_t a = 1; a <= 12; ++a) {
          const double r = 2 * kPi * static_cast<double>(a) / static_cast<double>(n);
          if (r > alpha) break;
          const auto k = static_cast<std::int64_t>(std::floor(alpha / r + 1e-12));
          if (k < 1 || 4 * k >= n) continue;
          const double s = 0.95 * r * eps / alpha;
          if (!(s > kPi / static_cast<double>(n) * 1.0001)) continue;
          out.push_back({n, alpha, r, eps, s});
        }
      }
    }
  }
  return out;
}

inline std::vector<RealsTuple> reals_tuples() {
  std::vector<RealsTuple> out;
  for (std::int64_t n : {240, 480, 1000}) {
    for (double d : {0.05, 0.1, 0.2}) {
      const double dp = 2 * kPi / (static_cast<double>(n) * d);
      for (std::int64_t c : {12, 24, 36, 40, 60}) {
        if (6 * c > n) continue;
        const double alpha = 2 * kPi * static_cast<double>(c) / static_cast<double>(n);
        for (double frac : {0.5, 0.3}) {
          const double eps = alpha * frac;
          for (std::int64_t a = 1; a <= c; ++a) {
            if (c % a) continue;
            for (std::int64_t b = 1; b <= c; ++b) {
              if (c % b) continue;
              const std::int64_t k = c / b, m = c / a;
              const double r = static_cast<double>(a) * d, rho = static_cast<double>(b) * dp;
              if (a > k || b > m || r > alpha || rho > alpha || 4 * k >= n || 4 * m >= n) continue;
              const double s = 0.95 * r * eps / alpha, sigma = 0.95 * rho * eps / alpha;
              if (!(s > d / 2 * 1.0001 && sigma > dp / 2 * 1.0001)) continue;
              out.push_back({n, d, alpha, r, rho, eps, s, sigma});
            }
          }
        }
      }
    }
  }
  return out;
}

inline std::vector<TowerTuple> tower_tuples() {
  std::vector<TowerTuple> out;
  for (std::int64_t p : {2, 3, 5, 7}) {
    for (int j = 0; j <= 4; ++j) {
      for (int k = 0; k <= 4; ++k) {
        double size = std::pow(static_cast<double>(p), j + k);
        if (size > 4096 || j + k == 0) continue;
        for (double alpha : {kPi / 3, kPi / 4, kPi / 6, 0.3}) {
          for (double frac : {0.5, 0.1}) out.push_back({p, j, k, alpha, alpha * frac});
        }
      }
    }
  }
  return out;
}

}  // namespace sweeps
