#include "finharm/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

#include "finharm/csv.hpp"
#include "finharm/errors.hpp"
#include "finharm/fft.hpp"
#include "finharm/parallel.hpp"

namespace finharm {

template <class Tag>
void Weighted<Tag>::validate() const {
  if (values_.size() != group_.count()) {
    throw ShapeError("value count " + std::to_string(values_.size()) + " does not match |G| = " +
                     std::to_string(group_.size()));
  }
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
    throw DomainError("scaling coefficient must be positive and finite");
  }
  if (!std::isfinite(adjoint_scale())) throw DomainError("adjoint scaling coefficient is not finite");
}

template class Weighted<SignalTag>;
template class Weighted<SpectrumTag>;

namespace {

void require_same_group(const GroupSpec& a, const GroupSpec& b) {
  if (!(a == b)) throw ShapeError("operands live on different groups: " + a.to_string() + " vs " + b.to_string());
}

void require_same_scale(double a, double b) {
  if (std::abs(a - b) > 1e-12 * std::max(std::abs(a), std::abs(b))) {
    throw ContractError("scaling coefficients differ: " + csv::number(a) + " vs " + csv::number(b));
  }
}

// out(y) = scale * sum_x in(x) * exp(sign * 2 pi i <x, y>), straight from the definition.
std::vector<Complex> direct_transform(const GroupSpec& g, const std::vector<Complex>& in, int sign,
                                      double scale) {
  const std::size_t n = g.count();
  const std::int64_t size = g.size();
  const std::size_t r = g.rank();
  std::vector<Complex> table(n);
  for (std::size_t k = 0; k < n; ++k) {
    table[k] = std::polar(1.0, sign * turn_arg(static_cast<std::int64_t>(k), size));
  }
  std::vector<Complex> out(n);
  parallel_for(0, n, [&](std::size_t y) {
    const std::vector<std::int64_t> c = g.phase_coefficients(y);
    std::vector<std::int64_t> digit(r, 0);
    std::int64_t phase = 0;
    Complex acc{};
    for (std::size_t x = 0; x < n; ++x) {
      acc += in[x] * table[static_cast<std::size_t>(phase)];
      for (std::size_t j = r; j-- > 0;) {
        phase += c[j];
        if (phase >= size) phase -= size;
        if (++digit[j] < g.orders()[j]) break;
        digit[j] = 0;
      }
    }
    out[y] = acc * scale;
  }, 16);
  return out;
}

}  // namespace

Spectrum dft(const Signal& f, DftMode mode) {
  const double d = f.scale();
  if (mode == DftMode::Reference) {
    return Spectrum(f.group(), direct_transform(f.group(), f.values(), -1, d), f.adjoint_scale());
  }
  std::vector<Complex> v = f.values();
  fft_group(f.group(), v, false);
  for (auto& z : v) z *= d;
  return Spectrum(f.group(), std::move(v), f.adjoint_scale());
}

Signal idft(const Spectrum& phi, DftMode mode) {
  const double dh = phi.scale();
  if (mode == DftMode::Reference) {
    return Signal(phi.group(), direct_transform(phi.group(), phi.values(), +1, dh), phi.adjoint_scale());
  }
  std::vector<Complex> v = phi.values();
  fft_group(phi.group(), v, true);
  for (auto& z : v) z *= dh;
  return Signal(phi.group(), std::move(v), phi.adjoint_scale());
}

Signal convolve(const Signal& f, const Signal& g, DftMode mode) {
  require_same_group(f.group(), g.group());
  require_same_scale(f.scale(), g.scale());
  const GroupSpec& grp = f.group();
  const std::size_t n = grp.count();
  if (mode == DftMode::Reference) {
    std::vector<Complex> out(n);
    parallel_for(0, n, [&](std::size_t x) {
      Complex acc{};
      for (std::size_t a = 0; a < n; ++a) acc += f[grp.sub_index(x, a)] * g[a];
      out[x] = acc * f.scale();
    }, 16);
    return Signal(grp, std::move(out), f.scale());
  }
  const Spectrum fh = dft(f, mode);
  const Spectrum gh = dft(g, mode);
  std::vector<Complex> prod(n);
  for (std::size_t i = 0; i < n; ++i) prod[i] = fh[i] * gh[i];
  return idft(Spectrum(grp, std::move(prod), fh.scale()), mode);
}

Signal shift_index(const Signal& f, std::size_t a) {
  const GroupSpec& g = f.group();
  std::vector<Complex> out(g.count());
  for (std::size_t x = 0; x < g.count(); ++x) out[x] = f[g.sub_index(x, a)];
  return Signal(g, std::move(out), f.scale());
}

Signal shift(const Signal& f, const GroupElement& a) {
  if (!f.group().owns(a)) throw ShapeError("shift element does not belong to the signal's group");
  return shift_index(f, f.group().index(a));
}

Spectrum shift(const Spectrum& phi, const Character& c) {
  const GroupSpec& g = phi.group();
  if (!g.owns(c)) throw ShapeError("character does not belong to the spectrum's group");
  const std::size_t ci = g.index(c);
  std::vector<Complex> out(g.count());
  for (std::size_t y = 0; y < g.count(); ++y) out[y] = phi[g.sub_index(y, ci)];
  return Spectrum(g, std::move(out), phi.scale());
}

Signal modulate(const Signal& f, const Character& gamma) {
  const GroupSpec& g = f.group();
  if (!g.owns(gamma)) throw ShapeError("character does not belong to the signal's group");
  const std::size_t ci = g.index(gamma);
  std::vector<Complex> out(g.count());
  for (std::size_t x = 0; x < g.count(); ++x) out[x] = g.pairing_index(x, ci) * f[x];
  return Signal(g, std::move(out), f.scale());
}

Signal multiply(const Signal& f, const Signal& g) {
  require_same_group(f.group(), g.group());
  std::vector<Complex> out(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) out[x] = f[x] * g[x];
  return Signal(f.group(), std::move(out), f.scale());
}

Signal reflect(const Signal& f) {
  const GroupSpec& g = f.group();
  std::vector<Complex> out(g.count());
  for (std::size_t x = 0; x < g.count(); ++x) out[x] = f[g.neg_index(x)];
  return Signal(g, std::move(out), f.scale());
}

template <class Tag>
double norm(const Weighted<Tag>& f, double p) {
  if (std::isnan(p) || p < 1.0) throw DomainError("norm exponent must lie in [1, infinity]");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& z : f.values()) m = std::max(m, std::abs(z));
    return m;
  }
  double acc = 0.0;
  if (p == 1.0) {
    for (const auto& z : f.values()) acc += std::abs(z);
    return f.scale() * acc;
  }
  if (p == 2.0) {
    for (const auto& z : f.values()) acc += std::norm(z);
    return std::sqrt(f.scale() * acc);
  }
  for (const auto& z : f.values()) acc += std::pow(std::abs(z), p);
  return std::pow(f.scale() * acc, 1.0 / p);
}

template double norm(const Signal&, double);
template double norm(const Spectrum&, double);

template <class Tag>
Complex inner(const Weighted<Tag>& f, const Weighted<Tag>& g) {
  require_same_group(f.group(), g.group());
  require_same_scale(f.scale(), g.scale());
  Complex acc{};
  for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * std::conj(g[i]);
  return f.scale() * acc;
}

template Complex inner(const Signal&, const Signal&);
template Complex inner(const Spectrum&, const Spectrum&);

Subset support(const Signal& f) {
  std::vector<bool> mask(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) mask[i] = f[i] != Complex{};
  return Subset::from_mask(f.group(), mask);
}

Subset support_eps(const Signal& f, double tau) {
  if (!(tau >= 0.0)) throw DomainError("support threshold must be non-negative");
  std::vector<bool> mask(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) mask[i] = std::abs(f[i]) > tau;
  return Subset::from_mask(f.group(), mask);
}

Signal indicator(const Subset& a, double d) {
  std::vector<Complex> v(a.group().count());
  for (std::size_t i : a.indices()) v[i] = 1.0;
  return Signal(a.group(), std::move(v), d);
}

double relative_l2_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) throw ShapeError("vectors of different length");
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += std::norm(a[i] - b[i]);
    na += std::norm(a[i]);
    nb += std::norm(b[i]);
  }
  const double den = std::sqrt(std::max(na, nb));
  if (den == 0.0) return 0.0;
  return std::sqrt(diff) / den;
}

void write_csv(std::ostream& os, const Signal& f) {
  const GroupSpec& g = f.group();
  std::vector<std::string> header;
  for (std::size_t j = 0; j < g.rank(); ++j) header.push_back("r" + std::to_string(j));
  header.push_back("real");
  header.push_back("imag");
  os << csv::row(header) << '\n';
  for (std::size_t x = 0; x < g.count(); ++x) {
    std::vector<std::string> fields;
    for (std::int64_t r : g.residues(x)) fields.push_back(csv::number(r));
    fields.push_back(csv::number(f[x].real()));
    fields.push_back(csv::number(f[x].imag()));
    os << csv::row(fields) << '\n';
  }
}

Signal read_csv(std::istream& is, const GroupSpec& group, double d) {
  std::string line;
  if (!std::getline(is, line)) throw ShapeError("signal CSV is empty");
  const auto header = csv::split(line);
  if (header.size() != group.rank() + 2 || header[group.rank()] != "real" ||
      header[group.rank() + 1] != "imag") {
    throw ShapeError("signal CSV header does not match " + group.to_string());
  }
  std::vector<Complex> values(group.count());
  std::vector<bool> seen(group.count(), false);
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = csv::split(line);
    if (fields.size() != header.size()) {
      throw ShapeError("signal CSV line " + std::to_string(line_no) + " has the wrong field count");
    }
    std::vector<std::int64_t> r(group.rank());
    try {
      for (std::size_t j = 0; j < group.rank(); ++j) r[j] = std::stoll(fields[j]);
      const std::size_t i = group.index_of_residues(r);
      if (seen[i]) throw ShapeError("signal CSV line " + std::to_string(line_no) + " repeats a point");
      seen[i] = true;
      values[i] = {std::stod(fields[group.rank()]), std::stod(fields[group.rank() + 1])};
    } catch (const std::logic_error&) {
      throw ShapeError("signal CSV line " + std::to_string(line_no) + " is not numeric");
    }
  }
  return Signal(group, std::move(values), d);
}

}  // namespace finharm
