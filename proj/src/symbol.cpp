#include "torusweyl/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace tw {
namespace {

// exp(2 pi i * turns), with the argument reduced to [0, 1) first.
Complex unit_phase(double turns) {
  const double frac = turns - std::floor(turns);
  const double angle = 2.0 * kPi * frac;
  return {std::cos(angle), std::sin(angle)};
}

double reduce_mod_one(double v) {
  double r = v - std::floor(v);
  if (r >= 1.0) r = 0.0;
  return r;
}

int max_norm(const TorusSymbol::Index& k) {
  int r = 0;
  for (int v : k) r = std::max(r, std::abs(v));
  return r;
}

TorusSymbol::Index negated(const TorusSymbol::Index& k) {
  TorusSymbol::Index out(k.size());
  std::transform(k.begin(), k.end(), out.begin(), [](int v) { return -v; });
  return out;
}

void prune(TorusSymbol::CoefficientMap& coeffs) {
  std::erase_if(coeffs, [](const auto& kv) {
    return std::abs(kv.second) < TorusSymbol::kPruneThreshold;
  });
}

void require_same_dimension(const TorusSymbol& a, const TorusSymbol& b) {
  if (a.dimension() != b.dimension()) {
    throw PreconditionError("symbol dimension mismatch: " + std::to_string(a.dimension()) +
                            " vs " + std::to_string(b.dimension()));
  }
}

}  // namespace

TorusPoint::TorusPoint(std::vector<double> x, std::vector<double> xi)
    : x_(std::move(x)), xi_(std::move(xi)) {
  if (x_.size() != xi_.size() || x_.empty()) {
    throw PreconditionError("torus point needs matching non-empty x and xi");
  }
  for (auto& v : x_) v = reduce_mod_one(v);
  for (auto& v : xi_) v = reduce_mod_one(v);
}

TorusSymbol::TorusSymbol(int n, CoefficientMap coeffs, bool real, int radius)
    : n_(n), coeffs_(std::move(coeffs)), real_(real), radius_(radius) {}

TorusSymbol TorusSymbol::from_coefficients(int n, CoefficientMap coeffs, bool real, int radius) {
  if (n < 1) throw PreconditionError("symbol dimension must be >= 1");
  prune(coeffs);
  int support = 0;
  for (const auto& [k, c] : coeffs) {
    if (static_cast<int>(k.size()) != 2 * n) {
      throw PreconditionError("coefficient index has length " + std::to_string(k.size()) +
                              ", expected " + std::to_string(2 * n));
    }
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw PreconditionError("non-finite symbol coefficient");
    }
    support = std::max(support, max_norm(k));
  }
  if (radius < 0) radius = support;
  if (support > radius) {
    throw PreconditionError("coefficient outside truncation radius " + std::to_string(radius));
  }
  TorusSymbol f(n, std::move(coeffs), false, radius);
  if (real) {
    if (!f.is_conjugate_symmetric(1e-14)) {
      throw PreconditionError("symbol flagged real is not conjugate-symmetric");
    }
    f.real_ = true;
  }
  return f;
}

TorusSymbol TorusSymbol::constant(int n, Complex c) {
  CoefficientMap coeffs;
  coeffs[Index(2 * n, 0)] = c;
  return from_coefficients(n, std::move(coeffs), c.imag() == 0.0, 0);
}

Complex TorusSymbol::coefficient(const Index& k) const {
  auto it = coeffs_.find(k);
  return it == coeffs_.end() ? Complex{} : it->second;
}

bool TorusSymbol::is_conjugate_symmetric(double tol) const {
  for (const auto& [k, c] : coeffs_) {
    if (std::abs(coefficient(negated(k)) - std::conj(c)) > tol) return false;
  }
  return true;
}

TorusSymbol TorusSymbol::conjugate() const {
  CoefficientMap out;
  for (const auto& [k, c] : coeffs_) out[negated(k)] = std::conj(c);
  return TorusSymbol(n_, std::move(out), real_, radius_);
}

TorusSymbol TorusSymbol::real_part() const {
  CoefficientMap out;
  for (const auto& [k, c] : coeffs_) {
    out[k] += 0.5 * c;
    out[negated(k)] += 0.5 * std::conj(c);
  }
  prune(out);
  return TorusSymbol(n_, std::move(out), true, radius_);
}

TorusSymbol TorusSymbol::imag_part() const {
  // (f - conj f) / 2i
  const Complex half_over_i{0.0, -0.5};
  CoefficientMap out;
  for (const auto& [k, c] : coeffs_) {
    out[k] += half_over_i * c;
    out[negated(k)] -= half_over_i * std::conj(c);
  }
  prune(out);
  return TorusSymbol(n_, std::move(out), true, radius_);
}

TorusSymbol TorusSymbol::derivative(int axis) const {
  if (axis < 0 || axis >= 2 * n_) throw PreconditionError("derivative axis out of range");
  CoefficientMap out;
  for (const auto& [k, c] : coeffs_) {
    if (k[axis] != 0) out[k] = Complex{0.0, 2.0 * kPi * k[axis]} * c;
  }
  prune(out);
  return TorusSymbol(n_, std::move(out), real_, radius_);
}

TorusSymbol operator+(const TorusSymbol& a, const TorusSymbol& b) {
  require_same_dimension(a, b);
  auto out = a.coeffs_;
  for (const auto& [k, c] : b.coeffs_) out[k] += c;
  prune(out);
  return TorusSymbol(a.n_, std::move(out), a.real_ && b.real_,
                     std::max(a.radius_, b.radius_));
}

TorusSymbol operator-(const TorusSymbol& a, const TorusSymbol& b) { return a + (-1.0) * b; }

TorusSymbol operator*(Complex s, const TorusSymbol& a) {
  TorusSymbol::CoefficientMap out;
  for (const auto& [k, c] : a.coeffs_) out[k] = s * c;
  prune(out);
  return TorusSymbol(a.n_, std::move(out), a.real_ && s.imag() == 0.0, a.radius_);
}

TorusSymbol operator*(const TorusSymbol& a, const TorusSymbol& b) {
  require_same_dimension(a, b);
  TorusSymbol::CoefficientMap out;
  TorusSymbol::Index k(2 * a.n_);
  for (const auto& [ka, ca] : a.coeffs_) {
    for (const auto& [kb, cb] : b.coeffs_) {
      for (std::size_t i = 0; i < k.size(); ++i) k[i] = ka[i] + kb[i];
      out[k] += ca * cb;
    }
  }
  prune(out);
  return TorusSymbol(a.n_, std::move(out), a.real_ && b.real_, a.radius_ + b.radius_);
}

std::uint64_t TorusSymbol::hash() const {
  std::ostringstream text;
  text << "n=" << n_ << ";R=" << radius_ << ";";
  char buf[64];
  for (const auto& [k, c] : coeffs_) {
    for (int v : k) text << v << ',';
    std::snprintf(buf, sizeof buf, "%a,%a;", c.real(), c.imag());
    text << buf;
  }
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text.str()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string TorusSymbol::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

Complex eval(const TorusSymbol& f, const TorusPoint& w) {
  const int n = f.dimension();
  if (w.dimension() != n) throw PreconditionError("point dimension does not match symbol");
  Complex sum{};
  for (const auto& [k, c] : f.coefficients()) {
    double turns = 0.0;
    for (int j = 0; j < n; ++j) turns += k[j] * w.x()[j] + k[n + j] * w.xi()[j];
    sum += c * unit_phase(turns);
  }
  return sum;
}

TorusSymbol scottish_flag() {
  TorusSymbol::CoefficientMap c;
  c[{1, 0}] = 0.5;
  c[{-1, 0}] = 0.5;
  c[{0, 1}] = Complex{0.0, 0.5};
  c[{0, -1}] = Complex{0.0, 0.5};
  return TorusSymbol::from_coefficients(1, std::move(c));
}

TorusSymbol cos_position() {
  TorusSymbol::CoefficientMap c;
  c[{1, 0}] = 0.5;
  c[{-1, 0}] = 0.5;
  return TorusSymbol::from_coefficients(1, std::move(c), true);
}

TorusSymbol cos_momentum() {
  TorusSymbol::CoefficientMap c;
  c[{0, 1}] = 0.5;
  c[{0, -1}] = 0.5;
  return TorusSymbol::from_coefficients(1, std::move(c), true);
}

TorusSymbol poisson_bracket(const TorusSymbol& f, const TorusSymbol& g) {
  require_same_dimension(f, g);
  const int n = f.dimension();
  const int radius = f.truncation_radius() + g.truncation_radius();
  TorusSymbol::CoefficientMap out;
  TorusSymbol::Index k(2 * n);
  const double two_pi_sq = 4.0 * kPi * kPi;
  // d_xi_j f d_x_j g - d_x_j f d_xi_j g for exponentials (a, b):
  //   (2 pi i)^2 (a_{n+j} b_j - a_j b_{n+j}) = -4 pi^2 (a_{n+j} b_j - a_j b_{n+j}).
  for (const auto& [ka, ca] : f.coefficients()) {
    for (const auto& [kb, cb] : g.coefficients()) {
      long long weight = 0;
      for (int j = 0; j < n; ++j) {
        weight += static_cast<long long>(ka[n + j]) * kb[j] -
                  static_cast<long long>(ka[j]) * kb[n + j];
      }
      if (weight == 0) continue;
      for (std::size_t i = 0; i < k.size(); ++i) k[i] = ka[i] + kb[i];
      out[k] += -two_pi_sq * static_cast<double>(weight) * ca * cb;
    }
  }
  auto result = TorusSymbol::from_coefficients(n, std::move(out), false, radius);
  if (f.is_real() && g.is_real()) result = result.real_part();
  return result;
}

SymbolGrid::SymbolGrid(const TorusSymbol& f, int points_per_axis)
    : n_(f.dimension()), m_(points_per_axis), radius_(f.truncation_radius()) {
  if (m_ < 1) throw PreconditionError("grid needs at least one point per axis");
  if (n_ > 4) throw PreconditionError("grid evaluation supports n <= 4");
  size_ = ipow(static_cast<std::size_t>(m_), 2 * n_);
  for (const auto& kv : f.coefficients()) terms_.emplace_back(kv.first, kv.second);
  const int width = 2 * radius_ + 1;
  phase_.assign(2 * n_, {});
  // All axes share the same midpoint nodes, so one table serves every axis.
  std::vector<Complex> table(static_cast<std::size_t>(m_) * width);
  for (int i = 0; i < m_; ++i) {
    const double w = (i + 0.5) / m_;
    for (int k = -radius_; k <= radius_; ++k) {
      table[static_cast<std::size_t>(i) * width + (k + radius_)] = unit_phase(k * w);
    }
  }
  for (auto& p : phase_) p = table;
}

Complex SymbolGrid::value(std::size_t linear) const {
  const int axes = 2 * n_;
  const int width = 2 * radius_ + 1;
  int coord[8];
  for (int a = axes - 1; a >= 0; --a) {
    coord[a] = static_cast<int>(linear % static_cast<std::size_t>(m_));
    linear /= static_cast<std::size_t>(m_);
  }
  Complex sum{};
  for (const auto& [k, c] : terms_) {
    Complex term = c;
    for (int a = 0; a < axes; ++a) {
      if (k[a] != 0) {
        term *= phase_[a][static_cast<std::size_t>(coord[a]) * width + (k[a] + radius_)];
      }
    }
    sum += term;
  }
  return sum;
}

}  // namespace tw
