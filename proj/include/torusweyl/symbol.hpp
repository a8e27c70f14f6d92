#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "torusweyl/common.hpp"

namespace tw {

/// A point w = (x, xi) of the torus T^{2n}; every component is reduced to [0, 1).
class TorusPoint {
 public:
  TorusPoint(std::vector<double> x, std::vector<double> xi);

  int dimension() const { return static_cast<int>(x_.size()); }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& xi() const { return xi_; }

 private:
  std::vector<double> x_;
  std::vector<double> xi_;
};

/// Band-limited function on T^{2n} stored by its Fourier coefficients
///
///   f(x, xi) = sum over (l, m) of c(l, m) exp(2 pi i (<l, x> + <m, xi>)).
///
/// An index is a vector of length 2n: position frequencies l_1..l_n followed by
/// momentum frequencies m_1..m_n. Every stored index lies inside the
/// max-norm ball of radius truncation_radius(). Symbols are immutable.
class TorusSymbol {
 public:
  using Index = std::vector<int>;
  using CoefficientMap = std::map<Index, Complex>;

  /// Coefficients with modulus below this are dropped after arithmetic.
  static constexpr double kPruneThreshold = 1e-300;

  /// Builds a symbol; radius < 0 means "smallest radius containing the support".
  /// With real = true the coefficients must be conjugate-symmetric.
  static TorusSymbol from_coefficients(int n, CoefficientMap coeffs, bool real = false,
                                       int radius = -1);
  static TorusSymbol constant(int n, Complex c);

  int dimension() const { return n_; }
  int truncation_radius() const { return radius_; }
  bool is_real() const { return real_; }
  const CoefficientMap& coefficients() const { return coeffs_; }
  Complex coefficient(const Index& k) const;

  /// Direct scan of c(-k) == conj(c(k)) to within `tol`.
  bool is_conjugate_symmetric(double tol = 1e-14) const;

  TorusSymbol conjugate() const;
  TorusSymbol real_part() const;
  TorusSymbol imag_part() const;
  /// d/dx_j (axis < n) or d/dxi_{j} (axis = n + j), computed spectrally.
  TorusSymbol derivative(int axis) const;

  friend TorusSymbol operator+(const TorusSymbol& a, const TorusSymbol& b);
  friend TorusSymbol operator-(const TorusSymbol& a, const TorusSymbol& b);
  friend TorusSymbol operator*(Complex s, const TorusSymbol& a);
  /// Pointwise product (coefficient convolution); radius is the sum of radii.
  friend TorusSymbol operator*(const TorusSymbol& a, const TorusSymbol& b);

  /// Stable 64-bit FNV-1a digest of the canonical coefficient listing.
  std::uint64_t hash() const;
  std::string hash_hex() const;

 private:
  TorusSymbol(int n, CoefficientMap coeffs, bool real, int radius);

  int n_ = 1;
  CoefficientMap coeffs_;
  bool real_ = false;
  int radius_ = 0;
};

Complex eval(const TorusSymbol& f, const TorusPoint& w);

/// cos(2 pi x) + i cos(2 pi xi) on T^2.
TorusSymbol scottish_flag();
/// cos(2 pi x_1) on T^2 (a position-only symbol).
TorusSymbol cos_position();
/// cos(2 pi xi_1) on T^2 (a momentum-only symbol).
TorusSymbol cos_momentum();

/// {f, g} = sum_j (d_xi_j f d_x_j g - d_x_j f d_xi_j g), exact in Fourier space.
TorusSymbol poisson_bracket(const TorusSymbol& f, const TorusSymbol& g);

/// Evaluates a symbol on the uniform midpoint grid ((i + 1/2) / M) of T^{2n}.
///
/// Points are addressed by a linear index whose most significant digit is the
/// x_1 coordinate and least significant the xi_n coordinate.
class SymbolGrid {
 public:
  SymbolGrid(const TorusSymbol& f, int points_per_axis);

  int points_per_axis() const { return m_; }
  int dimension() const { return n_; }
  std::size_t size() const { return size_; }
  /// Number of points sharing one leading (x_1) coordinate.
  std::size_t slab_size() const { return size_ / static_cast<std::size_t>(m_); }
  Complex value(std::size_t linear) const;

 private:
  int n_;
  int m_;
  std::size_t size_;
  int radius_;
  std::vector<std::pair<std::vector<int>, Complex>> terms_;
  // phase_[axis][i * (2R+1) + (k + R)] = exp(2 pi i k (i + 1/2) / M)
  std::vector<std::vector<Complex>> phase_;
};

}  // namespace tw
