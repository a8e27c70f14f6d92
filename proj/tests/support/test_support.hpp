#pragma once

#include <cstdint>

#include "torusweyl/common.hpp"
#include "torusweyl/randmat.hpp"
#include "torusweyl/symbol.hpp"

namespace tw::testing {

/// Symbol with i.i.d. complex coefficients on every index of max-norm <= radius.
inline TorusSymbol random_symbol(int n, int radius, std::uint64_t seed, bool real = false) {
  GaussianSource src(seed);
  TorusSymbol::CoefficientMap coeffs;
  TorusSymbol::Index k(2 * n, -radius);
  for (;;) {
    coeffs[k] = src.complex_normal();
    int a = 0;
    while (a < 2 * n && ++k[a] > radius) k[a++] = -radius;
    if (a == 2 * n) break;
  }
  auto f = TorusSymbol::from_coefficients(n, std::move(coeffs), false, radius);
  return real ? f.real_part() : f;
}

inline CMatrix random_matrix(int rows, int cols, std::uint64_t seed) {
  GaussianSource src(seed);
  CMatrix a(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) a(r, c) = src.complex_normal();
  return a;
}

/// Least-squares slope of log y against log x.
template <class Xs, class Ys>
double loglog_slope(const Xs& xs, const Ys& ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += std::log(static_cast<double>(xs[i]));
    my += std::log(static_cast<double>(ys[i]));
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log(static_cast<double>(xs[i])) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(static_cast<double>(ys[i])) - my);
  }
  return sxy / sxx;
}

}  // namespace tw::testing
