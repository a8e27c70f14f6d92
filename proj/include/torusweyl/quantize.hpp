#pragma once

#include <optional>
#include <string>

#include "torusweyl/common.hpp"
#include "torusweyl/symbol.hpp"

namespace tw {

/// Largest quantum-space dimension N^n handled with dense matrices.
inline constexpr std::size_t kMaxQuantumDimension = 2048;

/// The matrix f_N of a torus symbol on the N^n-dimensional quantum space.
///
/// Rows and columns are indexed by j in (Z/NZ)^n, enumerated lexicographically
/// with representatives 0..N-1 (j_1 most significant). h = 1 / (2 pi N).
struct QuantizedOperator {
  int N = 1;
  int n = 1;
  CMatrix matrix;
  std::optional<std::string> symbol_id;

  double planck() const { return 1.0 / (2.0 * kPi * N); }
  Eigen::Index dimension() const { return matrix.rows(); }
};

/// Checks that N^n fits the dense envelope and returns it.
std::size_t quantum_dimension(int N, int n);

/// Entry (m, j) is sum over (l, r) of c(l, j - m - rN) (-1)^<r, l> exp(pi i <j + m, l> / N).
QuantizedOperator quantize(const TorusSymbol& f, int N, int threads = 1);

/// Unitary DFT on (Z/NZ)^n: entries exp(-2 pi i <j, j'> / N) / N^{n/2}.
CMatrix dft_matrix(int N, int n);

/// N^n sum over (l, m) of (-1)^{N <l, m>} c(N l, N m); exact trace of f_N.
Complex trace_formula(const TorusSymbol& f, int N);

}  // namespace tw
