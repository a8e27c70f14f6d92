#include "torusweyl/quantize.hpp"

#include <cassert>
#include <cmath>
#include <vector>

#include "torusweyl/parallel.hpp"

namespace tw {
namespace {

// exp(pi i u / N) for u in [0, 2N), exact at multiples of a quarter turn.
std::vector<Complex> half_turn_table(int N) {
  std::vector<Complex> t(2 * static_cast<std::size_t>(N));
  for (int u = 0; u < 2 * N; ++u) {
    if ((2 * u) % N == 0) {
      static constexpr Complex quarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      t[u] = quarter[(2 * u) / N];
    } else {
      const double a = kPi * u / N;
      t[u] = {std::cos(a), std::sin(a)};
    }
  }
  return t;
}

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long long positive_mod(long long a, long long m) {
  const long long r = a % m;
  return r < 0 ? r + m : r;
}

std::vector<int> unflatten(std::size_t linear, int N, int n) {
  std::vector<int> idx(n);
  for (int a = n - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(linear % static_cast<std::size_t>(N));
    linear /= static_cast<std::size_t>(N);
  }
  return idx;
}

}  // namespace

std::size_t quantum_dimension(int N, int n) {
  if (N < 1) throw PreconditionError("N must be >= 1");
  if (n < 1) throw PreconditionError("dimension n must be >= 1");
  std::size_t d = 1;
  for (int i = 0; i < n; ++i) {
    d *= static_cast<std::size_t>(N);
    if (d > kMaxQuantumDimension) {
      throw PreconditionError("N^n exceeds the dense envelope of " +
                              std::to_string(kMaxQuantumDimension));
    }
  }
  return d;
}

QuantizedOperator quantize(const TorusSymbol& f, int N, int threads) {
  const int n = f.dimension();
  const std::size_t dim = quantum_dimension(N, n);
  const auto phase = half_turn_table(N);
  const long long two_n = 2LL * N;

  QuantizedOperator op;
  op.N = N;
  op.n = n;
  op.symbol_id = f.hash_hex();
  op.matrix = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));

  // For each row m and coefficient c(l, k), the column is the unique
  // j = m + k + rN in [0, N)^n; rows are independent so entry sums never
  // cross threads and the result does not depend on the schedule.
  parallel_for(dim, threads, [&](std::size_t row) {
    const auto m = unflatten(row, N, n);
    std::vector<long long> j(n), r(n);
    for (const auto& [k, c] : f.coefficients()) {
      std::size_t col = 0;
      for (int a = 0; a < n; ++a) {
        const long long s = static_cast<long long>(m[a]) + k[n + a];
        r[a] = -floor_div(s, N);
        j[a] = s + r[a] * N;
        assert(j[a] >= 0 && j[a] < N);
        col = col * static_cast<std::size_t>(N) + static_cast<std::size_t>(j[a]);
      }
      // (-1)^<r, l> exp(pi i <j + m, l> / N) = exp(pi i (<j + m, l> + N <r, l>) / N)
      long long u = 0;
      for (int a = 0; a < n; ++a) u += (j[a] + m[a] + r[a] * N) * static_cast<long long>(k[a]);
      op.matrix(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) +=
          c * phase[static_cast<std::size_t>(positive_mod(u, two_n))];
    }
  });
  return op;
}

CMatrix dft_matrix(int N, int n) {
  const std::size_t dim = quantum_dimension(N, n);
  const auto phase = half_turn_table(N);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  CMatrix F(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t a = 0; a < dim; ++a) {
    const auto ja = unflatten(a, N, n);
    for (std::size_t b = 0; b < dim; ++b) {
      const auto jb = unflatten(b, N, n);
      long long dot = 0;
      for (int i = 0; i < n; ++i) dot += static_cast<long long>(ja[i]) * jb[i];
      // exp(-2 pi i dot / N) = exp(pi i u / N) with u = -2 dot mod 2N
      const auto u = positive_mod(-2 * dot, 2LL * N);
      F(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          scale * phase[static_cast<std::size_t>(u)];
    }
  }
  return F;
}

Complex trace_formula(const TorusSymbol& f, int N) {
  if (N < 1) throw PreconditionError("N must be >= 1");
  const int n = f.dimension();
  Complex sum{};
  for (const auto& [k, c] : f.coefficients()) {
    bool on_lattice = true;
    long long pairing = 0;
    for (int a = 0; a < n && on_lattice; ++a) {
      if (k[a] % N != 0 || k[n + a] % N != 0) on_lattice = false;
      else pairing += static_cast<long long>(k[a] / N) * (k[n + a] / N);
    }
    if (!on_lattice) continue;
    const bool odd = ((static_cast<long long>(N) % 2) != 0) && (positive_mod(pairing, 2) == 1);
    sum += odd ? -c : c;
  }
  return static_cast<double>(ipow(static_cast<std::size_t>(N), n)) * sum;
}

}  // namespace tw
