#pragma once

#include <vector>

#include "torusweyl/common.hpp"
#include "torusweyl/symbol.hpp"

namespace tw {

/// Rectangular grid of complex nodes, `columns` along Re z and `rows` along Im z.
struct ComplexGrid {
  Complex lower_left{-1.6, -1.6};
  Complex upper_right{1.6, 1.6};
  int columns = 161;
  int rows = 161;

  /// Node at (row, column); row 0 is the bottom edge.
  Complex node(int row, int column) const;
  void validate() const;
};

/// sigma_min(f_N - z) at every node; values(row, column).
struct PortraitGrid {
  ComplexGrid grid;
  Eigen::MatrixXd values;
};

/// {Re f, Im f} at the torus nodes (i / M, j / M); entry (i, j) is x index i, xi index j.
/// Requires n == 1.
Eigen::MatrixXd bracket_sign_map(const TorusSymbol& f, int M);

PortraitGrid sigma_min_grid(const TorusSymbol& f, int N, const ComplexGrid& grid,
                            int threads = 1);

struct ProbeRow {
  int N;
  double sigma_min;
};

/// sigma_min(f_N - f(w)) for each N. Throws PreconditionError unless
/// {Re f, Im f}(w) < 0.
std::vector<ProbeRow> resolvent_growth_probe(const TorusSymbol& f, const TorusPoint& w,
                                             const std::vector<int>& N_list, int threads = 1);

/// sigma_min(N_hi) / sigma_min(N_lo) from a probe table.
double probe_decay_ratio(const std::vector<ProbeRow>& rows, int N_lo, int N_hi);

}  // namespace tw
