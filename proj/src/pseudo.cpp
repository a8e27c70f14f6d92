#include "torusweyl/pseudo.hpp"

#include <sstream>

#include "torusweyl/linops.hpp"
#include "torusweyl/parallel.hpp"
#include "torusweyl/quantize.hpp"

namespace tw {

Complex ComplexGrid::node(int row, int column) const {
  const double re = columns == 1 ? lower_left.real()
                                 : lower_left.real() + (upper_right.real() - lower_left.real()) *
                                                           column / (columns - 1);
  const double im = rows == 1 ? lower_left.imag()
                              : lower_left.imag() +
                                    (upper_right.imag() - lower_left.imag()) * row / (rows - 1);
  return {re, im};
}

void ComplexGrid::validate() const {
  if (columns < 1 || rows < 1) throw PreconditionError("portrait grid needs >= 1 node per axis");
  if (upper_right.real() < lower_left.real() || upper_right.imag() < lower_left.imag()) {
    throw PreconditionError("portrait grid corners out of order");
  }
}

Eigen::MatrixXd bracket_sign_map(const TorusSymbol& f, int M) {
  if (f.dimension() != 1) throw PreconditionError("bracket_sign_map requires n == 1");
  if (M < 1) throw PreconditionError("grid M must be >= 1");
  const auto bracket = poisson_bracket(f.real_part(), f.imag_part());
  Eigen::MatrixXd out(M, M);
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      out(i, j) = eval(bracket, TorusPoint({static_cast<double>(i) / M},
                                           {static_cast<double>(j) / M}))
                      .real();
    }
  }
  return out;
}

PortraitGrid sigma_min_grid(const TorusSymbol& f, int N, const ComplexGrid& grid, int threads) {
  grid.validate();
  const CMatrix fn = quantize(f, N, threads).matrix;
  PortraitGrid out{grid, Eigen::MatrixXd(grid.rows, grid.columns)};
  const auto nodes = static_cast<std::size_t>(grid.rows) * grid.columns;
  parallel_for(nodes, threads, [&](std::size_t k) {
    const int row = static_cast<int>(k / grid.columns);
    const int col = static_cast<int>(k % grid.columns);
    CMatrix shifted = fn;
    shifted.diagonal().array() -= grid.node(row, col);
    out.values(row, col) = sigma_min(shifted);
  });
  return out;
}

std::vector<ProbeRow> resolvent_growth_probe(const TorusSymbol& f, const TorusPoint& w,
                                             const std::vector<int>& N_list, int threads) {
  const double b = eval(poisson_bracket(f.real_part(), f.imag_part()), w).real();
  if (!(b < 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "resolvent probe needs {Re f, Im f}(w) < 0, got " << b;
    throw PreconditionError(msg.str());
  }
  const Complex z = eval(f, w);
  std::vector<ProbeRow> rows(N_list.size());
  for (std::size_t i = 0; i < N_list.size(); ++i) {
    CMatrix shifted = quantize(f, N_list[i], threads).matrix;
    shifted.diagonal().array() -= z;
    rows[i] = {N_list[i], sigma_min(shifted)};
  }
  return rows;
}

double probe_decay_ratio(const std::vector<ProbeRow>& rows, int N_lo, int N_hi) {
  const ProbeRow* lo = nullptr;
  const ProbeRow* hi = nullptr;
  for (const auto& r : rows) {
    if (r.N == N_lo) lo = &r;
    if (r.N == N_hi) hi = &r;
  }
  if (lo == nullptr || hi == nullptr) throw PreconditionError("probe table lacks requested N");
  return hi->sigma_min / lo->sigma_min;
}

}  // namespace tw
