#include "selftest.hpp"

#include <cmath>

#include "torusweyl/linops.hpp"
#include "torusweyl/quantize.hpp"
#include "torusweyl/randmat.hpp"
#include "torusweyl/regularize.hpp"
#include "torusweyl/rmt.hpp"

namespace tw::cli {
namespace {

double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += std::log(xs[i]);
    my += std::log(ys[i]);
  }
  mx /= xs.size();
  my /= ys.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (std::log(xs[i]) - mx) * (std::log(ys[i]) - my);
    sxx += (std::log(xs[i]) - mx) * (std::log(xs[i]) - mx);
  }
  return sxy / sxx;
}

}  // namespace

std::vector<SelfCheck> run_selftest(int threads) {
  std::vector<SelfCheck> out;
  auto add = [&](std::string name, double value, bool passed) {
    out.push_back({std::move(name), passed, value});
  };

  {
    double worst = 0.0;
    for (int N : {1, 2, 7, 64}) {
      const CMatrix F = dft_matrix(N, 1);
      worst = std::max(worst, max_abs(F * F.adjoint() - CMatrix::Identity(N, N)));
    }
    add("dft_unitarity", worst, worst <= 1e-13);
  }
  {
    const int N = 16;
    const CMatrix fx = quantize(cos_position(), N, threads).matrix;
    CMatrix dx = CMatrix::Zero(N, N);
    for (int j = 0; j < N; ++j) dx(j, j) = std::cos(2.0 * kPi * j / N);
    const CMatrix fxi = quantize(cos_momentum(), N, threads).matrix;
    const CMatrix F = dft_matrix(N, 1);
    const double r = std::max(max_abs(fx - dx), max_abs(fxi - F.adjoint() * dx * F));
    add("position_momentum_quantization", r, r <= 1e-13);
  }
  {
    const CMatrix a = quantize(scottish_flag().real_part(), 33, threads).matrix;
    const double r = max_abs(a - a.adjoint());
    add("hermitian_real_symbol", r, r <= 1e-12);
  }
  {
    const int N = 24;
    const auto f = scottish_flag() * scottish_flag();
    const double r = std::abs(quantize(f, N, threads).matrix.trace() - trace_formula(f, N));
    add("trace_formula", r, r <= 1e-10 * N);
  }
  {
    double worst = 0.0, worst_gap = 0.0;
    for (int k = 0; k < 10; ++k) {
      const CMatrix a = 0.3 * sample_ginibre(6, derive_seed(52, k));
      worst = std::max(worst, lemma52_residual(a));
      const double alpha = 0.1;
      worst_gap = std::max(worst_gap, alpha - sigma_min(regularized_operator(a, alpha)));
    }
    add("lemma52_residual", worst, worst <= 1e-10);
    add("regularized_sigma_min_deficit", worst_gap, worst_gap <= 1e-12);
  }
  {
    const auto bracket = poisson_bracket(cos_position(), cos_momentum());
    std::vector<double> Ns{16, 32, 64}, defects;
    for (double Nd : Ns) {
      const int N = static_cast<int>(Nd);
      const CMatrix fn = quantize(cos_position(), N, threads).matrix;
      const CMatrix gn = quantize(cos_momentum(), N, threads).matrix;
      const CMatrix lhs = Complex(0.0, 2.0 * kPi * N) * (fn * gn - gn * fn);
      defects.push_back(op_norm(lhs - quantize(bracket, N, threads).matrix));
    }
    const double s = slope(Ns, defects);
    add("commutator_slope", s, s >= -2.3 && s <= -1.7);
  }
  {
    const double g0 = g_function(0.0);
    const double r = std::abs(g0 - std::pow(kPi, 1.5));
    add("g_at_zero", r, r <= 1e-3);
    const Complex s(0.7, -0.4);
    const Complex closed = (1.0 - std::exp(-std::norm(s))) / s;
    const double e = std::abs(gaussian_resolvent_mean(s) - closed);
    add("gaussian_resolvent_mean", e, e <= 1e-9);
  }
  return out;
}

}  // namespace tw::cli
