#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "torusweyl/common.hpp"
#include "torusweyl/symbol.hpp"

namespace tw {

/// Gauss-Legendre nodes and weights mapped to [a, b].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(int points, double a = -1.0, double b = 1.0);

/// Mean estimate of a complex random variable.
///
/// The median-of-means estimator splits the samples into contiguous blocks,
/// takes the componentwise median of the block means, and reports as stderr
/// 1.2533 * 1.4826 * MAD(block means) / sqrt(blocks) per component (the normal-
/// theory standard error of a median, with a robust scale). This is a
/// robustness choice: trace samples can have infinite variance.
struct MonteCarloEstimate {
  enum class Estimator { plain, median_of_means };

  Complex value{};
  double stderr_value = 0.0;
  int samples = 0;
  Estimator estimator = Estimator::plain;
  int blocks = 1;
};

inline constexpr int kDefaultBlocks = 32;

MonteCarloEstimate plain_mean(std::span<const Complex> xs);
MonteCarloEstimate median_of_means(std::span<const Complex> xs, int blocks = kDefaultBlocks);

/// E[1 / (s + q)] for a complex standard Gaussian q, by polar quadrature
/// centred at the pole q = -s (the Jacobian cancels the singularity).
Complex gaussian_resolvent_mean(Complex s, double radius = 7.0, int nodes = 128);

/// g(s) = integral over C of e^{-|q|^2} / |s + q| dL(q).
double g_function(Complex s, double radius = 7.0, int nodes = 128);

struct Prop31Options {
  int t_nodes = 16;
  int samples = 32 * 1000;
  std::uint64_t seed = 0;
  int blocks = kDefaultBlocks;
  double max_condition = 1e14;
  int threads = 1;
};

struct Prop31Result {
  double value = 0.0;
  /// Sum over t nodes of weight * stderr of the node estimate.
  double stderr_value = 0.0;
  int evaluations = 0;
  int rejections = 0;
  /// Set when more than 1% of evaluations had to be resampled.
  bool flagged = false;
};

/// integral_0^1 |E tr((tA + delta Q)^{-1} A)| dt by Gauss-Legendre in t and
/// median-of-means in Q. Ill-conditioned draws are resampled and counted.
Prop31Result prop31_lhs(const CMatrix& a, double delta, const Prop31Options& opts = {});

/// C sum_i sigma_i / (delta + sigma_i) log(2 + sigma_i / delta).
double prop31_rhs(const CMatrix& a, double delta, double C = 1.0);

/// diag(0, 0, u_1..u_8) with u_i uniform on (0, 1) drawn from GaussianSource(seed).
CMatrix seeded_diagonal_matrix(std::uint64_t seed);
inline constexpr std::uint64_t kDiagonalMatrixSeed = 20100901;

struct Lemma33Result {
  MonteCarloEstimate estimate;
  Complex deterministic;  // tr(F^{-1} G)
};

/// E tr((F + delta Q)^{-1} G) against tr(F^{-1} G). Requires F invertible and
/// delta ||F^{-1}|| d <= 0.2.
Lemma33Result lemma33_check(const CMatrix& F, const CMatrix& G, double delta, int samples,
                            std::uint64_t seed, int threads = 1, int blocks = kDefaultBlocks);
/// The d = 1 expectation evaluated by quadrature instead of sampling.
Complex lemma33_quadrature_d1(Complex F, Complex G, double delta);

struct Corollary36Result {
  Complex lhs;
  Complex rhs;
  /// Monte Carlo only: standard errors of lhs and rhs.
  double lhs_stderr = 0.0;
  double rhs_stderr = 0.0;
  double combined_stderr() const;
};

enum class Corollary36Method { quadrature_d1, monte_carlo };

struct Corollary36Options {
  Corollary36Method method = Corollary36Method::quadrature_d1;
  int s_nodes = 32;
  int samples = 100000;
  std::uint64_t seed = 0;
  int blocks = kDefaultBlocks;
  int threads = 1;
};

/// lhs = int_0^1 E tr((sB + M + dQ)^{-1} B) ds
/// rhs = int_0^1 E tr((B + tM + dQ)^{-1} M) dt - int_0^1 E tr((tM + dQ)^{-1} M) dt
///       + int_0^1 E tr((sB + dQ)^{-1} B) ds
Corollary36Result corollary36_check(const CMatrix& B, const CMatrix& M, double delta,
                                    const Corollary36Options& opts = {});

struct ContourSegment {
  Complex z_minus;
  Complex z_plus;

  double length() const { return std::abs(z_plus - z_minus); }
  void validate() const;
};

struct ContourOptions {
  int samples = 32 * 100;
  std::uint64_t seed = 0;
  int blocks = kDefaultBlocks;
  int threads = 1;
};

struct ContourResult {
  /// integral over gamma of E tr(f_N - z0 + delta Q - z)^{-1} dz
  MonteCarloEstimate random_integral;
  /// integral over gamma of tr(f_N - z0 + alpha bump(..) U V^* - z)^{-1} dz
  Complex regularized_integral;
  double gate_bound = 0.0;
  bool gate_passed = false;
};

/// Checks 0 in gamma - z0, |gamma| < alpha / 4 and delta <= alpha / 100, then
/// integrates both traces with 8-point Gauss-Legendre along gamma.
ContourResult contour_trace_pair(const TorusSymbol& f, int N, const ContourSegment& gamma,
                                 Complex z0, double alpha, double delta,
                                 const ContourOptions& opts = {});

}  // namespace tw
