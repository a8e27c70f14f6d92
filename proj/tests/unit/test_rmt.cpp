#include <doctest.h>

#include <cmath>

#include "../support/test_support.hpp"
#include "torusweyl/linops.hpp"
#include "torusweyl/rmt.hpp"

using namespace tw;
using tw::testing::random_matrix;

namespace {

// E[1 / (s + q)] for complex standard Gaussian q, in closed form.
Complex resolvent_mean_oracle(Complex s) {
  if (std::abs(s) == 0.0) return 0.0;
  return (1.0 - std::exp(-std::norm(s))) / s;
}

// g(s) in closed form via the modified Bessel function.
double g_oracle(double r) {
  const double a = r * r;
  return std::pow(kPi, 1.5) * std::exp(-a / 2) * std::cyl_bessel_i(0.0, a / 2);
}

CMatrix random_unitary(int d, std::uint64_t seed) {
  Eigen::HouseholderQR<CMatrix> qr(random_matrix(d, d, seed));
  return qr.householderQ() * CMatrix::Identity(d, d);
}

}  // namespace

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  const auto rule = gauss_legendre(8, 0.0, 2.0);
  double w = 0.0, x15 = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    w += rule.weights[i];
    x15 += rule.weights[i] * std::pow(rule.nodes[i], 15);
  }
  CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(x15 == doctest::Approx(std::pow(2.0, 16) / 16).epsilon(1e-13));
  CHECK_THROWS_AS(gauss_legendre(0), PreconditionError);
}

TEST_CASE("plain and median-of-means estimators") {
  std::vector<Complex> xs;
  for (int i = 0; i < 64; ++i) xs.push_back(Complex(i % 2, -(i % 4)));
  const auto p = plain_mean(xs);
  CHECK(std::abs(p.value - Complex(0.5, -1.5)) <= 1e-15);
  CHECK(p.samples == 64);
  CHECK(p.stderr_value > 0.0);

  const std::vector<Complex> flat(96, Complex(2, 3));
  const auto m = median_of_means(flat, 32);
  CHECK(m.value == Complex(2, 3));
  CHECK(m.stderr_value == 0.0);
  CHECK(m.blocks == 32);
  CHECK(m.estimator == MonteCarloEstimate::Estimator::median_of_means);

  // one wild sample moves the plain mean but not the median of block means
  std::vector<Complex> heavy(320, Complex(1, 0));
  heavy[5] = 1e12;
  CHECK(std::abs(median_of_means(heavy).value - 1.0) <= 1e-12);
  CHECK(std::abs(plain_mean(heavy).value) > 1e6);
  CHECK_THROWS_AS(median_of_means({}, 4), PreconditionError);
}

TEST_CASE("gaussian resolvent mean against the closed form") {
  for (Complex s : {Complex(0.3, 0.0), Complex(1.0, 1.0), Complex(-2.0, 0.5), Complex(0.0, 4.0),
                    Complex(1e-3, 0.0), Complex(6.0, -3.0)}) {
    CHECK(std::abs(gaussian_resolvent_mean(s) - resolvent_mean_oracle(s)) <= 1e-9);
  }
  CHECK(std::abs(gaussian_resolvent_mean(0.0)) <= 1e-12);
}

TEST_CASE("g function values and rotation invariance") {
  CHECK(std::abs(g_function(0.0) - std::pow(kPi, 1.5)) <= 1e-3);
  CHECK(std::abs(g_function(10.0) - kPi / 10) <= 0.02 * kPi / 10);
  for (double r : {0.5, 1.0, 2.0, 5.0}) CHECK(std::abs(g_function(r) - g_oracle(r)) <= 1e-8);
  const double g1 = g_function(1.0);
  for (int k = 1; k < 4; ++k)
    CHECK(std::abs(g_function(std::polar(1.0, k * kPi / 2 + 0.3)) - g1) <= 1e-6);
}

TEST_CASE("integral bound right-hand side") {
  CHECK(prop31_rhs(CMatrix::Zero(4, 4), 0.1) == 0.0);
  CHECK(prop31_rhs(CMatrix::Identity(5, 5), 1.0) == doctest::Approx(2.5 * std::log(3.0)));
  const CMatrix a = seeded_diagonal_matrix(kDiagonalMatrixSeed);
  CHECK(prop31_rhs(a, 1e-3) == doctest::Approx(47.097348931320319).epsilon(1e-12));
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 6; ++k) {
    const double v = prop31_rhs(a, std::pow(10.0, -7 + k));
    CHECK(v <= prev);
    prev = v;
  }
  CHECK_THROWS_AS(prop31_rhs(a, 0.0), PreconditionError);
}

TEST_CASE("seeded diagonal matrix") {
  const CMatrix a = seeded_diagonal_matrix(kDiagonalMatrixSeed);
  CHECK(a(0, 0) == 0.0);
  CHECK(a(1, 1) == 0.0);
  for (int i = 2; i < 10; ++i) {
    CHECK(a(i, i).real() > 0.0);
    CHECK(a(i, i).real() < 1.0);
  }
  CHECK(max_abs(a - CMatrix(a.diagonal().asDiagonal())) == 0.0);
}

TEST_CASE("integral bound left-hand side") {
  Prop31Options opts;
  opts.samples = 3200;
  CHECK(prop31_lhs(CMatrix::Zero(3, 3), 0.1, opts).value == 0.0);

  // d = 1, A = 1, delta = 1/2: |E 1 / (t + q / 2)| = (1 - exp(-4 t^2)) / t
  opts.samples = 32000;
  const auto scalar = prop31_lhs(CMatrix::Identity(1, 1), 0.5, opts);
  const auto rule = gauss_legendre(64, 0.0, 1.0);
  double oracle = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t = rule.nodes[i];
    oracle += rule.weights[i] * (1.0 - std::exp(-4 * t * t)) / t;
  }
  CHECK(std::abs(scalar.value - oracle) <= 3 * scalar.stderr_value);
  CHECK(scalar.rejections == 0);
  CHECK_FALSE(scalar.flagged);

  opts.samples = 6400;
  const CMatrix a = seeded_diagonal_matrix(kDiagonalMatrixSeed);
  for (double delta : {1e-1, 1e-4}) {
    const auto r = prop31_lhs(a, delta, opts);
    CHECK(r.value <= prop31_rhs(a, delta));
    CHECK(r.evaluations == 6400 * 16);
  }

  // unitary invariance: U A V^* gives the same expectation
  const CMatrix U = random_unitary(10, 1);
  const CMatrix V = random_unitary(10, 2);
  opts.seed = 99;
  const auto base = prop31_lhs(a, 1e-2, opts);
  const auto rotated = prop31_lhs(U * a * V.adjoint(), 1e-2, opts);
  CHECK(std::abs(base.value - rotated.value) <= 4 * std::hypot(base.stderr_value, rotated.stderr_value));

  opts.threads = 4;
  const auto threaded = prop31_lhs(a, 1e-2, opts);
  CHECK(threaded.value == base.value);
  CHECK(threaded.stderr_value == base.stderr_value);
  CHECK_THROWS_AS(prop31_lhs(a, 0.0, opts), PreconditionError);
}

TEST_CASE("perturbed trace approximation") {
  const auto zero = lemma33_check(CMatrix::Identity(2, 2), CMatrix::Zero(2, 2), 0.05, 64, 1);
  CHECK(zero.estimate.value == Complex{});
  CHECK(zero.deterministic == Complex{});

  const CMatrix F = 2.0 * CMatrix::Identity(1, 1);
  const CMatrix G = CMatrix::Identity(1, 1);
  const auto scalar = lemma33_check(F, G, 0.05, 100000, 7);
  CHECK(std::abs(scalar.deterministic - 0.5) <= 1e-15);
  CHECK(std::abs(scalar.estimate.value - 0.5) <= 4 * scalar.estimate.stderr_value);
  const Complex quad = lemma33_quadrature_d1(2.0, 1.0, 0.05);
  CHECK(std::abs(quad - 0.5 * (1.0 - std::exp(-1600.0))) <= 1e-10);
  CHECK(std::abs(quad - 0.5) <= 1e-4);

  // d = 8: F with sigma_min >= 1
  const auto svdF = svd(random_matrix(8, 8, 11));
  RVector s(8);
  for (int i = 0; i < 8; ++i) s(i) = 1.0 + 0.25 * i;
  const CMatrix F8 = svdF.U * s.cast<Complex>().asDiagonal() * svdF.V.adjoint();
  const CMatrix G8 = random_matrix(8, 8, 12);
  const auto r8 = lemma33_check(F8, G8, 0.01, 100000, 13);
  CHECK(std::abs(r8.estimate.value - r8.deterministic) <= 4 * r8.estimate.stderr_value);

  CHECK_THROWS_AS(lemma33_check(F8, G8, 0.1, 100, 1), PreconditionError);
  CHECK_THROWS_AS(lemma33_check(CMatrix::Zero(2, 2), CMatrix::Zero(2, 2), 0.01, 100, 1),
                  PreconditionError);
  CHECK_THROWS_AS(lemma33_quadrature_d1(0.0, 1.0, 0.1), PreconditionError);
}

TEST_CASE("exchange identity") {
  const CMatrix one = CMatrix::Identity(1, 1);
  const auto trivial = corollary36_check(one, CMatrix::Zero(1, 1), 0.5);
  CHECK(trivial.lhs == trivial.rhs);

  // M a real multiple of B: both sides integrate the same function over [0.7, 1.7].
  const auto collinear = corollary36_check(one, 0.7 * one, 0.5);
  CHECK(std::abs(collinear.lhs - collinear.rhs) <= 1e-8);

  Corollary36Options mc;
  mc.method = Corollary36Method::monte_carlo;
  mc.seed = 36;
  const CMatrix B3 = random_matrix(3, 3, 1);
  const auto r3 = corollary36_check(B3, 0.7 * B3, 0.3, mc);
  CHECK(std::abs(r3.lhs - r3.rhs) <= 4 * r3.combined_stderr());
  CHECK(r3.combined_stderr() > 0.0);

  CHECK_THROWS_AS(corollary36_check(random_matrix(2, 2, 1), random_matrix(2, 2, 2), 0.3),
                  PreconditionError);
}

TEST_CASE("exchange identity defect equals the Stokes term of the non-holomorphic mean") {
  // h(z) = E 1/(z + delta q) has dbar h = exp(-|z|^2/delta^2) / delta^2, so for
  // B = 1, M = i the two sides differ by the contour integral of h around the
  // unit square: rhs - lhs = 2i * integral of dbar h = 2i (pi/4) erf(1/delta)^2.
  for (double delta : {0.5, 0.25}) {
    const auto r = corollary36_check(CMatrix::Identity(1, 1),
                                     Complex(0, 1) * CMatrix::Identity(1, 1), delta);
    const double e = std::erf(1.0 / delta);
    const Complex stokes(0.0, 2.0 * (kPi / 4) * e * e);
    CHECK(std::abs((r.rhs - r.lhs) - stokes) <= 1e-6);
  }
}

TEST_CASE("contour trace pair for a constant symbol") {
  const int N = 6;
  const ContourSegment gamma{Complex(-0.01, 0.0), Complex(0.01, 0.0)};
  ContourOptions opts;
  opts.samples = 640;
  const auto r = contour_trace_pair(TorusSymbol::constant(1, 2.0), N, gamma, 0.0, 0.1, 1e-3, opts);
  // integral of N / (2 - z) dz along the segment
  const Complex exact = double(N) * std::log((2.0 - gamma.z_minus) / (2.0 - gamma.z_plus));
  CHECK(std::abs(r.regularized_integral - exact) <= 1e-10);
  CHECK(std::abs(r.regularized_integral - gamma.length() * N / 2.0) <= 1e-5);
  CHECK(std::abs(r.random_integral.value - exact) <= 4 * r.random_integral.stderr_value + 1e-12);
  CHECK(r.gate_passed);
}

TEST_CASE("contour trace pair for the scottish flag") {
  const ContourSegment gamma{Complex(-0.03, 0.0), Complex(0.03, 0.0)};
  ContourOptions opts;
  opts.samples = 640;
  const auto r = contour_trace_pair(scottish_flag(), 40, gamma, 0.0, 0.3, 1e-3, opts);
  CHECK(r.gate_passed);
  opts.threads = 3;
  const auto t = contour_trace_pair(scottish_flag(), 40, gamma, 0.0, 0.3, 1e-3, opts);
  CHECK(t.random_integral.value == r.random_integral.value);

  CHECK_THROWS_AS(contour_trace_pair(scottish_flag(), 40, gamma, 0.0, 0.3, 0.15), PreconditionError);
  CHECK_THROWS_AS(contour_trace_pair(scottish_flag(), 40, gamma, 0.0, 0.2, 1e-3), PreconditionError);
  CHECK_THROWS_AS(contour_trace_pair(scottish_flag(), 40, gamma, Complex(0, 0.01), 0.3, 1e-3),
                  PreconditionError);
  CHECK_THROWS_AS(contour_trace_pair(scottish_flag(), 40, ContourSegment{0.0, 0.0}, 0.0, 0.3, 1e-3),
                  PreconditionError);
}
