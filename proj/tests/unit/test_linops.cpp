#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "../support/test_support.hpp"
#include "torusweyl/linops.hpp"

using namespace tw;
using tw::testing::random_matrix;

namespace {

std::vector<Complex> sorted(const CVector& v) {
  std::vector<Complex> out(v.begin(), v.end());
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

}  // namespace

TEST_CASE("eigenvalues of simple matrices") {
  CMatrix d = CMatrix::Zero(3, 3);
  d.diagonal() << 1.0, 2.0, 3.0;
  const auto e = sorted(eigenvalues(d));
  for (int i = 0; i < 3; ++i) CHECK(std::abs(e[i] - double(i + 1)) < 1e-14);

  CMatrix jordan = CMatrix::Zero(2, 2);
  jordan(0, 1) = 1.0;
  const CVector ej = eigenvalues(jordan);
  REQUIRE(ej.size() == 2);
  CHECK(std::abs(ej(0)) < 1e-14);
  CHECK(std::abs(ej(1)) < 1e-14);
}

TEST_CASE("eigenvalue sum and product match trace and determinant") {
  const CMatrix a8 = random_matrix(8, 8, 1);
  CHECK(std::abs(eigenvalues(a8).sum() - a8.trace()) <= 1e-10);
  for (int s = 0; s < 10; ++s) {
    const CMatrix a = random_matrix(10, 10, 100 + s);
    const CVector e = eigenvalues(a);
    CHECK(std::abs(e.sum() - a.trace()) <= 1e-8 * (1 + std::abs(a.trace())));
    const Complex det = Eigen::PartialPivLU<CMatrix>(a).determinant();
    CHECK(std::abs(e.prod() - det) <= 1e-8 * std::abs(det));
  }
}

TEST_CASE("non-finite input is rejected") {
  CMatrix a = CMatrix::Identity(2, 2);
  a(0, 1) = std::nan("");
  CHECK_THROWS_AS(eigenvalues(a), PreconditionError);
  CHECK_THROWS_AS(svd(a), PreconditionError);
}

TEST_CASE("svd of a diagonal matrix and norms") {
  CMatrix d = CMatrix::Zero(2, 2);
  d.diagonal() << 3.0, 4.0;
  const auto f = svd(d);
  CHECK(f.S(0) == doctest::Approx(4.0));
  CHECK(f.S(1) == doctest::Approx(3.0));
  CHECK(op_norm(d) == doctest::Approx(4.0));
  CHECK(sigma_min(d) == doctest::Approx(3.0));
  CHECK(hs_norm(CMatrix::Identity(7, 7)) == doctest::Approx(std::sqrt(7.0)));
  CHECK(hs_norm(d) == doctest::Approx(5.0));
}

TEST_CASE("sigma_min is the reciprocal norm of the inverse") {
  for (int s = 0; s < 5; ++s) {
    const CMatrix a = random_matrix(6, 6, 200 + s);
    const CMatrix inv = Eigen::PartialPivLU<CMatrix>(a).inverse();
    CHECK(std::abs(sigma_min(a) - 1.0 / op_norm(inv)) <= 1e-9);
  }
}

TEST_CASE("svd reconstruction, unitarity and ordering") {
  for (int s = 0; s < 50; ++s) {
    const int d = 1 + (s * 13) % 64;
    const CMatrix a = random_matrix(d, d, 300 + s);
    const auto f = svd(a);
    CHECK(max_abs(f.reconstruct() - a) <= 1e-11 * op_norm(a));
    CHECK(max_abs(f.U.adjoint() * f.U - CMatrix::Identity(d, d)) <= 1e-12);
    CHECK(max_abs(f.V.adjoint() * f.V - CMatrix::Identity(d, d)) <= 1e-12);
    for (int i = 0; i + 1 < d; ++i) CHECK(f.S(i) >= f.S(i + 1));
    CHECK(f.S.minCoeff() >= 0.0);
    CHECK((singular_values(a) - f.S).cwiseAbs().maxCoeff() <= 1e-12 * f.S(0));
  }
}

TEST_CASE("results are deterministic for fixed input") {
  const CMatrix a = random_matrix(30, 30, 7);
  CHECK(eigenvalues(a) == eigenvalues(a));
  CHECK(svd(a).S == svd(a).S);
}
