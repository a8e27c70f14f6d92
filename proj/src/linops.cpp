#include "torusweyl/linops.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace tw {
namespace {

void require_finite(const CMatrix& a, const char* what) {
  if (!a.allFinite()) throw PreconditionError(std::string(what) + ": non-finite input");
}

void require_square(const CMatrix& a, const char* what) {
  if (a.rows() != a.cols()) throw PreconditionError(std::string(what) + ": matrix not square");
}

}  // namespace

CMatrix SvdFactorization::reconstruct() const {
  return U * S.cast<Complex>().asDiagonal() * V.adjoint();
}

CVector eigenvalues(const CMatrix& a) {
  require_square(a, "eigenvalues");
  require_finite(a, "eigenvalues");
  if (a.rows() == 0) return {};
  Eigen::ComplexEigenSolver<CMatrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigenvalues: QR iteration did not converge");
  }
  return solver.eigenvalues();
}

SvdFactorization svd(const CMatrix& a) {
  require_finite(a, "svd");
  Eigen::BDCSVD<CMatrix> solver(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (solver.info() != Eigen::Success) throw NumericalError("svd: did not converge");
  // Eigen returns singular values in decreasing order.
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

RVector singular_values(const CMatrix& a) {
  require_finite(a, "singular_values");
  Eigen::BDCSVD<CMatrix> solver(a);
  if (solver.info() != Eigen::Success) throw NumericalError("svd: did not converge");
  return solver.singularValues();
}

double sigma_min(const CMatrix& a) {
  const RVector s = singular_values(a);
  return s.size() == 0 ? 0.0 : s(s.size() - 1);
}

double op_norm(const CMatrix& a) {
  const RVector s = singular_values(a);
  return s.size() == 0 ? 0.0 : s(0);
}

double hs_norm(const CMatrix& a) { return a.norm(); }

}  // namespace tw
