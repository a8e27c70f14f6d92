#pragma once

#include "torusweyl/common.hpp"

namespace tw {

/// A = U diag(S) V^*, singular values sorted descending.
///
/// U and V are not unique when singular values repeat or vanish; consumers
/// should only rely on functions of S and products such as U phi(S) V^*.
struct SvdFactorization {
  CMatrix U;
  RVector S;
  CMatrix V;

  CMatrix reconstruct() const;
};

/// All eigenvalues with multiplicity (Schur-based dense solver).
CVector eigenvalues(const CMatrix& a);

SvdFactorization svd(const CMatrix& a);
/// Singular values only, descending.
RVector singular_values(const CMatrix& a);
double sigma_min(const CMatrix& a);
double op_norm(const CMatrix& a);
double hs_norm(const CMatrix& a);

/// Entrywise maximum modulus, the norm used for identity checks.
inline double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace tw
