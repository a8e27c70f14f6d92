#pragma once

#include <functional>

#include "torusweyl/common.hpp"
#include "torusweyl/linops.hpp"
#include "torusweyl/symbol.hpp"

namespace tw {

/// Smooth bump: 1 on [-1, 1], exp(1 - 1/(1 - ((|t| - 1)/3)^2)) on 1 < |t| < 4, 0 beyond.
double bump(double t);
/// Wide bump: same profile with plateau [-4, 4] and support [-16, 16]; equals 1 on supp bump.
double wide_bump(double t);

/// U phi(S^2 / alpha^2) U^*, i.e. phi(A A^* / alpha^2).
CMatrix func_calc_of_gram(const CMatrix& a, const std::function<double(double)>& phi,
                          double alpha);
/// Same calculus on a precomputed factorization.
CMatrix func_calc_of_gram(const SvdFactorization& f, const std::function<double(double)>& phi,
                          double alpha);

/// A + alpha U bump(S^2 / alpha^2) V^*. Every singular value of the result is
/// s + alpha bump(s^2 / alpha^2) >= alpha.
CMatrix regularized_operator(const CMatrix& a, double alpha);
CMatrix regularized_operator(const SvdFactorization& f, double alpha);

/// Operator norm of
///   (1 - wide(A^*A)) (A + bump(AA^*) U V^*)^{-1} - (1 - wide(A^*A)) A^* (AA^* + bump(AA^*))^{-1},
/// with both inverses formed by LU and only the functional calculus taken from the SVD.
double lemma52_residual(const CMatrix& a);

/// #{i : sigma_i(f_N) <= R alpha}.
int small_singular_count(const TorusSymbol& f, int N, double alpha, double R);

struct RegularizedTracePair {
  /// tr f_N^* (f_N f_N^* + alpha^2 bump(f_N f_N^* / alpha^2))^{-1}
  Complex gram_form;
  /// tr (f_N + alpha bump(f_N f_N^* / alpha^2) U V^*)^{-1}
  Complex regularized_form;
};

RegularizedTracePair regularized_trace_pair(const TorusSymbol& f, int N, double alpha);
RegularizedTracePair regularized_trace_pair(const CMatrix& fn, double alpha);

}  // namespace tw
