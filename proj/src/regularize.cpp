#include "torusweyl/regularize.hpp"

#include <cmath>

#include <Eigen/LU>

#include "torusweyl/quantize.hpp"

namespace tw {
namespace {

// 1 on [-plateau, plateau], smooth decay to 0 at |t| = plateau + width.
double bump_profile(double t, double plateau, double width) {
  const double a = std::abs(t);
  if (a <= plateau) return 1.0;
  if (a >= plateau + width) return 0.0;
  const double u = (a - plateau) / width;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

CMatrix diag_times(const CMatrix& left, const RVector& d, const CMatrix& right_adjoint_of) {
  return left * d.cast<Complex>().asDiagonal() * right_adjoint_of.adjoint();
}

RVector map_squared(const RVector& s, double alpha, const std::function<double(double)>& phi) {
  RVector out(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) out(i) = phi(s(i) * s(i) / (alpha * alpha));
  return out;
}

void require_positive_alpha(double alpha) {
  if (!(alpha > 0.0)) throw PreconditionError("alpha must be > 0");
}

}  // namespace

double bump(double t) { return bump_profile(t, 1.0, 3.0); }

double wide_bump(double t) { return bump_profile(t, 4.0, 12.0); }

CMatrix func_calc_of_gram(const SvdFactorization& f, const std::function<double(double)>& phi,
                          double alpha) {
  require_positive_alpha(alpha);
  return diag_times(f.U, map_squared(f.S, alpha, phi), f.U);
}

CMatrix func_calc_of_gram(const CMatrix& a, const std::function<double(double)>& phi,
                          double alpha) {
  return func_calc_of_gram(svd(a), phi, alpha);
}

CMatrix regularized_operator(const SvdFactorization& f, double alpha) {
  require_positive_alpha(alpha);
  const RVector lift = alpha * map_squared(f.S, alpha, bump);
  return f.reconstruct() + diag_times(f.U, lift, f.V);
}

CMatrix regularized_operator(const CMatrix& a, double alpha) {
  return regularized_operator(svd(a), alpha);
}

double lemma52_residual(const CMatrix& a) {
  if (a.rows() != a.cols()) throw PreconditionError("lemma52_residual: matrix not square");
  const auto f = svd(a);
  const auto id = CMatrix::Identity(a.rows(), a.cols());
  const RVector psi = map_squared(f.S, 1.0, bump);
  const RVector psi_wide = map_squared(f.S, 1.0, wide_bump);

  const CMatrix cutoff = id - diag_times(f.V, psi_wide, f.V);        // 1 - wide(A^*A)
  const CMatrix lifted = a + diag_times(f.U, psi, f.V);               // A + bump(AA^*) U V^*
  const CMatrix gram = a * a.adjoint() + diag_times(f.U, psi, f.U);   // AA^* + bump(AA^*)

  const CMatrix lhs = cutoff * Eigen::PartialPivLU<CMatrix>(lifted).inverse();
  const CMatrix rhs = cutoff * a.adjoint() * Eigen::PartialPivLU<CMatrix>(gram).inverse();
  return op_norm(lhs - rhs);
}

int small_singular_count(const TorusSymbol& f, int N, double alpha, double R) {
  if (!(alpha > 0.0) || !(R > 0.0)) throw PreconditionError("alpha and R must be > 0");
  const RVector s = singular_values(quantize(f, N).matrix);
  const double threshold = R * alpha;
  return static_cast<int>((s.array() <= threshold).count());
}

RegularizedTracePair regularized_trace_pair(const CMatrix& fn, double alpha) {
  require_positive_alpha(alpha);
  const auto f = svd(fn);
  const RVector psi = map_squared(f.S, alpha, bump);
  const CMatrix gram = fn * fn.adjoint() + (alpha * alpha) * diag_times(f.U, psi, f.U);
  const CMatrix lifted = fn + alpha * diag_times(f.U, psi, f.V);

  RegularizedTracePair out;
  out.gram_form = (fn.adjoint() * Eigen::PartialPivLU<CMatrix>(gram).inverse()).trace();
  out.regularized_form = Eigen::PartialPivLU<CMatrix>(lifted).inverse().trace();
  return out;
}

RegularizedTracePair regularized_trace_pair(const TorusSymbol& f, int N, double alpha) {
  return regularized_trace_pair(quantize(f, N).matrix, alpha);
}

}  // namespace tw
