#include "torusweyl/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "torusweyl/linops.hpp"
#include "torusweyl/parallel.hpp"
#include "torusweyl/quantize.hpp"
#include "torusweyl/randmat.hpp"
#include "torusweyl/regularize.hpp"

namespace tw {
namespace {

// 1.2533 = sqrt(pi/2) (median vs mean efficiency), 1.4826 = MAD-to-sigma.
constexpr double kMedianStderrScale = 1.2533141373155003 * 1.482602218505602;

double median_of(std::vector<double> v) {
  const std::size_t n = v.size();
  std::sort(v.begin(), v.end());
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// median and robust standard error of the median for one component
std::pair<double, double> robust_center(const std::vector<double>& v) {
  const double med = median_of(v);
  std::vector<double> dev(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) dev[i] = std::abs(v[i] - med);
  const double mad = median_of(dev);
  return {med, kMedianStderrScale * mad / std::sqrt(static_cast<double>(v.size()))};
}

Complex trace_solve(const Eigen::PartialPivLU<CMatrix>& lu, const CMatrix& rhs) {
  return lu.solve(rhs).trace();
}

void require_square(const CMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw PreconditionError(std::string(what) + ": matrix must be square and non-empty");
  }
}

}  // namespace

QuadratureRule gauss_legendre(int points, double a, double b) {
  if (points < 1) throw PreconditionError("Gauss-Legendre needs >= 1 point");
  QuadratureRule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  const int n = points;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 2.0;
  }
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

MonteCarloEstimate plain_mean(std::span<const Complex> xs) {
  if (xs.empty()) throw PreconditionError("no samples");
  MonteCarloEstimate est;
  est.samples = static_cast<int>(xs.size());
  Complex sum{};
  for (const auto& x : xs) sum += x;
  est.value = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (const auto& x : xs) ss += std::norm(x - est.value);
    est.stderr_value = std::sqrt(ss / static_cast<double>(xs.size() - 1) /
                                 static_cast<double>(xs.size()));
  }
  return est;
}

MonteCarloEstimate median_of_means(std::span<const Complex> xs, int blocks) {
  if (xs.empty()) throw PreconditionError("no samples");
  if (blocks < 1) throw PreconditionError("blocks must be >= 1");
  const std::size_t n = xs.size();
  const std::size_t b = std::min<std::size_t>(static_cast<std::size_t>(blocks), n);
  if (b == 1) return plain_mean(xs);
  std::vector<double> re(b), im(b);
  for (std::size_t k = 0; k < b; ++k) {
    const std::size_t lo = k * n / b;
    const std::size_t hi = (k + 1) * n / b;
    Complex sum{};
    for (std::size_t i = lo; i < hi; ++i) sum += xs[i];
    sum /= static_cast<double>(hi - lo);
    re[k] = sum.real();
    im[k] = sum.imag();
  }
  const auto [mr, sr] = robust_center(re);
  const auto [mi, si] = robust_center(im);
  MonteCarloEstimate est;
  est.value = {mr, mi};
  est.stderr_value = std::hypot(sr, si);
  est.samples = static_cast<int>(n);
  est.estimator = MonteCarloEstimate::Estimator::median_of_means;
  est.blocks = static_cast<int>(b);
  return est;
}

namespace {

// Integrates weight(theta) * exp(-|rho e^{i theta} - s|^2) over the disk of
// radius |s| + radius around the pole, in polar coordinates (rho, theta).
template <class AngularWeight>
Complex polar_gaussian_integral(Complex s, double radius, int nodes, AngularWeight&& weight) {
  if (!(radius > 0.0) || nodes < 4) throw PreconditionError("quadrature parameters must be positive");
  const double outer = std::abs(s) + radius;
  const int panels = static_cast<int>(std::ceil(outer / 0.5));
  const auto base = gauss_legendre(16, 0.0, 1.0);
  const int angles = std::max(nodes, 32 * static_cast<int>(std::ceil(std::abs(s) + 1.0)));
  const double dtheta = 2.0 * kPi / angles;
  std::vector<Complex> dirs(angles);
  std::vector<Complex> wts(angles);
  for (int k = 0; k < angles; ++k) {
    dirs[k] = std::polar(1.0, k * dtheta);
    wts[k] = weight(k * dtheta);
  }
  Complex total{};
  const double h = outer / panels;
  for (int p = 0; p < panels; ++p) {
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
      const double rho = h * (p + base.nodes[i]);
      Complex ring{};
      for (int k = 0; k < angles; ++k) ring += wts[k] * std::exp(-std::norm(rho * dirs[k] - s));
      total += (h * base.weights[i] * dtheta) * ring;
    }
  }
  return total;
}

}  // namespace

Complex gaussian_resolvent_mean(Complex s, double radius, int nodes) {
  // q = -s + rho e^{i theta}: 1/(s+q) dL = e^{-i theta} d rho d theta
  return polar_gaussian_integral(s, radius, nodes,
                                 [](double theta) { return std::polar(1.0, -theta); }) /
         kPi;
}

double g_function(Complex s, double radius, int nodes) {
  return polar_gaussian_integral(s, radius, nodes, [](double) { return Complex{1.0, 0.0}; })
      .real();
}

Prop31Result prop31_lhs(const CMatrix& a, double delta, const Prop31Options& opts) {
  require_square(a, "prop31_lhs");
  if (!(delta > 0.0)) throw PreconditionError("delta must be > 0");
  if (opts.samples < 1) throw PreconditionError("samples must be >= 1");
  const auto rule = gauss_legendre(opts.t_nodes, 0.0, 1.0);
  const int d = static_cast<int>(a.rows());
  const std::size_t T = rule.nodes.size();
  const std::size_t S = static_cast<std::size_t>(opts.samples);
  std::vector<Complex> values(S * T);
  std::vector<int> rejected(S, 0);

  parallel_for(S, opts.threads, [&](std::size_t k) {
    const std::uint64_t sample_seed = derive_seed(opts.seed, k);
    const CMatrix q = sample_ginibre(d, sample_seed);
    for (std::size_t j = 0; j < T; ++j) {
      CMatrix x = rule.nodes[j] * a + delta * q;
      Eigen::PartialPivLU<CMatrix> lu(x);
      for (std::uint64_t attempt = 1; !(1.0 / lu.rcond() <= opts.max_condition); ++attempt) {
        ++rejected[k];
        x = rule.nodes[j] * a + delta * sample_ginibre(d, derive_seed(sample_seed, attempt));
        lu.compute(x);
      }
      values[k * T + j] = trace_solve(lu, a);
    }
  });

  Prop31Result out;
  std::vector<Complex> column(S);
  for (std::size_t j = 0; j < T; ++j) {
    for (std::size_t k = 0; k < S; ++k) column[k] = values[k * T + j];
    const auto est = median_of_means(column, opts.blocks);
    out.value += rule.weights[j] * std::abs(est.value);
    out.stderr_value += rule.weights[j] * est.stderr_value;
  }
  out.evaluations = static_cast<int>(S * T);
  for (int r : rejected) out.rejections += r;
  out.flagged = out.rejections > 0.01 * out.evaluations;
  return out;
}

double prop31_rhs(const CMatrix& a, double delta, double C) {
  if (!(delta > 0.0)) throw PreconditionError("delta must be > 0");
  const RVector s = singular_values(a);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    sum += s(i) / (delta + s(i)) * std::log(2.0 + s(i) / delta);
  }
  return C * sum;
}

CMatrix seeded_diagonal_matrix(std::uint64_t seed) {
  GaussianSource source(seed);
  CMatrix a = CMatrix::Zero(10, 10);
  for (int i = 2; i < 10; ++i) a(i, i) = source.uniform();
  return a;
}

Lemma33Result lemma33_check(const CMatrix& F, const CMatrix& G, double delta, int samples,
                            std::uint64_t seed, int threads, int blocks) {
  require_square(F, "lemma33_check");
  if (G.rows() != F.rows() || G.cols() != F.cols()) {
    throw PreconditionError("lemma33_check: F and G sizes differ");
  }
  if (!(delta > 0.0) || samples < 1) throw PreconditionError("need delta > 0 and samples >= 1");
  const double smin = sigma_min(F);
  if (!(smin > 0.0)) throw PreconditionError("lemma33_check: F is not invertible");
  const double beta = 1.0 / smin;
  const int d = static_cast<int>(F.rows());
  if (delta * beta * d > 0.2) {
    std::ostringstream msg;
    msg << "lemma33_check: delta * ||F^{-1}|| * d = " << delta * beta * d << " exceeds 0.2";
    throw PreconditionError(msg.str());
  }
  std::vector<Complex> values(static_cast<std::size_t>(samples));
  parallel_for(values.size(), threads, [&](std::size_t k) {
    const CMatrix x = F + delta * sample_ginibre(d, derive_seed(seed, k));
    values[k] = trace_solve(Eigen::PartialPivLU<CMatrix>(x), G);
  });
  return {median_of_means(values, blocks),
          trace_solve(Eigen::PartialPivLU<CMatrix>(F), G)};
}

Complex lemma33_quadrature_d1(Complex F, Complex G, double delta) {
  if (F == Complex{}) throw PreconditionError("lemma33_quadrature_d1: F must be invertible");
  if (!(delta > 0.0)) throw PreconditionError("delta must be > 0");
  return (G / delta) * gaussian_resolvent_mean(F / delta);
}

double Corollary36Result::combined_stderr() const { return std::hypot(lhs_stderr, rhs_stderr); }

Corollary36Result corollary36_check(const CMatrix& B, const CMatrix& M, double delta,
                                    const Corollary36Options& opts) {
  require_square(B, "corollary36_check");
  if (M.rows() != B.rows() || M.cols() != B.cols()) {
    throw PreconditionError("corollary36_check: B and M sizes differ");
  }
  if (!(delta > 0.0)) throw PreconditionError("delta must be > 0");
  const auto rule = gauss_legendre(opts.s_nodes, 0.0, 1.0);
  Corollary36Result out;

  if (opts.method == Corollary36Method::quadrature_d1) {
    if (B.rows() != 1) throw PreconditionError("quadrature_d1 requires d == 1");
    const Complex b = B(0, 0);
    const Complex m = M(0, 0);
    // E[y / (x + delta q)] = (y / delta) E[1 / (x / delta + q)]
    auto expect = [&](Complex x, Complex y) {
      return (y / delta) * gaussian_resolvent_mean(x / delta);
    };
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double s = rule.nodes[i];
      const double w = rule.weights[i];
      out.lhs += w * expect(s * b + m, b);
      out.rhs += w * (expect(b + s * m, m) - expect(s * m, m) + expect(s * b, b));
    }
    return out;
  }

  if (opts.samples < 2) throw PreconditionError("monte_carlo needs samples >= 2");
  const int d = static_cast<int>(B.rows());
  std::vector<Complex> lhs(static_cast<std::size_t>(opts.samples));
  std::vector<Complex> rhs(lhs.size());
  parallel_for(lhs.size(), opts.threads, [&](std::size_t k) {
    const CMatrix dq = delta * sample_ginibre(d, derive_seed(opts.seed, k));
    auto tr = [&](const CMatrix& x, const CMatrix& y) {
      return trace_solve(Eigen::PartialPivLU<CMatrix>(x + dq), y);
    };
    Complex l{}, r{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double s = rule.nodes[i];
      const double w = rule.weights[i];
      l += w * tr(s * B + M, B);
      r += w * (tr(B + s * M, M) - tr(s * M, M) + tr(s * B, B));
    }
    lhs[k] = l;
    rhs[k] = r;
  });
  const auto le = median_of_means(lhs, opts.blocks);
  const auto re = median_of_means(rhs, opts.blocks);
  out.lhs = le.value;
  out.rhs = re.value;
  out.lhs_stderr = le.stderr_value;
  out.rhs_stderr = re.stderr_value;
  return out;
}

void ContourSegment::validate() const {
  if (!(length() > 0.0)) throw PreconditionError("contour segment has zero length");
}

ContourResult contour_trace_pair(const TorusSymbol& f, int N, const ContourSegment& gamma,
                                 Complex z0, double alpha, double delta,
                                 const ContourOptions& opts) {
  gamma.validate();
  if (!(alpha > 0.0) || !(delta > 0.0)) throw PreconditionError("alpha and delta must be > 0");
  // 0 in gamma - z0: z0 lies on the segment.
  const Complex dir = gamma.z_plus - gamma.z_minus;
  const double t = std::clamp(((z0 - gamma.z_minus) * std::conj(dir)).real() / std::norm(dir),
                              0.0, 1.0);
  const double miss = std::abs(gamma.z_minus + t * dir - z0);
  if (miss > 1e-12 * (1.0 + gamma.length())) {
    throw PreconditionError("contour: recentring point z0 is not on the segment");
  }
  if (!(gamma.length() < alpha / 4.0)) {
    throw PreconditionError("contour: |gamma| must be < alpha / 4");
  }
  if (!(delta <= alpha / 100.0)) {
    throw PreconditionError("contour: delta must be <= alpha / 100");
  }
  if (opts.samples < 2) throw PreconditionError("contour: samples must be >= 2");

  CMatrix a = quantize(f, N, opts.threads).matrix;
  a.diagonal().array() -= z0;
  const CMatrix lifted = regularized_operator(a, alpha);
  const auto rule = gauss_legendre(8, 0.0, 1.0);
  const auto d = a.rows();

  std::vector<Complex> nodes(rule.nodes.size());
  std::vector<Complex> weights(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    nodes[i] = gamma.z_minus + rule.nodes[i] * dir - z0;
    weights[i] = rule.weights[i] * dir;
  }

  ContourResult out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    CMatrix x = lifted;
    x.diagonal().array() -= nodes[i];
    out.regularized_integral += weights[i] * Eigen::PartialPivLU<CMatrix>(x).inverse().trace();
  }

  std::vector<Complex> samples(static_cast<std::size_t>(opts.samples));
  parallel_for(samples.size(), opts.threads, [&](std::size_t k) {
    const CMatrix base = a + delta * sample_ginibre(static_cast<int>(d), derive_seed(opts.seed, k));
    Complex sum{};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      CMatrix x = base;
      x.diagonal().array() -= nodes[i];
      sum += weights[i] * Eigen::PartialPivLU<CMatrix>(x).inverse().trace();
    }
    samples[k] = sum;
  });
  out.random_integral = median_of_means(samples, opts.blocks);
  out.gate_bound = std::max(0.05 * std::abs(out.regularized_integral),
                            10.0 * out.random_integral.stderr_value);
  out.gate_passed =
      std::abs(out.random_integral.value - out.regularized_integral) <= out.gate_bound;
  return out;
}

}  // namespace tw
