#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "torusweyl/common.hpp"
#include "torusweyl/randmat.hpp"
#include "torusweyl/symbol.hpp"

namespace tw {

/// Open region of the complex plane used for eigenvalue counting.
/// Membership is strict: points on the boundary are not inside.
class Region {
 public:
  struct Disk {
    Complex center;
    double radius;
  };
  /// |Re z - center| < half_width
  struct Strip {
    double center;
    double half_width;
  };
  /// Re z > threshold
  struct HalfPlane {
    double threshold;
  };

  static Region disk(Complex center, double radius);
  static Region strip(double center, double half_width);
  static Region halfplane(double threshold);

  bool contains(Complex z) const;
  std::string describe() const;
  const std::variant<Disk, Strip, HalfPlane>& shape() const { return shape_; }

 private:
  explicit Region(std::variant<Disk, Strip, HalfPlane> s) : shape_(s) {}
  std::variant<Disk, Strip, HalfPlane> shape_;
};

/// One-parameter family of regions indexed by a size r (used for sweeps).
struct RegionFamily {
  enum class Kind { disk, strip };
  Kind kind = Kind::disk;
  Complex center{};

  Region at(double r) const;
  std::string name() const { return kind == Kind::disk ? "disk" : "strip"; }
};

/// Default grid sizes for volume quadrature.
inline constexpr int kDefaultVolumeGrid = 2048;
inline constexpr int kOracleVolumeGrid = 8192;

/// Fraction of the M^{2n} midpoint-grid points w with f(w) in the region.
double symbol_volume(const TorusSymbol& f, const Region& region, int M, int threads = 1);
/// Several regions in one pass over the grid.
std::vector<double> symbol_volumes(const TorusSymbol& f, std::span<const Region> regions, int M,
                                   int threads = 1);

/// Fraction of grid points with |f(w) - z| <= t.
double sublevel_volume(const TorusSymbol& f, Complex z, double t, int M, int threads = 1);
/// Several thresholds in one pass over the grid.
std::vector<double> sublevel_volumes(const TorusSymbol& f, Complex z, std::span<const double> ts,
                                     int M, int threads = 1);

struct KappaFit {
  Complex z;
  std::vector<double> t_grid;
  std::vector<double> volumes;
  bool has_fit = false;
  double kappa_hat = 0.0;
  /// Root-mean-square residual of the log-log regression.
  double fit_residual = 0.0;
};

/// Least-squares slope of log vol{|f - z| <= t} against log t on a geometric t grid.
/// When fewer than two volumes are positive, has_fit is false.
KappaFit kappa_fit(const TorusSymbol& f, Complex z, double t_min, double t_max, int points,
                   int M, int threads = 1);

int count_in_region(const CVector& eigs, const Region& region);

struct WeylReport {
  int N = 0;
  std::string region;
  int draws = 0;
  double mean_count = 0.0;
  double stderr_count = 0.0;
  /// N^n vol(f^{-1}(region))
  double weyl_prediction = 0.0;
  double relative_gap = 0.0;
};

/// Spectrum of f_N + E_k for each draw k of the perturbation spec.
/// A solver failure raises NumericalError carrying the draw seed.
std::vector<CVector> perturbed_spectra(const TorusSymbol& f, int N, const PerturbationSpec& spec,
                                       int threads = 1);

/// Mean and standard error of the region count over precomputed spectra.
WeylReport weyl_report(const std::vector<CVector>& spectra, const Region& region, double volume,
                       int N, int n);

WeylReport expected_count(const TorusSymbol& f, int N, const Region& region,
                          const PerturbationSpec& spec, int threads = 1,
                          int M = kDefaultVolumeGrid);

/// expected_count for every r, with eigenvalues computed once per draw.
std::vector<WeylReport> counting_sweep(const TorusSymbol& f, int N, const RegionFamily& family,
                                       std::span<const double> radii,
                                       const PerturbationSpec& spec, int threads = 1,
                                       int M = kDefaultVolumeGrid);
std::vector<WeylReport> counting_sweep(const std::vector<CVector>& spectra, const TorusSymbol& f,
                                       int N, const RegionFamily& family,
                                       std::span<const double> radii, int M, int threads = 1);

/// Histograms on a bins x bins box covering the symbol's range; cells outside
/// the box are pooled into one overflow cell.
struct MeasureComparison {
  double distance = 0.0;  // total variation
  double box_re_min = 0.0, box_re_max = 0.0, box_im_min = 0.0, box_im_max = 0.0;
  std::vector<double> eigen_histogram;
  std::vector<double> pushforward_histogram;
};

MeasureComparison compare_with_pushforward(const std::vector<CVector>& spectra,
                                           const TorusSymbol& f, int bins, int M,
                                           int threads = 1);

/// Total-variation distance between the draw-averaged eigenvalue histogram
/// and the pushforward of torus Lebesgue measure under f.
double empirical_measure_distance(const TorusSymbol& f, int N, const PerturbationSpec& spec,
                                  int bins, int M = kDefaultVolumeGrid, int threads = 1);

/// Hausdorff distance between two finite point sets in the plane.
double hausdorff_distance(const CVector& a, const CVector& b);

}  // namespace tw
