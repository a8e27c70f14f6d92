#include "torusweyl/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "torusweyl/linops.hpp"
#include "torusweyl/parallel.hpp"
#include "torusweyl/quantize.hpp"

namespace tw {
namespace {

// Calls visit(slab, value) for every grid point, slabs in parallel. Per-slab
// accumulators keep the result independent of the schedule.
template <class Visit>
void scan_grid(const SymbolGrid& grid, int threads, Visit&& visit) {
  const std::size_t slabs = static_cast<std::size_t>(grid.points_per_axis());
  const std::size_t per_slab = grid.slab_size();
  parallel_for(slabs, threads, [&](std::size_t s) {
    const std::size_t begin = s * per_slab;
    for (std::size_t i = begin; i < begin + per_slab; ++i) visit(s, grid.value(i));
  });
}

void require_grid(int M, int minimum) {
  if (M < minimum) {
    throw PreconditionError("volume grid M must be >= " + std::to_string(minimum));
  }
}

std::string format_number(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace

Region Region::disk(Complex center, double radius) {
  if (!(radius > 0.0)) throw PreconditionError("disk radius must be > 0");
  return Region(Disk{center, radius});
}

Region Region::strip(double center, double half_width) {
  if (!(half_width > 0.0)) throw PreconditionError("strip half-width must be > 0");
  return Region(Strip{center, half_width});
}

Region Region::halfplane(double threshold) { return Region(HalfPlane{threshold}); }

bool Region::contains(Complex z) const {
  if (const auto* d = std::get_if<Disk>(&shape_)) return std::abs(z - d->center) < d->radius;
  if (const auto* s = std::get_if<Strip>(&shape_)) {
    return std::abs(z.real() - s->center) < s->half_width;
  }
  return z.real() > std::get<HalfPlane>(shape_).threshold;
}

std::string Region::describe() const {
  if (const auto* d = std::get_if<Disk>(&shape_)) {
    return "disk(" + format_number(d->center.real()) + "," + format_number(d->center.imag()) +
           ";" + format_number(d->radius) + ")";
  }
  if (const auto* s = std::get_if<Strip>(&shape_)) {
    return "strip(" + format_number(s->center) + ";" + format_number(s->half_width) + ")";
  }
  return "halfplane(" + format_number(std::get<HalfPlane>(shape_).threshold) + ")";
}

Region RegionFamily::at(double r) const {
  return kind == Kind::disk ? Region::disk(center, r) : Region::strip(center.real(), r);
}

std::vector<double> symbol_volumes(const TorusSymbol& f, std::span<const Region> regions, int M,
                                   int threads) {
  require_grid(M, 1);
  const SymbolGrid grid(f, M);
  const std::size_t slabs = static_cast<std::size_t>(M);
  const std::size_t nr = regions.size();
  std::vector<std::uint64_t> hits(slabs * nr, 0);
  scan_grid(grid, threads, [&](std::size_t s, Complex v) {
    for (std::size_t k = 0; k < nr; ++k) {
      if (regions[k].contains(v)) ++hits[s * nr + k];
    }
  });
  std::vector<double> out(nr);
  for (std::size_t k = 0; k < nr; ++k) {
    std::uint64_t total = 0;
    for (std::size_t s = 0; s < slabs; ++s) total += hits[s * nr + k];
    out[k] = static_cast<double>(total) / static_cast<double>(grid.size());
  }
  return out;
}

double symbol_volume(const TorusSymbol& f, const Region& region, int M, int threads) {
  require_grid(M, 64);
  return symbol_volumes(f, std::span<const Region>(&region, 1), M, threads)[0];
}

std::vector<double> sublevel_volumes(const TorusSymbol& f, Complex z, std::span<const double> ts,
                                     int M, int threads) {
  require_grid(M, 1);
  for (double t : ts) {
    if (!(t > 0.0)) throw PreconditionError("sublevel threshold t must be > 0");
  }
  // Count by bucket: a point at distance r lands in the first sorted t >= r.
  std::vector<double> sorted(ts.begin(), ts.end());
  std::sort(sorted.begin(), sorted.end());
  const SymbolGrid grid(f, M);
  const std::size_t slabs = static_cast<std::size_t>(M);
  const std::size_t nt = sorted.size();
  std::vector<std::uint64_t> bucket(slabs * (nt + 1), 0);
  scan_grid(grid, threads, [&](std::size_t s, Complex v) {
    const double r = std::abs(v - z);
    const auto pos = std::lower_bound(sorted.begin(), sorted.end(), r) - sorted.begin();
    ++bucket[s * (nt + 1) + static_cast<std::size_t>(pos)];
  });
  std::vector<double> cumulative(nt);
  std::uint64_t running = 0;
  for (std::size_t k = 0; k < nt; ++k) {
    for (std::size_t s = 0; s < slabs; ++s) running += bucket[s * (nt + 1) + k];
    cumulative[k] = static_cast<double>(running) / static_cast<double>(grid.size());
  }
  std::vector<double> out(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto k = std::lower_bound(sorted.begin(), sorted.end(), ts[i]) - sorted.begin();
    out[i] = cumulative[static_cast<std::size_t>(k)];
  }
  return out;
}

double sublevel_volume(const TorusSymbol& f, Complex z, double t, int M, int threads) {
  return sublevel_volumes(f, z, std::span<const double>(&t, 1), M, threads)[0];
}

KappaFit kappa_fit(const TorusSymbol& f, Complex z, double t_min, double t_max, int points,
                   int M, int threads) {
  if (!(t_min > 0.0) || !(t_max > t_min)) throw PreconditionError("need 0 < t_min < t_max");
  if (points < 5) throw PreconditionError("kappa fit needs at least 5 points");
  KappaFit fit;
  fit.z = z;
  fit.t_grid.resize(points);
  const double ratio = std::log(t_max / t_min) / (points - 1);
  for (int i = 0; i < points; ++i) fit.t_grid[i] = t_min * std::exp(ratio * i);
  fit.t_grid.back() = t_max;
  fit.volumes = sublevel_volumes(f, z, fit.t_grid, M, threads);

  std::vector<double> lx, ly;
  for (int i = 0; i < points; ++i) {
    if (fit.volumes[i] > 0.0) {
      lx.push_back(std::log(fit.t_grid[i]));
      ly.push_back(std::log(fit.volumes[i]));
    }
  }
  if (lx.size() < 2) return fit;
  const double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  fit.kappa_hat = sxy / sxx;
  const double intercept = my - fit.kappa_hat * mx;
  double ss = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double e = ly[i] - (intercept + fit.kappa_hat * lx[i]);
    ss += e * e;
  }
  fit.fit_residual = std::sqrt(ss / n);
  fit.has_fit = true;
  return fit;
}

int count_in_region(const CVector& eigs, const Region& region) {
  int count = 0;
  for (Eigen::Index i = 0; i < eigs.size(); ++i) count += region.contains(eigs(i)) ? 1 : 0;
  return count;
}

std::vector<CVector> perturbed_spectra(const TorusSymbol& f, int N, const PerturbationSpec& spec,
                                       int threads) {
  spec.validate();
  const CMatrix fn = quantize(f, N, threads).matrix;
  std::vector<CVector> spectra(static_cast<std::size_t>(spec.draws));
  parallel_for(spectra.size(), threads, [&](std::size_t k) {
    const int draw = static_cast<int>(k);
    try {
      spectra[k] = eigenvalues(fn + perturbation(spec, draw, N, f.dimension()));
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " (draw " + std::to_string(draw) + ")",
                           spec.draw_seed(draw), true);
    }
  });
  return spectra;
}

WeylReport weyl_report(const std::vector<CVector>& spectra, const Region& region, double volume,
                       int N, int n) {
  WeylReport rep;
  rep.N = N;
  rep.region = region.describe();
  rep.draws = static_cast<int>(spectra.size());
  if (spectra.empty()) throw PreconditionError("weyl_report needs at least one draw");
  std::vector<double> counts;
  counts.reserve(spectra.size());
  for (const auto& s : spectra) counts.push_back(count_in_region(s, region));
  double mean = 0;
  for (double c : counts) mean += c;
  mean /= static_cast<double>(counts.size());
  double var = 0;
  for (double c : counts) var += (c - mean) * (c - mean);
  rep.mean_count = mean;
  rep.stderr_count =
      counts.size() > 1 ? std::sqrt(var / static_cast<double>(counts.size() - 1) /
                                    static_cast<double>(counts.size()))
                        : 0.0;
  rep.weyl_prediction = static_cast<double>(ipow(static_cast<std::size_t>(N), n)) * volume;
  if (rep.weyl_prediction > 0.0) {
    rep.relative_gap = std::abs(mean - rep.weyl_prediction) / rep.weyl_prediction;
  } else {
    rep.relative_gap = mean == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return rep;
}

WeylReport expected_count(const TorusSymbol& f, int N, const Region& region,
                          const PerturbationSpec& spec, int threads, int M) {
  if (spec.draws < 2) throw PreconditionError("expected_count needs draws >= 2");
  const auto spectra = perturbed_spectra(f, N, spec, threads);
  return weyl_report(spectra, region, symbol_volume(f, region, M, threads), N, f.dimension());
}

std::vector<WeylReport> counting_sweep(const std::vector<CVector>& spectra, const TorusSymbol& f,
                                       int N, const RegionFamily& family,
                                       std::span<const double> radii, int M, int threads) {
  std::vector<Region> regions;
  std::vector<std::size_t> valid;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] > 0.0) {
      regions.push_back(family.at(radii[i]));
      valid.push_back(i);
    } else if (radii[i] < 0.0) {
      throw PreconditionError("sweep radii must be >= 0");
    }
  }
  const auto volumes = symbol_volumes(f, regions, M, threads);
  std::vector<WeylReport> out;
  out.reserve(radii.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (next < valid.size() && valid[next] == i) {
      out.push_back(weyl_report(spectra, regions[next], volumes[next], N, f.dimension()));
      ++next;
    } else {
      // r = 0: the empty region.
      WeylReport empty;
      empty.N = N;
      empty.region = family.name() + "(r=0)";
      empty.draws = static_cast<int>(spectra.size());
      out.push_back(empty);
    }
  }
  return out;
}

std::vector<WeylReport> counting_sweep(const TorusSymbol& f, int N, const RegionFamily& family,
                                       std::span<const double> radii,
                                       const PerturbationSpec& spec, int threads, int M) {
  if (spec.draws < 2) throw PreconditionError("counting_sweep needs draws >= 2");
  require_grid(M, 64);
  const auto spectra = perturbed_spectra(f, N, spec, threads);
  return counting_sweep(spectra, f, N, family, radii, M, threads);
}

MeasureComparison compare_with_pushforward(const std::vector<CVector>& spectra,
                                           const TorusSymbol& f, int bins, int M, int threads) {
  if (bins < 8) throw PreconditionError("bins must be >= 8");
  require_grid(M, 64);
  const SymbolGrid grid(f, M);
  const std::size_t slabs = static_cast<std::size_t>(M);

  // Pass 1: bounding box of the range.
  struct Box {
    double re_lo = std::numeric_limits<double>::infinity();
    double re_hi = -std::numeric_limits<double>::infinity();
    double im_lo = std::numeric_limits<double>::infinity();
    double im_hi = -std::numeric_limits<double>::infinity();
  };
  std::vector<Box> boxes(slabs);
  scan_grid(grid, threads, [&](std::size_t s, Complex v) {
    auto& b = boxes[s];
    b.re_lo = std::min(b.re_lo, v.real());
    b.re_hi = std::max(b.re_hi, v.real());
    b.im_lo = std::min(b.im_lo, v.imag());
    b.im_hi = std::max(b.im_hi, v.imag());
  });
  Box box;
  for (const auto& b : boxes) {
    box.re_lo = std::min(box.re_lo, b.re_lo);
    box.re_hi = std::max(box.re_hi, b.re_hi);
    box.im_lo = std::min(box.im_lo, b.im_lo);
    box.im_hi = std::max(box.im_hi, b.im_hi);
  }
  // 2% margin; a degenerate axis gets a unit-width box with the value at a cell centre.
  auto pad = [bins](double& lo, double& hi) {
    const double extent = hi - lo;
    if (extent > 0.0) {
      lo -= 0.02 * extent;
      hi += 0.02 * extent;
    } else {
      lo -= 0.5 + 0.5 / bins;
      hi += 0.5 - 0.5 / bins;
    }
  };
  pad(box.re_lo, box.re_hi);
  pad(box.im_lo, box.im_hi);

  const std::size_t cells = static_cast<std::size_t>(bins) * bins;
  auto cell_of = [&](Complex v) -> std::size_t {
    const double u = (v.real() - box.re_lo) / (box.re_hi - box.re_lo);
    const double w = (v.imag() - box.im_lo) / (box.im_hi - box.im_lo);
    if (!(u >= 0.0 && u < 1.0 && w >= 0.0 && w < 1.0)) return cells;  // overflow
    const auto iu = std::min<std::size_t>(static_cast<std::size_t>(u * bins), bins - 1);
    const auto iw = std::min<std::size_t>(static_cast<std::size_t>(w * bins), bins - 1);
    return iu * bins + iw;
  };

  // Pass 2: pushforward histogram.
  std::vector<std::uint64_t> counts(slabs * (cells + 1), 0);
  scan_grid(grid, threads, [&](std::size_t s, Complex v) { ++counts[s * (cells + 1) + cell_of(v)]; });
  MeasureComparison out;
  out.box_re_min = box.re_lo;
  out.box_re_max = box.re_hi;
  out.box_im_min = box.im_lo;
  out.box_im_max = box.im_hi;
  out.pushforward_histogram.assign(cells + 1, 0.0);
  for (std::size_t c = 0; c <= cells; ++c) {
    std::uint64_t total = 0;
    for (std::size_t s = 0; s < slabs; ++s) total += counts[s * (cells + 1) + c];
    out.pushforward_histogram[c] = static_cast<double>(total) / static_cast<double>(grid.size());
  }

  out.eigen_histogram.assign(cells + 1, 0.0);
  std::size_t points = 0;
  for (const auto& s : spectra) {
    for (Eigen::Index i = 0; i < s.size(); ++i) out.eigen_histogram[cell_of(s(i))] += 1.0;
    points += static_cast<std::size_t>(s.size());
  }
  if (points == 0) throw PreconditionError("no eigenvalues to compare");
  for (auto& v : out.eigen_histogram) v /= static_cast<double>(points);

  double tv = 0.0;
  for (std::size_t c = 0; c <= cells; ++c) {
    tv += std::abs(out.eigen_histogram[c] - out.pushforward_histogram[c]);
  }
  out.distance = 0.5 * tv;
  return out;
}

double empirical_measure_distance(const TorusSymbol& f, int N, const PerturbationSpec& spec,
                                  int bins, int M, int threads) {
  const auto spectra = perturbed_spectra(f, N, spec, threads);
  return compare_with_pushforward(spectra, f, bins, M, threads).distance;
}

double hausdorff_distance(const CVector& a, const CVector& b) {
  if (a.size() == 0 || b.size() == 0) throw PreconditionError("hausdorff of empty set");
  auto directed = [](const CVector& from, const CVector& to) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < from.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < to.size(); ++j) best = std::min(best, std::abs(from(i) - to(j)));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace tw
