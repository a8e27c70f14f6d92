#include <doctest.h>

#include <cmath>

#include "../support/test_support.hpp"
#include "torusweyl/linops.hpp"
#include "torusweyl/quantize.hpp"
#include "torusweyl/weyl.hpp"

using namespace tw;

TEST_CASE("regions are open") {
  const auto d = Region::disk(Complex(1, 0), 0.5);
  CHECK(d.contains(Complex(1.2, 0.1)));
  CHECK_FALSE(d.contains(Complex(1.5, 0.0)));
  const auto s = Region::strip(0.0, 0.3);
  CHECK(s.contains(Complex(0.29, 17.0)));
  CHECK_FALSE(s.contains(Complex(-0.3, 0.0)));
  const auto h = Region::halfplane(0.0);
  CHECK_FALSE(h.contains(0.0));
  CHECK(h.contains(1e-300));
  CHECK_THROWS_AS(Region::disk(0.0, 0.0), PreconditionError);
  CHECK_THROWS_AS(Region::strip(0.0, -1.0), PreconditionError);
  CHECK(RegionFamily{RegionFamily::Kind::strip, 0.0}.at(0.5).contains(Complex(0.4, 3.0)));
}

TEST_CASE("count in region") {
  CVector e(2);
  e << 0.0, 2.0;
  CHECK(count_in_region(e, Region::disk(0.0, 1.0)) == 1);
  CHECK(count_in_region(CVector(), Region::disk(0.0, 1.0)) == 0);
  CVector b(1);
  b << 1.0;
  CHECK(count_in_region(b, Region::disk(0.0, 1.0)) == 0);
}

TEST_CASE("symbol volumes of the scottish flag") {
  const auto f = scottish_flag();
  CHECK(symbol_volume(f, Region::disk(0.0, 10.0), 256) == 1.0);
  CHECK(std::abs(symbol_volume(f, Region::halfplane(0.0), 2048) - 0.5) <= 2.0 / 2048);
  CHECK_THROWS_AS(symbol_volume(f, Region::halfplane(0.0), 32), PreconditionError);

  const double coarse = symbol_volume(f, Region::disk(0.0, 0.5), kDefaultVolumeGrid);
  const double fine = symbol_volume(f, Region::disk(0.0, 0.5), kOracleVolumeGrid);
  CHECK(std::abs(coarse - fine) <= 1e-3);
  CHECK(fine == doctest::Approx(0.08515477180480957).epsilon(1e-12));
}

TEST_CASE("volumes are additive on a shared grid") {
  const auto f = scottish_flag();
  const std::vector<Region> regions{Region::strip(0.0, 0.3), Region::halfplane(0.3),
                                    Region::halfplane(-0.3)};
  const auto v = symbol_volumes(f, regions, 512);
  CHECK(v[0] + v[1] == v[2]);
  for (std::size_t i = 0; i < regions.size(); ++i)
    CHECK(v[i] == symbol_volume(f, regions[i], 512));
}

TEST_CASE("volumes in two degrees of freedom") {
  // f = cos(2 pi x1) + i cos(2 pi xi2): same distribution as the scottish flag.
  TorusSymbol::CoefficientMap c{{{1, 0, 0, 0}, 0.5},
                                {{-1, 0, 0, 0}, 0.5},
                                {{0, 0, 0, 1}, Complex(0, 0.5)},
                                {{0, 0, 0, -1}, Complex(0, 0.5)}};
  const auto g = TorusSymbol::from_coefficients(2, c);
  const auto r = Region::disk(0.0, 0.5);
  CHECK(symbol_volume(g, r, 64) == symbol_volume(scottish_flag(), r, 64));
}

TEST_CASE("sublevel volumes") {
  const auto f = scottish_flag();
  CHECK(sublevel_volume(f, Complex(0.3, 0.1), 4.0, 128) == 1.0);
  std::vector<double> ts;
  for (int i = 1; i <= 10; ++i) ts.push_back(0.1 * i);
  const auto v = sublevel_volumes(f, 0.0, ts, 256);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) CHECK(v[i] <= v[i + 1]);
  CHECK(v[3] == sublevel_volume(f, 0.0, ts[3], 256));
  CHECK(sublevel_volume(f, 0.0, 0.1, kOracleVolumeGrid) ==
        doctest::Approx(0.0031909942626953125).epsilon(1e-12));
  CHECK_THROWS_AS(sublevel_volume(f, 0.0, 0.0, 128), PreconditionError);
}

TEST_CASE("kappa fits at regular, edge and corner values") {
  const auto f = scottish_flag();
  const auto k0 = kappa_fit(f, 0.0, 1e-2, 1e-1, 12, kDefaultVolumeGrid);
  REQUIRE(k0.has_fit);
  CHECK(k0.kappa_hat >= 1.8);
  CHECK(k0.kappa_hat <= 2.2);
  CHECK(k0.t_grid.size() == 12);
  for (std::size_t i = 0; i + 1 < k0.volumes.size(); ++i) CHECK(k0.volumes[i] <= k0.volumes[i + 1]);

  const auto k1 = kappa_fit(f, 1.0, 1e-2, 1e-1, 12, kDefaultVolumeGrid);
  CHECK(k1.kappa_hat >= 1.35);
  CHECK(k1.kappa_hat <= 1.65);
  const auto kc = kappa_fit(f, Complex(1, 1), 1e-2, 1e-1, 12, kDefaultVolumeGrid);
  CHECK(kc.kappa_hat >= 0.85);
  CHECK(kc.kappa_hat <= 1.15);

  const auto far = kappa_fit(f, Complex(10, 0), 1e-2, 1e-1, 6, 128);
  CHECK_FALSE(far.has_fit);
  CHECK_THROWS_AS(kappa_fit(f, 0.0, 1e-1, 1e-2, 12, 128), PreconditionError);
  CHECK_THROWS_AS(kappa_fit(f, 0.0, 1e-2, 1e-1, 4, 128), PreconditionError);
}

TEST_CASE("expected counts for a constant symbol") {
  const auto f = TorusSymbol::constant(1, 0.5);
  const auto spec = PerturbationSpec::absolute(1e-4, 3, 4);
  const auto in = expected_count(f, 50, Region::disk(0.5, 0.1), spec, 1, 64);
  CHECK(in.mean_count == 50.0);
  CHECK(in.stderr_count == 0.0);
  CHECK(in.weyl_prediction == 50.0);
  CHECK(in.relative_gap == 0.0);
  const auto out = expected_count(f, 50, Region::disk(10.0, 0.1), spec, 1, 64);
  CHECK(out.mean_count == 0.0);
  CHECK_THROWS_AS(expected_count(f, 10, Region::disk(0.5, 0.1),
                                 PerturbationSpec::absolute(1e-4, 3, 1)),
                  PreconditionError);
}

TEST_CASE("perturbed eigenvalues of a constant stay within the perturbation norm") {
  const auto spectra = perturbed_spectra(TorusSymbol::constant(1, 0.5), 50,
                                         PerturbationSpec::absolute(1e-4, 8, 2));
  for (const auto& s : spectra) CHECK((s.array() - 0.5).abs().maxCoeff() <= 1e-3);
}

TEST_CASE("counting sweeps over nested disks") {
  const auto f = scottish_flag();
  const int N = 40;
  const auto spec = PerturbationSpec::absolute(1e-4, 17, 6);
  const std::vector<double> radii{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 2.0};
  const RegionFamily disks{RegionFamily::Kind::disk, 0.0};
  const auto rows = counting_sweep(f, N, disks, radii, spec, 1, 256);
  REQUIRE(rows.size() == radii.size());
  CHECK(rows.front().mean_count == 0.0);
  CHECK(rows.front().weyl_prediction == 0.0);
  CHECK(rows.back().mean_count == N);
  CHECK(rows.back().weyl_prediction == N);
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    CHECK(rows[i].mean_count <= rows[i + 1].mean_count);
    CHECK(rows[i].weyl_prediction <= rows[i + 1].weyl_prediction);
  }
  for (const auto& r : rows) {
    CHECK(r.mean_count >= 0.0);
    CHECK(r.mean_count <= N);
    CHECK(r.stderr_count >= 0.0);
  }
  // threads do not change statistics
  const auto rows4 = counting_sweep(f, N, disks, radii, spec, 4, 256);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].mean_count == rows4[i].mean_count);
    CHECK(rows[i].stderr_count == rows4[i].stderr_count);
    CHECK(rows[i].weyl_prediction == rows4[i].weyl_prediction);
  }
  const std::vector<double> bad{-0.1};
  CHECK_THROWS_AS(counting_sweep(f, N, disks, bad, spec, 1, 256), PreconditionError);
}

TEST_CASE("half-sample means agree within four combined standard errors") {
  const auto f = scottish_flag();
  const int N = 40;
  const auto spectra = perturbed_spectra(f, N, PerturbationSpec::absolute(1e-4, 23, 20));
  const std::vector<CVector> first(spectra.begin(), spectra.begin() + 10);
  const std::vector<CVector> second(spectra.begin() + 10, spectra.end());
  const auto region = Region::strip(0.0, 0.5);
  const auto a = weyl_report(first, region, 0.0, N, 1);
  const auto b = weyl_report(second, region, 0.0, N, 1);
  CHECK(std::abs(a.mean_count - b.mean_count) <= 4.0 * std::hypot(a.stderr_count, b.stderr_count) + 1e-12);
}

TEST_CASE("empirical measures") {
  const auto c = TorusSymbol::constant(1, Complex(0.2, -0.1));
  const auto cmp = compare_with_pushforward(
      perturbed_spectra(c, 20, PerturbationSpec::absolute(1e-4, 1, 2)), c, 8, 64);
  double total = 0.0;
  for (double v : cmp.pushforward_histogram) total += v;
  CHECK(std::abs(total - 1.0) <= 1e-12);
  CHECK(cmp.distance <= 2.0 / (8 * 8));

  const auto f = scottish_flag();
  const auto sf = compare_with_pushforward(
      perturbed_spectra(f, 20, PerturbationSpec::absolute(1e-4, 1, 2)), f, 16, 256);
  total = 0.0;
  for (double v : sf.pushforward_histogram) total += v;
  CHECK(std::abs(total - 1.0) <= 1e-12);
  CHECK(sf.distance >= 0.0);
  CHECK(sf.distance <= 1.0);
  CHECK_THROWS_AS(compare_with_pushforward({}, f, 4, 256), PreconditionError);
}

TEST_CASE("empirical measure distance shrinks with N") {
  const auto f = scottish_flag();
  const auto spec = PerturbationSpec::absolute(1e-4, 2024, 10);
  const double d50 = empirical_measure_distance(f, 50, spec, 24, 1024);
  const double d200 = empirical_measure_distance(f, 200, spec, 24, 1024);
  CHECK(d200 < d50);
}

TEST_CASE("hausdorff distance") {
  CVector a(2), b(1);
  a << 0.0, Complex(3, 4);
  b << 0.0;
  CHECK(hausdorff_distance(a, b) == 5.0);
  CHECK(hausdorff_distance(b, a) == 5.0);
  CHECK(hausdorff_distance(a, a) == 0.0);
  CHECK_THROWS_AS(hausdorff_distance(a, CVector()), PreconditionError);
}

TEST_CASE("unperturbed and perturbed spectra differ grossly") {
  const auto f = scottish_flag();
  const int N = 100;
  const CVector clean = eigenvalues(quantize(f, N).matrix);
  const auto noisy = perturbed_spectra(f, N, PerturbationSpec::absolute(1e-4, 5, 1));
  CHECK(hausdorff_distance(clean, noisy[0]) >= 0.1);
}
