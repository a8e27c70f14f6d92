#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <variant>

#include "torusweyl/common.hpp"

namespace tw {

/// Per-draw seed: splitmix64 finalizer applied to master ^ (index * golden ratio).
///
///   z = master + 0x9E3779B97F4A7C15 * (index + 1)
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   seed = z ^ (z >> 31)
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Deterministic standard-normal source.
///
/// Uses std::mt19937_64 (whose output sequence is fixed by the standard) with
/// an explicit 53-bit uniform conversion and the Box-Muller transform, so the
/// stream is identical across standard libraries for a given seed.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on (0, 1).
  double uniform();
  /// Real N(0, 1).
  double normal();
  /// Complex normal with E|z|^2 = 1: real and imaginary parts N(0, 1/2).
  Complex complex_normal();

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// d x d matrix with i.i.d. complex standard normal entries (density exp(-|z|^2)/pi),
/// filled column by column.
CMatrix sample_ginibre(int d, std::uint64_t seed);

struct PowerScaling {
  double p;
};
struct AbsoluteScaling {
  double eta;
};

/// How the perturbation delta * Q is scaled, plus the seeding for all draws.
struct PerturbationSpec {
  std::variant<PowerScaling, AbsoluteScaling> mode{AbsoluteScaling{1e-4}};
  std::uint64_t master_seed = 0;
  int draws = 1;

  static PerturbationSpec power(double p, std::uint64_t seed, int draws);
  static PerturbationSpec absolute(double eta, std::uint64_t seed, int draws);

  bool is_absolute() const { return std::holds_alternative<AbsoluteScaling>(mode); }
  std::string mode_name() const { return is_absolute() ? "absolute" : "power"; }
  /// eta in absolute mode, p in power mode.
  double parameter() const;
  void validate() const;
  std::uint64_t draw_seed(int draw_index) const { return derive_seed(master_seed, draw_index); }
};

/// E = N^{-p} Q (power mode) or E = (eta / ||Q||) Q (absolute mode), Q Ginibre of size N^n.
CMatrix perturbation(const PerturbationSpec& spec, int draw_index, int N, int n);

}  // namespace tw
