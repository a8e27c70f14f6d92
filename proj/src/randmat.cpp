#include "torusweyl/randmat.hpp"

#include <cmath>

#include "torusweyl/linops.hpp"
#include "torusweyl/quantize.hpp"

namespace tw {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double GaussianSource::uniform() {
  // (k + 0.5) / 2^53 never hits 0 or 1.
  const std::uint64_t k = engine_() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double GaussianSource::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * kPi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

Complex GaussianSource::complex_normal() {
  static const double scale = std::sqrt(0.5);
  const double re = normal();
  const double im = normal();
  return {scale * re, scale * im};
}

CMatrix sample_ginibre(int d, std::uint64_t seed) {
  if (d < 1) throw PreconditionError("Ginibre dimension must be >= 1");
  GaussianSource source(seed);
  CMatrix q(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) q(r, c) = source.complex_normal();
  }
  return q;
}

PerturbationSpec PerturbationSpec::power(double p, std::uint64_t seed, int draws) {
  PerturbationSpec s{PowerScaling{p}, seed, draws};
  s.validate();
  return s;
}

PerturbationSpec PerturbationSpec::absolute(double eta, std::uint64_t seed, int draws) {
  PerturbationSpec s{AbsoluteScaling{eta}, seed, draws};
  s.validate();
  return s;
}

double PerturbationSpec::parameter() const {
  return std::visit([](const auto& m) -> double {
    if constexpr (std::is_same_v<std::decay_t<decltype(m)>, PowerScaling>) return m.p;
    else return m.eta;
  }, mode);
}

void PerturbationSpec::validate() const {
  if (draws < 1) throw PreconditionError("perturbation draws must be >= 1");
  if (!(parameter() > 0.0)) {
    throw PreconditionError(is_absolute() ? "eta must be > 0" : "p must be > 0");
  }
}

CMatrix perturbation(const PerturbationSpec& spec, int draw_index, int N, int n) {
  spec.validate();
  if (draw_index < 0 || draw_index >= spec.draws) {
    throw PreconditionError("draw_index out of range");
  }
  const auto d = static_cast<int>(quantum_dimension(N, n));
  CMatrix q = sample_ginibre(d, spec.draw_seed(draw_index));
  if (const auto* abs_mode = std::get_if<AbsoluteScaling>(&spec.mode)) {
    return (abs_mode->eta / op_norm(q)) * q;
  }
  const double p = std::get<PowerScaling>(spec.mode).p;
  return std::pow(static_cast<double>(N), -p) * q;
}

}  // namespace tw
