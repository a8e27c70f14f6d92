#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tw {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when an operation's documented precondition does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a dense solver fails to converge or produces non-finite output.
/// Carries the seed of the random draw involved, when there is one.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, std::uint64_t seed = 0, bool has_seed = false)
      : std::runtime_error(what), seed_(seed), has_seed_(has_seed) {}

  std::uint64_t seed() const { return seed_; }
  bool has_seed() const { return has_seed_; }

 private:
  std::uint64_t seed_;
  bool has_seed_;
};

/// Integer power for small exponents (dimensions, N^n).
constexpr std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace tw
