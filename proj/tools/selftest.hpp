#pragma once

#include <string>
#include <vector>

namespace tw::cli {

struct SelfCheck {
  std::string name;
  bool passed = false;
  /// Measured residual, slope or ratio that the check thresholds.
  double value = 0.0;
};

/// Fast exact-identity and scaling checks on small instances (a few seconds).
std::vector<SelfCheck> run_selftest(int threads);

}  // namespace tw::cli
