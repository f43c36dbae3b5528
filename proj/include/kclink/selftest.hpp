#pragma once

#include <string>
#include <vector>

namespace kclink {

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Re-evaluates the bundled reference datasets and compares against their
/// published evaluations (gauge blocks before/after inflating INMETRO1, and
/// the simulated example).
std::vector<SelftestCheck> run_selftest();

}  // namespace kclink
