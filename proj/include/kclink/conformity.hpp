#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kclink/core_model.hpp"
#include "kclink/linking.hpp"

namespace kclink {

/// No uncertainty up to the search cap makes the data conform.
class InflationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InflationOptions {
  /// Bisection stops once (hi - lo) / hi < tolerance.
  double tolerance = 1e-4;
  /// If set, minimal_u is rounded up to this many decimals (the resolution the
  /// lab reported its uncertainty with), stepping further up if needed.
  std::optional<int> report_decimals;
  /// Log-spaced scan points used to locate the leftmost crossing.
  int scan_points = 64;
};

inline constexpr double kInflationCap = 65536.0;  // 2^16 x original

struct InflationResult {
  std::string label;
  Standard standard = Standard::A;
  double original_u = 0.0;
  /// Smallest passing uncertainty found by bisection (within tolerance).
  double threshold_u = 0.0;
  /// threshold_u rounded up to the reporting resolution, if one was given.
  double minimal_u = 0.0;
  LinkingResult relinked;
  std::vector<std::string> warnings;
};

/// Copy of the dataset with one lab's uncertainty for one standard replaced.
/// A non-zero covariance is rescaled so the lab's correlation stays fixed.
ComparisonDataset with_uncertainty(const ComparisonDataset& dataset, std::string_view label,
                                   Standard standard, double u);

/// Smallest uncertainty for (label, standard) at which q^2 <= N - 2.
/// Returns the original uncertainty unchanged when the data already conform.
InflationResult minimal_inflation(const ComparisonDataset& dataset, std::string_view label,
                                  Standard standard, const InflationOptions& options = {});

}  // namespace kclink
