#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kclink/core_model.hpp"

namespace kclink {

enum class LabKind { OnlyA, Linking, OnlyB };

struct LabLayout {
  int only_a = 8;
  int linking = 4;
  int only_b = 5;
};

/// Ground truth for a simulated pair of comparisons. Each lab takes n
/// observations from a Gaussian (bivariate for linking labs) and reports the
/// sample mean with the standard deviation of the mean.
struct SyntheticScenario {
  double y_a_true = 110.0;
  double sigma_a = 20.0;
  double y_b_true = 120.0;
  double sigma_b = 50.0;
  double rho = 0.5;
  int n = 50;
  LabLayout layout;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument on sigma <= 0, |rho| >= 1, n < 2, negative
  /// counts, or a layout that leaves either standard unmeasured.
  void validate() const;
};

class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raw draws of one lab. `b` is empty for OnlyA, `a` empty for OnlyB.
struct Observations {
  std::vector<double> a;
  std::vector<double> b;
};

Observations draw_observations(const SyntheticScenario& scenario, LabKind kind,
                               std::uint64_t stream, std::uint64_t substream = 0);

struct SampledLab {
  LabResult result;
  int skipped_substreams = 0;  // degenerate samples that were redrawn
};

inline constexpr int kMaxSubstreams = 8;

/// Summarises one lab's draws: x = sample mean, u = s / sqrt(n), and for
/// linking labs cov = s_ab / n (all with the n - 1 divisor). A degenerate
/// sample moves on to the next substream; after kMaxSubstreams attempts a
/// SamplingError is thrown.
SampledLab sample_lab(const SyntheticScenario& scenario, LabKind kind, std::uint64_t stream,
                      std::string label);

/// Stream id of the i-th lab of a kind. Kinds use disjoint ranges, so changing
/// the count of one kind leaves every other lab's draws untouched.
std::uint64_t lab_stream(LabKind kind, std::uint64_t index);

/// Labs are labelled LAB-01, LAB-02, ... in the order A-only, linking, B-only.
ComparisonDataset generate_scenario(const SyntheticScenario& scenario);

}  // namespace kclink
