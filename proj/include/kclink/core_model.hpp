#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kclink {

/// One of the two travelling standards.
enum class Standard { A, B };

std::string_view to_string(Standard standard);
std::optional<Standard> parse_standard(std::string_view text);

/// Raised when input data violate the scenario assumptions (duplicate labels,
/// non-positive uncertainties, |r| >= 1, an empty group, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One laboratory's reported result(s). A lab that measured both standards
/// may report the covariance of its two results.
struct LabResult {
  std::string label;
  std::optional<double> value_a;
  std::optional<double> u_a;
  std::optional<double> value_b;
  std::optional<double> u_b;
  std::optional<double> cov_ab;

  bool measures(Standard standard) const;
  bool is_linking() const { return value_a.has_value() && value_b.has_value(); }

  /// Value/uncertainty for a standard the lab measured; throws otherwise.
  double value(Standard standard) const;
  double uncertainty(Standard standard) const;

  /// Absent covariance counts as zero.
  double covariance() const { return cov_ab.value_or(0.0); }
};

struct CorrelationView {
  double r_ab = 0.0;
};

/// r = cov / (u_a u_b). Requires both standards to be present.
CorrelationView to_correlation(const LabResult& result);

/// Inverse of to_correlation for a given pair of uncertainties.
double to_covariance(double r_ab, double u_a, double u_b);

/// Free-form metadata carried alongside the data.
struct DatasetMetadata {
  std::string units;
  std::vector<std::string> notes;  // prepended to the dataset warnings
};

/// Validated, partitioned collection of lab results. Immutable; build it with
/// validate_dataset().
class ComparisonDataset {
 public:
  const std::vector<LabResult>& labs() const { return labs_; }

  // Indices into labs(), in input order.
  const std::vector<std::size_t>& only_a() const { return only_a_; }
  const std::vector<std::size_t>& only_b() const { return only_b_; }
  const std::vector<std::size_t>& linking() const { return linking_; }

  std::size_t count_a() const { return only_a_.size() + linking_.size(); }
  std::size_t count_b() const { return only_b_.size() + linking_.size(); }
  /// Total number of measured values; linking labs count twice.
  std::size_t total_n() const { return count_a() + count_b(); }

  bool no_linking_labs() const { return linking_.empty(); }
  /// True when there are linking labs but every covariance is zero or absent,
  /// in which case the two groups decouple into separate weighted means.
  bool uncorrelated_linking() const { return uncorrelated_linking_; }

  const std::vector<std::string>& warnings() const { return warnings_; }
  const std::string& units() const { return metadata_.units; }
  const DatasetMetadata& metadata() const { return metadata_; }

  const LabResult* find(std::string_view label) const;

 private:
  friend ComparisonDataset validate_dataset(std::vector<LabResult> raw, DatasetMetadata metadata);

  std::vector<LabResult> labs_;
  std::vector<std::size_t> only_a_;
  std::vector<std::size_t> only_b_;
  std::vector<std::size_t> linking_;
  bool uncorrelated_linking_ = false;
  std::vector<std::string> warnings_;
  DatasetMetadata metadata_;
};

ComparisonDataset validate_dataset(std::vector<LabResult> raw, DatasetMetadata metadata = {});

}  // namespace kclink
