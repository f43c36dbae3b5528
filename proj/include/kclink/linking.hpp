#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kclink/core_model.hpp"

namespace kclink {

/// Raised when the estimator's own invariants fail (a*b - c^2 <= 0, negative
/// DOE radicand). Valid datasets never trigger it.
class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The five data-only sums the closed-form estimator is built from.
///
///  a  - inverse-variance weight sum for standard A   (units^-2)
///  b  - the same for standard B                      (units^-2)
///  c  - cross weight contributed by linking labs     (units^-2)
///  s1 - weighted value sum for A                     (units^-1)
///  s2 - weighted value sum for B                     (units^-1)
struct AuxQuantities {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;

  double determinant() const { return a * b - c * c; }
};

/// Both reference values with their joint covariance. The posterior for
/// (Y_A, Y_B) is the bivariate Gaussian with this mean and covariance.
struct KcrvEstimate {
  double y_a = 0.0;
  double y_b = 0.0;
  double u_a = 0.0;
  double u_b = 0.0;
  double cov_ab = 0.0;
  double r_tilde = 0.0;

  double value(Standard standard) const { return standard == Standard::A ? y_a : y_b; }
  double uncertainty(Standard standard) const { return standard == Standard::A ? u_a : u_b; }

  using Matrix2 = std::array<std::array<double, 2>, 2>;
  Matrix2 covariance_matrix() const { return {{{u_a * u_a, cov_ab}, {cov_ab, u_b * u_b}}}; }
};

struct DegreeOfEquivalence {
  std::string label;
  Standard standard = Standard::A;
  double d = 0.0;
  double u_d = 0.0;
};

struct ConformityReport {
  double q2 = 0.0;
  int dof = 0;                  // N - 2
  std::optional<double> ratio;  // q2 / dof, only when dof > 0
  bool passed = false;
};

/// Absolute q^2 threshold applied when there are no degrees of freedom.
inline constexpr double kZeroDofTolerance = 1e-9;

struct LinkingResult {
  AuxQuantities aux;
  KcrvEstimate kcrv;
  std::vector<DegreeOfEquivalence> does;  // all A entries (input order), then all B entries
  ConformityReport conformity;
  std::vector<std::string> warnings;

  const DegreeOfEquivalence* find_doe(std::string_view label, Standard standard) const;
};

AuxQuantities compute_aux(const ComparisonDataset& dataset);
KcrvEstimate compute_kcrv(const AuxQuantities& aux);
std::vector<DegreeOfEquivalence> compute_doe(const ComparisonDataset& dataset,
                                             const KcrvEstimate& kcrv);

/// Weighted squared residual sum of the data about (y_a, y_b).
double chi_square(const ComparisonDataset& dataset, double y_a, double y_b);

ConformityReport compute_q2(const ComparisonDataset& dataset, const KcrvEstimate& kcrv);

/// Each lab's share of q^2. Sums to ConformityReport::q2.
struct LabContribution {
  std::string label;
  double q2 = 0.0;
};
std::vector<LabContribution> q2_contributions(const ComparisonDataset& dataset,
                                              const KcrvEstimate& kcrv);

/// Normalised posterior density of (Y_A, Y_B).
double posterior_density(double y_a, double y_b, const KcrvEstimate& kcrv);

LinkingResult link(const ComparisonDataset& dataset);

}  // namespace kclink
