#pragma once

// Independent reference computations for the test suites. Nothing here calls
// the library's estimator; it only shares the LabResult data type.

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "kclink/core_model.hpp"

namespace oracle {

using kclink::LabResult;

/// chi^2 of the data about (y_a, y_b), written out term by term with
/// correlation coefficients and plain summation.
double chi_square(const std::vector<LabResult>& labs, double y_a, double y_b);

struct Sums {
  double a, b, c, s1, s2;
};

/// a, b, c, s1, s2 from correlation coefficients.
Sums sums_correlation_form(const std::vector<LabResult>& labs);
/// a, b, c, s1, s2 from covariances, naive summation in reverse lab order.
Sums sums_reversed(const std::vector<LabResult>& labs);

struct Minimum {
  double y_a, y_b, chi2;
};

/// Dense grid over a box derived from the data, then Newton refinement with
/// finite-difference derivatives of chi_square().
Minimum minimize_chi_square(const std::vector<LabResult>& labs, int grid = 161);

/// Inverse of one half of the central-difference Hessian of chi_square() at
/// (y_a, y_b); steps are taken from the data's smallest uncertainties.
std::array<std::array<double, 2>, 2> inverse_half_hessian(const std::vector<LabResult>& labs,
                                                          double y_a, double y_b);

/// Tensor-product trapezoid rule over [a0, a1] x [b0, b1].
double integrate_2d(const std::function<double(double, double)>& f, double a0, double a1,
                    double b0, double b1, int points);

/// Random valid lab list with `min_labs`..`max_labs` labs, each standard
/// measured at least once and |r| <= max_abs_r for linking labs.
std::vector<LabResult> random_labs(std::mt19937_64& rng, int min_labs, int max_labs,
                                   double max_abs_r, bool zero_covariance = false);

/// Same labs and uncertainties with values redrawn from the measurement model
/// centred on (y_a, y_b), including each linking lab's correlation.
std::vector<LabResult> redraw_values(const std::vector<LabResult>& labs, double y_a, double y_b,
                                     std::mt19937_64& rng);

/// Mean and standard error of a sample.
struct MeanSe {
  double mean, se;
};
MeanSe mean_se(const std::vector<double>& v);

}  // namespace oracle
