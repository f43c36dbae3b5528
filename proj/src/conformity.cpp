#include "kclink/conformity.hpp"

#include <cmath>

namespace kclink {

ComparisonDataset with_uncertainty(const ComparisonDataset& dataset, std::string_view label,
                                   Standard standard, double u) {
  std::vector<LabResult> labs = dataset.labs();
  bool found = false;
  for (LabResult& lab : labs) {
    if (lab.label != label) continue;
    found = true;
    if (!lab.measures(standard)) {
      throw std::invalid_argument("lab '" + lab.label + "' did not measure standard " +
                                  std::string(to_string(standard)));
    }
    if (lab.cov_ab && *lab.cov_ab != 0.0) {
      const double r = to_correlation(lab).r_ab;
      (standard == Standard::A ? lab.u_a : lab.u_b) = u;
      lab.cov_ab = to_covariance(r, *lab.u_a, *lab.u_b);
    } else {
      (standard == Standard::A ? lab.u_a : lab.u_b) = u;
    }
  }
  if (!found) throw std::invalid_argument("unknown lab '" + std::string(label) + "'");
  return validate_dataset(std::move(labs), dataset.metadata());
}

namespace {

struct Probe {
  double u;
  ConformityReport report;
};

}  // namespace

InflationResult minimal_inflation(const ComparisonDataset& dataset, std::string_view label,
                                  Standard standard, const InflationOptions& options) {
  if (!(options.tolerance > 0.0 && options.tolerance < 1.0)) {
    throw std::invalid_argument("tolerance must lie in (0, 1)");
  }
  if (options.scan_points < 2) throw std::invalid_argument("scan_points must be at least 2");
  if (options.report_decimals && (*options.report_decimals < 0 || *options.report_decimals > 12)) {
    throw std::invalid_argument("report_decimals must lie in [0, 12]");
  }

  const LabResult* target = dataset.find(label);
  if (!target) throw std::invalid_argument("unknown lab '" + std::string(label) + "'");
  if (!target->measures(standard)) {
    throw std::invalid_argument("lab '" + target->label + "' did not measure standard " +
                                std::string(to_string(standard)));
  }

  InflationResult result;
  result.label = target->label;
  result.standard = standard;
  result.original_u = target->uncertainty(standard);

  LinkingResult base = link(dataset);
  if (base.conformity.passed) {
    result.threshold_u = result.minimal_u = result.original_u;
    result.relinked = std::move(base);
    return result;
  }

  auto probe = [&](double u) {
    const ComparisonDataset trial = with_uncertainty(dataset, label, standard, u);
    return Probe{u, compute_q2(trial, compute_kcrv(compute_aux(trial)))};
  };

  // Bracket: double until the data conform.
  const double cap = result.original_u * kInflationCap;
  double upper = result.original_u;
  for (;;) {
    if (upper >= cap) {
      throw InflationError("no uncertainty up to 2^16 times the reported value for lab '" +
                           result.label + "' makes the data conform; the misfit is not "
                           "attributable to this lab alone");
    }
    upper = std::min(2.0 * upper, cap);
    if (probe(upper).report.passed) break;
  }

  // Log-spaced scan over the bracket to find the leftmost crossing and check
  // that q^2 decreases as the uncertainty grows.
  std::vector<Probe> scan;
  scan.reserve(static_cast<std::size_t>(options.scan_points) + 1);
  const double log_lo = std::log(result.original_u);
  const double log_hi = std::log(upper);
  for (int i = 0; i <= options.scan_points; ++i) {
    const double u = i == 0                     ? result.original_u
                     : i == options.scan_points ? upper
                                                : std::exp(log_lo + (log_hi - log_lo) * i /
                                                                        options.scan_points);
    scan.push_back(probe(u));
  }

  bool monotone = true;
  for (std::size_t i = 1; i < scan.size(); ++i) {
    const double prev = scan[i - 1].report.q2;
    if (scan[i].report.q2 > prev + 1e-12 * std::abs(prev)) monotone = false;
  }
  std::size_t first_pass = 1;
  while (!scan[first_pass].report.passed) ++first_pass;
  for (std::size_t i = first_pass + 1; i < scan.size(); ++i) {
    if (!scan[i].report.passed) monotone = false;
  }
  if (!monotone) {
    result.warnings.emplace_back(
        "q^2 is not monotone in the inflated uncertainty; using the leftmost crossing");
  }

  double lo = scan[first_pass - 1].u;
  double hi = scan[first_pass].u;
  while ((hi - lo) / hi >= options.tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (probe(mid).report.passed) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  result.threshold_u = hi;
  result.minimal_u = hi;

  if (options.report_decimals) {
    const double scale = std::pow(10.0, *options.report_decimals);
    double steps = std::ceil(hi * scale);
    // A few extra quanta cover a non-monotone q^2 just above the threshold.
    for (int extra = 0;; ++extra, steps += 1.0) {
      const double u = steps / scale;
      if (u >= result.original_u && probe(u).report.passed) {
        result.minimal_u = u;
        break;
      }
      if (extra == 1000) {
        throw InflationError("no passing uncertainty at the requested resolution near " +
                             std::to_string(hi));
      }
    }
  }

  result.relinked = link(with_uncertainty(dataset, label, standard, result.minimal_u));
  return result;
}

}  // namespace kclink
