#include "kclink/core_model.hpp"

#include <cmath>
#include <set>

namespace kclink {

std::string_view to_string(Standard standard) {
  return standard == Standard::A ? "A" : "B";
}

std::optional<Standard> parse_standard(std::string_view text) {
  if (text == "A" || text == "a") return Standard::A;
  if (text == "B" || text == "b") return Standard::B;
  return std::nullopt;
}

bool LabResult::measures(Standard standard) const {
  return standard == Standard::A ? value_a.has_value() : value_b.has_value();
}

double LabResult::value(Standard standard) const {
  const auto& v = standard == Standard::A ? value_a : value_b;
  if (!v) {
    throw std::invalid_argument("lab '" + label + "' has no value for standard " +
                                std::string(to_string(standard)));
  }
  return *v;
}

double LabResult::uncertainty(Standard standard) const {
  const auto& u = standard == Standard::A ? u_a : u_b;
  if (!u) {
    throw std::invalid_argument("lab '" + label + "' has no uncertainty for standard " +
                                std::string(to_string(standard)));
  }
  return *u;
}

CorrelationView to_correlation(const LabResult& result) {
  if (!result.is_linking()) {
    throw std::invalid_argument("lab '" + result.label + "' did not measure both standards");
  }
  return {result.covariance() / (*result.u_a * *result.u_b)};
}

double to_covariance(double r_ab, double u_a, double u_b) { return r_ab * u_a * u_b; }

const LabResult* ComparisonDataset::find(std::string_view label) const {
  for (const auto& lab : labs_) {
    if (lab.label == label) return &lab;
  }
  return nullptr;
}

namespace {

void check_uncertainty(const LabResult& lab, const std::optional<double>& value,
                       const std::optional<double>& u, std::string_view which) {
  if (value.has_value() != u.has_value()) {
    throw ValidationError("lab '" + lab.label + "': value and uncertainty for standard " +
                          std::string(which) + " must be given together");
  }
  if (value && !std::isfinite(*value)) {
    throw ValidationError("lab '" + lab.label + "': non-finite value for standard " +
                          std::string(which));
  }
  if (u && !(std::isfinite(*u) && *u > 0.0)) {
    throw ValidationError("lab '" + lab.label + "': uncertainty for standard " +
                          std::string(which) + " must be positive and finite");
  }
}

}  // namespace

ComparisonDataset validate_dataset(std::vector<LabResult> raw, DatasetMetadata metadata) {
  if (raw.empty()) throw ValidationError("dataset is empty");

  ComparisonDataset ds;
  std::set<std::string, std::less<>> seen;
  bool any_covariance = false;

  for (std::size_t i = 0; i < raw.size(); ++i) {
    const LabResult& lab = raw[i];
    if (lab.label.empty()) throw ValidationError("lab #" + std::to_string(i + 1) + " has no label");
    if (!seen.insert(lab.label).second) throw ValidationError("duplicate label '" + lab.label + "'");

    check_uncertainty(lab, lab.value_a, lab.u_a, "A");
    check_uncertainty(lab, lab.value_b, lab.u_b, "B");

    if (!lab.value_a && !lab.value_b) {
      throw ValidationError("lab '" + lab.label + "' reports no measurement");
    }
    if (lab.cov_ab) {
      if (!lab.is_linking()) {
        throw ValidationError("lab '" + lab.label +
                              "': covariance given but the lab did not measure both standards");
      }
      if (!std::isfinite(*lab.cov_ab) || !(std::abs(*lab.cov_ab) < *lab.u_a * *lab.u_b)) {
        throw ValidationError("lab '" + lab.label +
                              "': covariance must satisfy |cov| < u_a * u_b (|r| < 1)");
      }
      if (*lab.cov_ab != 0.0) any_covariance = true;
    }

    if (lab.is_linking()) {
      ds.linking_.push_back(i);
    } else if (lab.value_a) {
      ds.only_a_.push_back(i);
    } else {
      ds.only_b_.push_back(i);
    }
  }

  if (ds.count_a() == 0) throw ValidationError("no laboratory measured standard A");
  if (ds.count_b() == 0) throw ValidationError("no laboratory measured standard B");

  ds.warnings_ = metadata.notes;
  if (ds.linking_.empty()) {
    ds.warnings_.emplace_back(
        "no linking laboratories: the two comparisons are evaluated independently");
  } else {
    for (std::size_t idx : ds.linking_) {
      if (!raw[idx].cov_ab) {
        ds.warnings_.push_back("linking lab '" + raw[idx].label +
                               "' reports no covariance; treated as zero");
      }
    }
    if (!any_covariance) {
      ds.uncorrelated_linking_ = true;
      ds.warnings_.emplace_back(
          "all linking covariances are zero: the reference values reduce to separate "
          "inverse-variance weighted means and the comparisons are not actually linked");
    }
  }

  ds.labs_ = std::move(raw);
  ds.metadata_ = std::move(metadata);
  return ds;
}

}  // namespace kclink
