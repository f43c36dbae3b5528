#pragma once

#include <optional>
#include <string>

#include "kclink/core_model.hpp"

namespace testing {

inline kclink::LabResult only_a(std::string label, double x, double u) {
  kclink::LabResult l;
  l.label = std::move(label);
  l.value_a = x;
  l.u_a = u;
  return l;
}

inline kclink::LabResult only_b(std::string label, double x, double u) {
  kclink::LabResult l;
  l.label = std::move(label);
  l.value_b = x;
  l.u_b = u;
  return l;
}

inline kclink::LabResult both(std::string label, double xa, double ua, double xb, double ub,
                              std::optional<double> cov = std::nullopt) {
  kclink::LabResult l;
  l.label = std::move(label);
  l.value_a = xa;
  l.u_a = ua;
  l.value_b = xb;
  l.u_b = ub;
  l.cov_ab = cov;
  return l;
}

inline bool contains(const std::vector<std::string>& v, std::string_view needle) {
  for (const auto& s : v) {
    if (s.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace testing
