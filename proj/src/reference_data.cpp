#include "kclink/reference_data.hpp"

namespace kclink::reference {

namespace {

LabResult only_a(std::string label, double x, double u) {
  return {std::move(label), x, u, std::nullopt, std::nullopt, std::nullopt};
}

LabResult only_b(std::string label, double x, double u) {
  return {std::move(label), std::nullopt, std::nullopt, x, u, std::nullopt};
}

LabResult both(std::string label, double xa, double ua, double xb, double ub,
               std::optional<double> r = std::nullopt) {
  std::optional<double> cov;
  if (r) cov = to_covariance(*r, ua, ub);
  return {std::move(label), xa, ua, xb, ub, cov};
}

}  // namespace

std::vector<LabResult> gauge_block_labs() {
  return {
      only_a("METAS", -96.0, 13.0),    only_a("NPL", -140.0, 33.0),
      only_a("BNM-LNE", -110.0, 16.0), only_a("KRISS", -104.3, 20.6),
      only_a("NRLM", -89.4, 16.3),     only_a("VNIIM", -104.0, 15.0),
      only_a("CSIRO", -114.0, 16.0),   only_a("NIM", -90.0, 10.3),
      both("NIST", -117.0, 17.9, -100.0, 18.0),
      both("CENAM", -119.0, 18.7, -93.0, 23.0),
      both("NRC", -126.0, 24.0, -124.0, 26.0),
      only_b("INMETRO1", -98.0, 4.0),  only_b("INMETRO2", -68.0, 29.0),
      only_b("INTI", -104.0, 21.0),    only_b("CEM", -148.0, 17.0),
  };
}

std::vector<LabResult> synthetic_example_labs() {
  return {
      only_a("LAB-01", 113.4, 2.9), only_a("LAB-02", 112.1, 2.8), only_a("LAB-03", 113.0, 2.5),
      only_a("LAB-04", 110.6, 2.6), only_a("LAB-05", 109.4, 2.4), only_a("LAB-06", 107.0, 2.6),
      only_a("LAB-07", 104.7, 2.8), only_a("LAB-08", 109.0, 2.6),
      both("LAB-09", 111.0, 2.4, 120.1, 6.5, 0.8),
      both("LAB-10", 109.4, 2.8, 117.3, 7.3, 0.8),
      both("LAB-11", 111.1, 2.8, 125.0, 6.4, 0.8),
      both("LAB-12", 115.3, 2.4, 135.7, 6.7, 0.7),
      only_b("LAB-13", 129.7, 6.1), only_b("LAB-14", 129.1, 7.5), only_b("LAB-15", 125.0, 7.1),
      only_b("LAB-16", 123.6, 6.6), only_b("LAB-17", 123.0, 6.9),
  };
}

}  // namespace kclink::reference
