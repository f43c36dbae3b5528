#include "kclink/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <string_view>

#include "kclink/conformity.hpp"
#include "kclink/linking.hpp"
#include "kclink/reference_data.hpp"

namespace kclink {

namespace {

struct PublishedRow {
  std::string_view label;
  std::optional<double> d_a, u_a, d_b, u_b;
};

struct Published {
  double y_a, u_a, y_b, u_b, ratio;
  bool passed;
  std::vector<PublishedRow> rows;
  double tol;
};

const Published kGaugeBlocks{
    -103.6, 4.9, -100.5, 3.6, 1.07, false,
    {{"METAS", 7.6, 12.1, {}, {}},        {"NPL", -36.4, 32.6, {}, {}},
     {"BNM-LNE", -6.4, 15.2, {}, {}},     {"KRISS", -0.7, 20.0, {}, {}},
     {"NRLM", 14.2, 15.6, {}, {}},        {"VNIIM", -0.4, 14.2, {}, {}},
     {"CSIRO", -10.4, 15.2, {}, {}},      {"NIM", 13.6, 9.1, {}, {}},
     {"NIST", -13.4, 17.2, 0.5, 17.6},    {"CENAM", -15.4, 18.1, 7.5, 22.7},
     {"NRC", -22.4, 23.5, -23.5, 25.7},   {"INMETRO1", {}, {}, 2.5, 1.7},
     {"INMETRO2", {}, {}, 32.5, 28.8},    {"INTI", {}, {}, -3.5, 20.7},
     {"CEM", {}, {}, -47.5, 16.6}},
    0.05};

const Published kGaugeBlocksInflated{
    -103.6, 4.9, -106.7, 6.8, 1.00, true,
    {{"METAS", 7.6, 12.1, {}, {}},        {"NPL", -36.4, 32.6, {}, {}},
     {"BNM-LNE", -6.4, 15.2, {}, {}},     {"KRISS", -0.7, 20.0, {}, {}},
     {"NRLM", 14.2, 15.6, {}, {}},        {"VNIIM", -0.4, 14.2, {}, {}},
     {"CSIRO", -10.4, 15.2, {}, {}},      {"NIM", 13.6, 9.1, {}, {}},
     {"NIST", -13.4, 17.2, 6.7, 16.6},    {"CENAM", -15.4, 18.1, 13.7, 22.0},
     {"NRC", -22.4, 23.5, -17.3, 25.1},   {"INMETRO1", {}, {}, 8.7, 8.9},
     {"INMETRO2", {}, {}, 38.7, 28.2},    {"INTI", {}, {}, 2.7, 19.9},
     {"CEM", {}, {}, -41.3, 15.6}},
    0.05};

const Published kSynthetic{
    110.909, 0.698, 123.879, 1.966, 0.89, true,
    {{"LAB-01", 2.491, 2.815, {}, {}},        {"LAB-02", 1.191, 2.712, {}, {}},
     {"LAB-03", 2.091, 2.401, {}, {}},        {"LAB-04", -0.309, 2.505, {}, {}},
     {"LAB-05", -1.509, 2.296, {}, {}},       {"LAB-06", -3.909, 2.505, {}, {}},
     {"LAB-07", -6.209, 2.712, {}, {}},       {"LAB-08", -1.909, 2.505, {}, {}},
     {"LAB-09", 0.091, 2.296, -3.779, 6.196}, {"LAB-10", -1.509, 2.712, -6.579, 7.030},
     {"LAB-11", 0.191, 2.712, 1.121, 6.091},  {"LAB-12", 4.391, 2.296, 11.821, 6.405},
     {"LAB-13", {}, {}, 5.821, 5.775},        {"LAB-14", {}, {}, 5.221, 7.238},
     {"LAB-15", {}, {}, 1.121, 6.822},        {"LAB-16", {}, {}, -0.279, 6.300},
     {"LAB-17", {}, {}, -0.879, 6.614}},
    0.0005};

std::string compare(const LinkingResult& r, const Published& p) {
  std::string problems;
  auto check = [&](std::string_view what, double got, double want, double tol) {
    if (std::abs(got - want) > tol) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%.*s: got %.6f, expected %.6f; ", static_cast<int>(what.size()),
                    what.data(), got, want);
      problems += buf;
    }
  };
  check("y_A", r.kcrv.y_a, p.y_a, p.tol);
  check("u(y_A)", r.kcrv.u_a, p.u_a, p.tol);
  check("y_B", r.kcrv.y_b, p.y_b, p.tol);
  check("u(y_B)", r.kcrv.u_b, p.u_b, p.tol);
  check("q2/(N-2)", r.conformity.ratio.value_or(NAN), p.ratio, 0.005);
  if (r.conformity.passed != p.passed) problems += "verdict differs; ";
  for (const auto& row : p.rows) {
    for (Standard s : {Standard::A, Standard::B}) {
      const auto& d = s == Standard::A ? row.d_a : row.d_b;
      const auto& u = s == Standard::A ? row.u_a : row.u_b;
      const auto* doe = r.find_doe(row.label, s);
      if (d.has_value() != (doe != nullptr)) {
        problems += std::string(row.label) + " DOE presence differs; ";
        continue;
      }
      if (!doe) continue;
      const std::string tag = std::string(row.label) + " " + std::string(to_string(s));
      check(tag + " d", doe->d, *d, p.tol);
      check(tag + " u(d)", doe->u_d, *u, p.tol);
    }
  }
  return problems;
}

SelftestCheck run(std::string name, auto&& body) {
  SelftestCheck check{std::move(name), false, {}};
  try {
    check.detail = body();
    check.passed = check.detail.empty();
  } catch (const std::exception& e) {
    check.detail = std::string("exception: ") + e.what();
  }
  return check;
}

}  // namespace

std::vector<SelftestCheck> run_selftest() {
  std::vector<SelftestCheck> checks;
  checks.push_back(run("gauge blocks, reported data", [] {
    return compare(link(validate_dataset(reference::gauge_block_labs(), {"nm", {}})), kGaugeBlocks);
  }));
  checks.push_back(run("gauge blocks, INMETRO1 inflated", [] {
    const auto ds = validate_dataset(reference::gauge_block_labs(), {"nm", {}});
    InflationOptions options;
    options.report_decimals = 1;
    const auto inflated = minimal_inflation(ds, "INMETRO1", Standard::B, options);
    std::string problems = compare(inflated.relinked, kGaugeBlocksInflated);
    if (std::abs(inflated.minimal_u - 11.2) > 0.05) {
      problems += "minimal u = " + std::to_string(inflated.minimal_u) + ", expected 11.2; ";
    }
    return problems;
  }));
  checks.push_back(run("simulated example", [] {
    return compare(link(validate_dataset(reference::synthetic_example_labs())), kSynthetic);
  }));
  return checks;
}

}  // namespace kclink
