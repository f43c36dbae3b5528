#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "kclink/conformity.hpp"
#include "kclink/reference_data.hpp"
#include "oracle.hpp"

using namespace kclink;
using testing::both;
using testing::only_a;
using testing::only_b;

namespace {

std::vector<LabResult> three_way() {
  return {only_a("P", 0, 1), only_a("Q", 6, 1), both("R", 0.5, 1, 0.2, 1, 0.5), only_b("S", 0, 1)};
}

bool oracle_passes(std::vector<LabResult> labs, const std::string& label, double u) {
  for (auto& l : labs) {
    if (l.label == label) {
      if (l.cov_ab) l.cov_ab = *l.cov_ab * u / *l.u_a;
      l.u_a = u;
    }
  }
  return oracle::minimize_chi_square(labs, 41).chi2 <= 3.0;
}

}  // namespace

TEST_CASE("conforming data are returned unchanged") {
  const auto ds = validate_dataset(reference::synthetic_example_labs());
  const auto r = minimal_inflation(ds, "LAB-03", Standard::A);
  CHECK(r.minimal_u == r.original_u);
  CHECK(r.threshold_u == r.original_u);
  CHECK(r.relinked.kcrv.y_a == link(ds).kcrv.y_a);
}

TEST_CASE("threshold matches a fine scan of the independent chi-square") {
  const auto labs = three_way();
  const auto ds = validate_dataset(labs);
  REQUIRE_FALSE(link(ds).conformity.passed);

  // Coarse scan for the crossing, then a fine one inside the bracket.
  double lo = 1.0;
  while (lo < 100 && !oracle_passes(labs, "Q", lo + 0.01)) lo += 0.01;
  REQUIRE(lo < 100);
  double crossing = lo;
  for (double u = lo; u <= lo + 0.01 + 1e-12; u += 1e-5) {
    if (oracle_passes(labs, "Q", u)) {
      crossing = u;
      break;
    }
  }

  const auto r = minimal_inflation(ds, "Q", Standard::A);
  CHECK(std::abs(r.threshold_u - crossing) <= 2e-4 * crossing);
  CHECK(r.minimal_u == r.threshold_u);
  CHECK(r.relinked.conformity.passed);
  CHECK_FALSE(link(with_uncertainty(ds, "Q", Standard::A, r.threshold_u * (1 - 2e-4)))
                  .conformity.passed);

}

TEST_CASE("inflating a correlated linking lab keeps its correlation") {
  const std::vector<LabResult> labs{only_a("P", 0, 1), only_a("Q", 0.5, 1),
                                    both("R", 6, 1, 0, 1, 0.5), only_b("S", 0.3, 1)};
  const auto r = minimal_inflation(validate_dataset(labs), "R", Standard::A);
  CHECK(r.relinked.conformity.passed);
  double u = 1.0;
  while (u < 100 && !oracle_passes(labs, "R", u)) u *= 1.00005;
  REQUIRE(u < 100);
  CHECK(std::abs(r.threshold_u - u) <= 2e-4 * u);
}

TEST_CASE("rounding up to the reporting resolution") {
  const auto ds = validate_dataset(three_way());
  InflationOptions options;
  options.report_decimals = 1;
  const auto r = minimal_inflation(ds, "Q", Standard::A, options);
  CHECK(r.minimal_u >= r.threshold_u);
  CHECK(std::abs(r.minimal_u * 10 - std::round(r.minimal_u * 10)) <= 1e-9);
  CHECK(r.relinked.conformity.passed);
  CHECK_FALSE(link(with_uncertainty(ds, "Q", Standard::A, r.minimal_u - 0.1)).conformity.passed);
}

TEST_CASE("gauge blocks: INMETRO1 B") {
  const auto ds = validate_dataset(reference::gauge_block_labs());
  const auto before = link(ds);
  const auto plain = minimal_inflation(ds, "INMETRO1", Standard::B);
  CHECK(plain.threshold_u == doctest::Approx(11.1427).epsilon(2e-4));
  CHECK(plain.minimal_u == plain.threshold_u);

  InflationOptions options;
  options.report_decimals = 1;
  const auto r = minimal_inflation(ds, "INMETRO1", Standard::B, options);
  CHECK(r.minimal_u == doctest::Approx(11.2).epsilon(1e-12));
  CHECK(*r.relinked.conformity.ratio == doctest::Approx(1.00).epsilon(0.005));

  // No covariances, so the A side is untouched bit for bit.
  CHECK(r.relinked.kcrv.y_a == before.kcrv.y_a);
  CHECK(r.relinked.kcrv.u_a == before.kcrv.u_a);
  for (const auto& d : before.does) {
    if (d.standard != Standard::A) continue;
    const auto* after = r.relinked.find_doe(d.label, Standard::A);
    REQUIRE(after);
    CHECK(after->d == d.d);
    CHECK(after->u_d == d.u_d);
  }
}

TEST_CASE("inflation errors") {
  const auto ds = validate_dataset(three_way());
  CHECK_THROWS_AS(minimal_inflation(ds, "nobody", Standard::A), std::invalid_argument);
  CHECK_THROWS_AS(minimal_inflation(ds, "P", Standard::B), std::invalid_argument);
  InflationOptions bad;
  bad.tolerance = 0;
  CHECK_THROWS_AS(minimal_inflation(ds, "Q", Standard::A, bad), std::invalid_argument);
  // The A side disagrees on its own; no B uncertainty can fix that.
  CHECK_THROWS_AS(minimal_inflation(ds, "S", Standard::B), InflationError);
}

TEST_CASE("with_uncertainty keeps the correlation") {
  const auto ds = validate_dataset(three_way(), {"nm", {}});
  const auto changed = with_uncertainty(ds, "R", Standard::B, 4.0);
  const auto* r = changed.find("R");
  REQUIRE(r);
  CHECK(*r->u_b == 4.0);
  CHECK(to_correlation(*r).r_ab == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(changed.units() == "nm");
  CHECK(*ds.find("R")->u_b == 1.0);
  CHECK_THROWS_AS(with_uncertainty(ds, "R", Standard::B, -1.0), ValidationError);
}
