#include <doctest.h>

#include <cmath>
#include <set>

#include "kclink/linking.hpp"
#include "kclink/random.hpp"
#include "kclink/synthetic.hpp"
#include "oracle.hpp"

using namespace kclink;

namespace {

bool within(oracle::MeanSe m, double want) { return std::abs(m.mean - want) <= 5 * m.se; }

SyntheticScenario reference_scenario(std::uint64_t seed) {
  SyntheticScenario s;
  s.seed = seed;
  return s;
}

// Same data with the uncertainties replaced by their population values.
std::vector<LabResult> with_population_uncertainties(const ComparisonDataset& ds,
                                                     const SyntheticScenario& s) {
  std::vector<LabResult> labs = ds.labs();
  const double rn = std::sqrt(static_cast<double>(s.n));
  for (auto& l : labs) {
    if (l.u_a) l.u_a = s.sigma_a / rn;
    if (l.u_b) l.u_b = s.sigma_b / rn;
    if (l.cov_ab) l.cov_ab = s.rho * s.sigma_a * s.sigma_b / s.n;
  }
  return labs;
}

// Regularised lower incomplete gamma P(a, x) by its power series.
double gamma_p(double a, double x) {
  double term = 1.0 / a, sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= x / (a + k);
    sum += term;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

TEST_CASE("counter RNG") {
  CounterRng a(7, 3), b(7, 3), c(7, 4), d(7, 3, 1);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
    CHECK(x != d.next_u64());
  }
  CHECK(std::string(CounterRng::kAlgorithm) == "splitmix64-counter/1");

  CounterRng u(1, 0);
  std::vector<double> xs;
  for (int i = 0; i < 200000; ++i) {
    const double x = u.uniform_open0();
    REQUIRE(x > 0.0);
    REQUIRE(x <= 1.0);
    xs.push_back(x);
  }
  CHECK(within(oracle::mean_se(xs), 0.5));

  CounterRng n(2, 0);
  std::vector<double> z, z2, z3, z4;
  for (int i = 0; i < 200000; ++i) {
    const double v = n.normal();
    z.push_back(v);
    z2.push_back(v * v);
    z3.push_back(v * v * v);
    z4.push_back(v * v * v * v);
  }
  CHECK(within(oracle::mean_se(z), 0.0));
  CHECK(within(oracle::mean_se(z2), 1.0));
  CHECK(within(oracle::mean_se(z3), 0.0));
  CHECK(within(oracle::mean_se(z4), 3.0));
}

TEST_CASE("scenario validation") {
  auto bad = [](auto mutate) {
    SyntheticScenario s;
    mutate(s);
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  };
  bad([](SyntheticScenario& s) { s.sigma_a = 0; });
  bad([](SyntheticScenario& s) { s.sigma_b = -1; });
  bad([](SyntheticScenario& s) { s.rho = 1; });
  bad([](SyntheticScenario& s) { s.n = 1; });
  bad([](SyntheticScenario& s) { s.layout.only_a = -1; });
  bad([](SyntheticScenario& s) { s.layout = {0, 0, 3}; });
  bad([](SyntheticScenario& s) { s.y_a_true = NAN; });
  CHECK_NOTHROW(SyntheticScenario{}.validate());
}

TEST_CASE("generated datasets are deterministic and labelled in order") {
  const auto s = reference_scenario(42);
  const auto d1 = generate_scenario(s);
  const auto d2 = generate_scenario(s);
  REQUIRE(d1.labs().size() == 17);
  for (std::size_t i = 0; i < 17; ++i) {
    const auto& l1 = d1.labs()[i];
    const auto& l2 = d2.labs()[i];
    CHECK(l1.label == l2.label);
    CHECK(l1.value_a == l2.value_a);
    CHECK(l1.u_b == l2.u_b);
    CHECK(l1.cov_ab == l2.cov_ab);
  }
  CHECK(d1.labs()[0].label == "LAB-01");
  CHECK(d1.labs()[16].label == "LAB-17");
  CHECK(d1.only_a().size() == 8);
  CHECK(d1.linking() == std::vector<std::size_t>{8, 9, 10, 11});
  CHECK(d1.only_b().size() == 5);
  CHECK(d1.warnings().empty());

  const auto other = generate_scenario(reference_scenario(43));
  CHECK(other.labs()[0].value_a != d1.labs()[0].value_a);
}

TEST_CASE("changing one lab kind's count leaves other labs untouched") {
  auto s = reference_scenario(5);
  const auto base = generate_scenario(s);
  s.layout.only_b = 9;
  s.layout.only_a = 3;
  const auto changed = generate_scenario(s);
  // The first three A-only labs and the four linking labs keep their draws.
  for (std::size_t i = 0; i < 3; ++i) CHECK(changed.labs()[i].value_a == base.labs()[i].value_a);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(changed.labs()[3 + i].value_a == base.labs()[8 + i].value_a);
    CHECK(changed.labs()[3 + i].cov_ab == base.labs()[8 + i].cov_ab);
  }
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(changed.labs()[7 + i].value_b == base.labs()[12 + i].value_b);
  }
}

TEST_CASE("lab summaries follow the sample formulas") {
  const auto s = reference_scenario(9);
  const auto stream = lab_stream(LabKind::Linking, 2);
  const auto obs = draw_observations(s, LabKind::Linking, stream);
  REQUIRE(obs.a.size() == 50);
  REQUIRE(obs.b.size() == 50);
  double ma = 0, mb = 0;
  for (int i = 0; i < 50; ++i) ma += obs.a[i], mb += obs.b[i];
  ma /= 50, mb /= 50;
  double saa = 0, sbb = 0, sab = 0;
  for (int i = 0; i < 50; ++i) {
    saa += (obs.a[i] - ma) * (obs.a[i] - ma);
    sbb += (obs.b[i] - mb) * (obs.b[i] - mb);
    sab += (obs.a[i] - ma) * (obs.b[i] - mb);
  }
  const auto lab = sample_lab(s, LabKind::Linking, stream, "X").result;
  CHECK(*lab.value_a == doctest::Approx(ma).epsilon(1e-13));
  CHECK(*lab.value_b == doctest::Approx(mb).epsilon(1e-13));
  CHECK(*lab.u_a == doctest::Approx(std::sqrt(saa / 49 / 50)).epsilon(1e-13));
  CHECK(*lab.u_b == doctest::Approx(std::sqrt(sbb / 49 / 50)).epsilon(1e-13));
  CHECK(*lab.cov_ab == doctest::Approx(sab / 49 / 50).epsilon(1e-12));

  const auto a_only = draw_observations(s, LabKind::OnlyA, 0);
  CHECK(a_only.b.empty());
  CHECK(a_only.a.size() == 50);
}

TEST_CASE("vanishing spread yields a degenerate sample") {
  auto s = reference_scenario(3);
  s.sigma_a = 1e-300;
  const auto obs = draw_observations(s, LabKind::OnlyA, 0);
  for (double x : obs.a) CHECK(x == s.y_a_true);
  CHECK_THROWS_AS(sample_lab(s, LabKind::OnlyA, 0, "X"), SamplingError);
  CHECK_THROWS_AS(generate_scenario(s), SamplingError);
}

TEST_CASE("sampled uncertainties and correlations") {
  for (int n : {5, 50}) {
    auto s = reference_scenario(77);
    s.n = n;
    std::vector<double> va, r;
    for (std::uint64_t i = 0; i < 20000; ++i) {
      const auto lab = sample_lab(s, LabKind::Linking, lab_stream(LabKind::Linking, i), "X").result;
      va.push_back(*lab.u_a * *lab.u_a);
      r.push_back(to_correlation(lab).r_ab);
    }
    // Unbiased variance of the mean.
    CHECK(within(oracle::mean_se(va), s.sigma_a * s.sigma_a / n));
    if (n == 50) {
      const auto m = oracle::mean_se(r);
      const double rho = s.rho;
      CHECK(within(m, rho * (1 - (1 - rho * rho) / (2.0 * n))));
      const double sd = m.se * std::sqrt(20000.0);
      CHECK(sd == doctest::Approx((1 - rho * rho) / std::sqrt(n - 1.0)).epsilon(0.05));
    }
  }

  auto s = reference_scenario(78);
  s.rho = 0;
  std::vector<double> r;
  for (std::uint64_t i = 0; i < 20000; ++i) {
    r.push_back(to_correlation(sample_lab(s, LabKind::Linking, i, "X").result).r_ab);
  }
  CHECK(within(oracle::mean_se(r), 0.0));
}

TEST_CASE("chi-square at the truth and the conformity test on simulated data") {
  const int reps = 20000;
  std::vector<double> chi_pop, chi_sample, ratio, pass;
  for (int rep = 0; rep < reps; ++rep) {
    const auto s = reference_scenario(1000 + rep);
    const auto ds = generate_scenario(s);
    const auto pop = with_population_uncertainties(ds, s);
    chi_pop.push_back(oracle::chi_square(pop, s.y_a_true, s.y_b_true));
    chi_sample.push_back(oracle::chi_square(ds.labs(), s.y_a_true, s.y_b_true));
    const auto r = link(validate_dataset(pop));
    ratio.push_back(*r.conformity.ratio);
    pass.push_back(r.conformity.passed ? 1.0 : 0.0);
  }
  const double n_total = 21;
  CHECK(within(oracle::mean_se(chi_pop), n_total));
  // With sample uncertainties each lab's term is a Student or Hotelling
  // statistic: (n-1)/(n-3) per single value, 2(n-1)/(n-4) per linking pair.
  CHECK(within(oracle::mean_se(chi_sample), 13 * 49.0 / 47 + 4 * 2 * 49.0 / 46));
  CHECK(within(oracle::mean_se(ratio), 1.0));
  CHECK(within(oracle::mean_se(pass), gamma_p(19 / 2.0, 19 / 2.0)));
}
