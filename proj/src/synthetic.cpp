#include "kclink/synthetic.hpp"

#include <cmath>
#include <cstdio>

#include "kclink/compensated_sum.hpp"
#include "kclink/random.hpp"

namespace kclink {

void SyntheticScenario::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(y_a_true) || !finite(y_b_true)) throw std::invalid_argument("true values must be finite");
  if (!(sigma_a > 0.0 && finite(sigma_a)) || !(sigma_b > 0.0 && finite(sigma_b))) {
    throw std::invalid_argument("sigma_a and sigma_b must be positive");
  }
  if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("rho must satisfy |rho| < 1");
  if (n < 2) throw std::invalid_argument("sample size n must be at least 2");
  if (layout.only_a < 0 || layout.linking < 0 || layout.only_b < 0) {
    throw std::invalid_argument("lab counts must be non-negative");
  }
  if (layout.only_a + layout.linking == 0 || layout.only_b + layout.linking == 0) {
    throw std::invalid_argument("layout must give each standard at least one lab");
  }
}

Observations draw_observations(const SyntheticScenario& scenario, LabKind kind,
                               std::uint64_t stream, std::uint64_t substream) {
  CounterRng rng(scenario.seed, stream, substream);
  Observations obs;
  const auto n = static_cast<std::size_t>(scenario.n);
  const double tail = std::sqrt(1.0 - scenario.rho * scenario.rho);
  switch (kind) {
    case LabKind::OnlyA:
      obs.a.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        obs.a.push_back(scenario.y_a_true + scenario.sigma_a * rng.normal());
      }
      break;
    case LabKind::OnlyB:
      obs.b.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        obs.b.push_back(scenario.y_b_true + scenario.sigma_b * rng.normal());
      }
      break;
    case LabKind::Linking:
      obs.a.reserve(n);
      obs.b.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double za = rng.normal();
        const double zb = scenario.rho * za + tail * rng.normal();
        obs.a.push_back(scenario.y_a_true + scenario.sigma_a * za);
        obs.b.push_back(scenario.y_b_true + scenario.sigma_b * zb);
      }
      break;
  }
  return obs;
}

namespace {

double mean(const std::vector<double>& v) {
  CompensatedSum s;
  for (double x : v) s += x;
  return s.value() / static_cast<double>(v.size());
}

double sample_covariance(const std::vector<double>& x, double mx, const std::vector<double>& y,
                         double my) {
  CompensatedSum s;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
  return s.value() / static_cast<double>(x.size() - 1);
}

}  // namespace

SampledLab sample_lab(const SyntheticScenario& scenario, LabKind kind, std::uint64_t stream,
                      std::string label) {
  scenario.validate();
  const double n = scenario.n;
  for (int sub = 0; sub < kMaxSubstreams; ++sub) {
    const Observations obs = draw_observations(scenario, kind, stream, static_cast<std::uint64_t>(sub));
    LabResult lab;
    lab.label = label;
    double var_a = 0.0, var_b = 0.0;
    double mean_a = 0.0, mean_b = 0.0;
    if (!obs.a.empty()) {
      mean_a = mean(obs.a);
      var_a = sample_covariance(obs.a, mean_a, obs.a, mean_a);
      if (!(var_a > 0.0)) continue;
      lab.value_a = mean_a;
      lab.u_a = std::sqrt(var_a / n);
    }
    if (!obs.b.empty()) {
      mean_b = mean(obs.b);
      var_b = sample_covariance(obs.b, mean_b, obs.b, mean_b);
      if (!(var_b > 0.0)) continue;
      lab.value_b = mean_b;
      lab.u_b = std::sqrt(var_b / n);
    }
    if (kind == LabKind::Linking) {
      const double cov = sample_covariance(obs.a, mean_a, obs.b, mean_b) / n;
      if (!(std::abs(cov) < *lab.u_a * *lab.u_b)) continue;
      lab.cov_ab = cov;
    }
    return {std::move(lab), sub};
  }
  throw SamplingError("lab '" + label + "': every substream produced a degenerate sample");
}

std::uint64_t lab_stream(LabKind kind, std::uint64_t index) {
  return (static_cast<std::uint64_t>(kind) << 32) | index;
}

ComparisonDataset generate_scenario(const SyntheticScenario& scenario) {
  scenario.validate();
  const int total = scenario.layout.only_a + scenario.layout.linking + scenario.layout.only_b;
  const int width = total >= 100 ? static_cast<int>(std::to_string(total).size()) : 2;

  std::vector<LabResult> labs;
  DatasetMetadata meta;
  int number = 0;
  auto emit = [&](LabKind kind, int count) {
    for (int i = 0; i < count; ++i) {
      char label[32];
      std::snprintf(label, sizeof label, "LAB-%0*d", width, ++number);
      SampledLab sampled =
          sample_lab(scenario, kind, lab_stream(kind, static_cast<std::uint64_t>(i)), label);
      if (sampled.skipped_substreams > 0) {
        meta.notes.push_back("lab '" + std::string(label) + "': degenerate sample redrawn " +
                             std::to_string(sampled.skipped_substreams) + " time(s)");
      }
      labs.push_back(std::move(sampled.result));
    }
  };
  emit(LabKind::OnlyA, scenario.layout.only_a);
  emit(LabKind::Linking, scenario.layout.linking);
  emit(LabKind::OnlyB, scenario.layout.only_b);
  return validate_dataset(std::move(labs), std::move(meta));
}

}  // namespace kclink
