#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kclink/core_model.hpp"
#include "kclink/linking.hpp"

namespace kclink {

inline constexpr std::string_view kToolName = "kclink";
inline constexpr std::string_view kToolVersion = "0.1.0";

enum class ReportFormat { Text, Json };

/// Rounds half away from zero to `decimals` places. Values whose binary form
/// lies within a few ulps of a tie (2.675 -> 267.49999...) count as ties.
double round_half_up(double value, int decimals);
/// round_half_up, printed with exactly `decimals` places; never prints "-0.0".
std::string format_fixed(double value, int decimals);

struct RenderOptions {
  int decimals = 1;
  std::string source;                        // input echo: file name
  const ComparisonDataset* input = nullptr;  // input echo: lab data
  std::vector<LabContribution> contributions;
};

/// Everything a report shows. Numbers are read from the LinkingResult only at
/// render time; rounding is applied to copies.
struct ReportDocument {
  std::string tool_version;
  std::string source;
  std::string units;
  std::vector<LabResult> input_labs;
  LinkingResult result;
  std::vector<LabContribution> contributions;
  int decimals = 1;

  std::string to_text() const;
  nlohmann::json to_json() const;
};

ReportDocument make_report(const LinkingResult& result, const RenderOptions& options = {});
std::string render_report(const LinkingResult& result, ReportFormat format,
                          const RenderOptions& options = {});

nlohmann::json result_to_json(const LinkingResult& result);
/// Inverse of result_to_json. Also accepts a full JSON report.
LinkingResult result_from_json(const nlohmann::json& j);

}  // namespace kclink
