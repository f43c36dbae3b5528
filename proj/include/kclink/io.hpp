#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include <json.hpp>

#include "kclink/core_model.hpp"
#include "kclink/linking.hpp"
#include "kclink/synthetic.hpp"

namespace kclink {

enum class DataFormat { Csv, Json };

std::optional<DataFormat> parse_data_format(std::string_view name);
/// ".csv" / ".json" (case-insensitive); nullopt otherwise.
std::optional<DataFormat> format_from_extension(const std::filesystem::path& path);

/// Malformed input. `line()` is 1-based for CSV; for JSON it is the index of
/// the offending lab entry (1-based) or 0 when not attributable to one.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line) : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Parses a decimal number written with either a decimal point or a decimal
/// comma ("-96,0"), optionally with a Unicode minus sign (U+2212). Throws
/// std::invalid_argument for anything else, including nan/inf.
double parse_number(std::string_view text);

/// Digits after the decimal separator ("4,0" -> 1, "17" -> 0). nullopt for
/// exponent notation.
std::optional<int> decimal_places(std::string_view text);

struct ParsedDataset {
  ComparisonDataset dataset;
  /// Decimals each uncertainty was written with, where the source kept them
  /// (CSV cells, JSON strings). Keyed by (label, standard).
  std::map<std::pair<std::string, Standard>, int> uncertainty_decimals;

  std::optional<int> decimals_of(std::string_view label, Standard standard) const;
};

/// CSV columns: label, x_a, u_a, x_b, u_b, cov_ab. Empty cells are absent.
/// An optional header row starting with "label" may reorder columns; lines
/// starting with '#' are comments, and "# units: nm" sets the units.
ParsedDataset parse_dataset_csv(std::istream& in);

/// Either an array of lab objects or {"units": ..., "labs": [...]}. Lab
/// fields use the CSV column names; values may be numbers, strings or null.
ParsedDataset parse_dataset_json(std::string_view text);

ParsedDataset read_dataset(const std::filesystem::path& path, DataFormat format);
ComparisonDataset parse_dataset(const std::filesystem::path& path, DataFormat format);

void write_dataset_csv(std::ostream& out, const ComparisonDataset& dataset);
nlohmann::json dataset_to_json(const ComparisonDataset& dataset);
nlohmann::json lab_to_json(const LabResult& lab);

/// Rows of (label, standard, d, u_d, 2*u_d) with a header line.
void write_plot_data(std::ostream& out, const LinkingResult& result);
/// Throws std::runtime_error when the file cannot be written.
void emit_plot_data(const LinkingResult& result, const std::filesystem::path& path);

SyntheticScenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const SyntheticScenario& scenario);
SyntheticScenario read_scenario(const std::filesystem::path& path);

}  // namespace kclink
