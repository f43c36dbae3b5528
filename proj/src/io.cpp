#include "kclink/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace kclink {

namespace {

constexpr std::string_view kUnicodeMinus = "\xE2\x88\x92";  // U+2212
constexpr std::string_view kBom = "\xEF\xBB\xBF";

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Canonical ASCII form: Unicode minus -> '-', decimal comma -> '.'.
std::string normalize_number(std::string_view text) {
  std::string s(trim(text));
  if (s.starts_with(kUnicodeMinus)) s.replace(0, kUnicodeMinus.size(), "-");
  const auto commas = std::count(s.begin(), s.end(), ',');
  if (commas > 1 || (commas == 1 && s.find('.') != std::string::npos)) {
    throw std::invalid_argument("ambiguous number '" + std::string(text) + "'");
  }
  std::replace(s.begin(), s.end(), ',', '.');
  return s;
}

// Splits one CSV record. Quoted fields may contain commas and "" escapes.
std::vector<std::string> split_record(std::string_view line, int line_no) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(ch);
      }
    } else if (ch == '"') {
      if (!trim(cell).empty()) throw ParseError("unexpected quote in field", line_no);
      cell.clear();
      quoted = was_quoted = true;
    } else if (ch == ',') {
      cells.push_back(was_quoted ? cell : std::string(trim(cell)));
      cell.clear();
      was_quoted = false;
    } else {
      if (was_quoted && !std::isspace(static_cast<unsigned char>(ch))) {
        throw ParseError("text after closing quote", line_no);
      }
      if (!was_quoted) cell.push_back(ch);
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", line_no);
  cells.push_back(was_quoted ? cell : std::string(trim(cell)));
  return cells;
}

enum Column { kLabel, kXa, kUa, kXb, kUb, kCov, kColumnCount };
constexpr std::string_view kColumnNames[kColumnCount] = {"label", "x_a", "u_a",
                                                         "x_b",   "u_b", "cov_ab"};

std::optional<double> optional_number(std::string_view cell) {
  if (trim(cell).empty()) return std::nullopt;
  return parse_number(cell);
}

void record_decimals(ParsedDataset& parsed, const std::string& label, Standard standard,
                     std::string_view text) {
  if (auto d = decimal_places(text)) parsed.uncertainty_decimals[{label, standard}] = *d;
}

}  // namespace

std::optional<DataFormat> parse_data_format(std::string_view name) {
  const std::string n = lower(name);
  if (n == "csv") return DataFormat::Csv;
  if (n == "json") return DataFormat::Json;
  return std::nullopt;
}

std::optional<DataFormat> format_from_extension(const std::filesystem::path& path) {
  std::string ext = lower(path.extension().string());
  if (ext.starts_with('.')) ext.erase(0, 1);
  return parse_data_format(ext);
}

double parse_number(std::string_view text) {
  const std::string s = normalize_number(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::optional<int> decimal_places(std::string_view text) {
  const std::string s = normalize_number(text);
  if (s.find_first_of("eE") != std::string::npos) return std::nullopt;
  const auto dot = s.find('.');
  if (dot == std::string::npos) return 0;
  return static_cast<int>(s.size() - dot - 1);
}

std::optional<int> ParsedDataset::decimals_of(std::string_view label, Standard standard) const {
  const auto it = uncertainty_decimals.find({std::string(label), standard});
  if (it == uncertainty_decimals.end()) return std::nullopt;
  return it->second;
}

ParsedDataset parse_dataset_csv(std::istream& in) {
  ParsedDataset parsed;
  std::vector<LabResult> labs;
  DatasetMetadata meta;
  std::array<int, kColumnCount> position{kLabel, kXa, kUa, kXb, kUb, kCov};
  int width = kColumnCount;
  bool header_seen = false;
  bool data_seen = false;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (line_no == 1 && view.starts_with(kBom)) view.remove_prefix(kBom.size());
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (trim(view).empty()) continue;
    if (trim(view).starts_with('#')) {
      std::string_view comment = trim(trim(view).substr(1));
      if (lower(comment.substr(0, 6)) == "units:" || lower(comment.substr(0, 6)) == "units=") {
        meta.units = std::string(trim(comment.substr(6)));
      }
      continue;
    }

    std::vector<std::string> cells = split_record(view, line_no);
    if (!header_seen && !data_seen && lower(cells[0]) == "label") {
      header_seen = true;
      position.fill(-1);
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const std::string name = lower(cells[i]);
        const auto* it = std::find(std::begin(kColumnNames), std::end(kColumnNames), name);
        if (it == std::end(kColumnNames)) throw ParseError("unknown column '" + cells[i] + "'", line_no);
        const auto col = static_cast<std::size_t>(it - std::begin(kColumnNames));
        if (position[col] != -1) throw ParseError("duplicate column '" + cells[i] + "'", line_no);
        position[col] = static_cast<int>(i);
      }
      for (int col = kLabel; col < kCov; ++col) {
        if (position[static_cast<std::size_t>(col)] == -1) {
          throw ParseError("missing column '" + std::string(kColumnNames[col]) + "'", line_no);
        }
      }
      width = static_cast<int>(cells.size());
      continue;
    }
    data_seen = true;
    if (static_cast<int>(cells.size()) > width) {
      throw ParseError("expected at most " + std::to_string(width) + " fields, found " +
                           std::to_string(cells.size()),
                       line_no);
    }
    cells.resize(static_cast<std::size_t>(width));
    auto cell = [&](Column col) -> const std::string& {
      static const std::string empty;
      const int p = position[col];
      return p < 0 ? empty : cells[static_cast<std::size_t>(p)];
    };

    LabResult lab;
    lab.label = cell(kLabel);
    try {
      lab.value_a = optional_number(cell(kXa));
      lab.u_a = optional_number(cell(kUa));
      lab.value_b = optional_number(cell(kXb));
      lab.u_b = optional_number(cell(kUb));
      lab.cov_ab = optional_number(cell(kCov));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), line_no);
    }
    if (lab.u_a) record_decimals(parsed, lab.label, Standard::A, cell(kUa));
    if (lab.u_b) record_decimals(parsed, lab.label, Standard::B, cell(kUb));
    labs.push_back(std::move(lab));
  }
  if (labs.empty()) throw ParseError("no data rows", line_no);
  parsed.dataset = validate_dataset(std::move(labs), std::move(meta));
  return parsed;
}

ParsedDataset parse_dataset_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
  }

  DatasetMetadata meta;
  const nlohmann::json* entries = &doc;
  if (doc.is_object()) {
    for (const auto& [key, value] : doc.items()) {
      if (key != "units" && key != "labs") throw ParseError("unknown top-level key '" + key + "'", 0);
    }
    if (doc.contains("units")) {
      if (!doc["units"].is_string()) throw ParseError("'units' must be a string", 0);
      meta.units = doc["units"].get<std::string>();
    }
    if (!doc.contains("labs")) throw ParseError("missing 'labs' array", 0);
    entries = &doc["labs"];
  }
  if (!entries->is_array()) throw ParseError("expected an array of lab objects", 0);

  ParsedDataset parsed;
  std::vector<LabResult> labs;
  int index = 0;
  for (const auto& entry : *entries) {
    ++index;
    if (!entry.is_object()) throw ParseError("lab entry is not an object", index);
    LabResult lab;
    std::array<std::optional<double>*, kColumnCount> slots{nullptr,    &lab.value_a, &lab.u_a,
                                                           &lab.value_b, &lab.u_b,   &lab.cov_ab};
    for (const auto& [key, value] : entry.items()) {
      const auto* it = std::find(std::begin(kColumnNames), std::end(kColumnNames), key);
      if (it == std::end(kColumnNames)) throw ParseError("unknown field '" + key + "'", index);
      const auto col = static_cast<std::size_t>(it - std::begin(kColumnNames));
      if (col == kLabel) {
        if (!value.is_string()) throw ParseError("'label' must be a string", index);
        lab.label = value.get<std::string>();
        continue;
      }
      if (value.is_null()) continue;
      if (value.is_number()) {
        *slots[col] = value.get<double>();
      } else if (value.is_string()) {
        try {
          *slots[col] = optional_number(value.get<std::string>());
        } catch (const std::invalid_argument& e) {
          throw ParseError(std::string(key) + ": " + e.what(), index);
        }
      } else {
        throw ParseError("field '" + key + "' must be a number, string or null", index);
      }
    }
    for (auto [col, standard] : {std::pair{kUa, Standard::A}, std::pair{kUb, Standard::B}}) {
      const auto name = std::string(kColumnNames[col]);
      if (entry.contains(name) && entry[name].is_string() && *slots[col]) {
        record_decimals(parsed, lab.label, standard, entry[name].get<std::string>());
      }
    }
    labs.push_back(std::move(lab));
  }
  if (labs.empty()) throw ParseError("no lab entries", 0);
  parsed.dataset = validate_dataset(std::move(labs), std::move(meta));
  return parsed;
}

ParsedDataset read_dataset(const std::filesystem::path& path, DataFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  if (format == DataFormat::Csv) return parse_dataset_csv(in);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_dataset_json(buffer.str());
}

ComparisonDataset parse_dataset(const std::filesystem::path& path, DataFormat format) {
  return read_dataset(path, format).dataset;
}

namespace {

std::string csv_quote(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos && trim(s) == s) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

// Shortest representation that parses back to the same double.
std::string exact(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string exact(const std::optional<double>& v) { return v ? exact(*v) : std::string(); }

}  // namespace

void write_dataset_csv(std::ostream& out, const ComparisonDataset& dataset) {
  if (!dataset.units().empty()) out << "# units: " << dataset.units() << '\n';
  out << "label,x_a,u_a,x_b,u_b,cov_ab\n";
  for (const LabResult& lab : dataset.labs()) {
    out << csv_quote(lab.label) << ',' << exact(lab.value_a) << ',' << exact(lab.u_a) << ','
        << exact(lab.value_b) << ',' << exact(lab.u_b) << ',' << exact(lab.cov_ab) << '\n';
  }
}

nlohmann::json lab_to_json(const LabResult& lab) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); };
  return {{"label", lab.label},     {"x_a", opt(lab.value_a)}, {"u_a", opt(lab.u_a)},
          {"x_b", opt(lab.value_b)}, {"u_b", opt(lab.u_b)},     {"cov_ab", opt(lab.cov_ab)}};
}

nlohmann::json dataset_to_json(const ComparisonDataset& dataset) {
  nlohmann::json labs = nlohmann::json::array();
  for (const LabResult& lab : dataset.labs()) labs.push_back(lab_to_json(lab));
  return {{"units", dataset.units()}, {"labs", std::move(labs)}};
}

void write_plot_data(std::ostream& out, const LinkingResult& result) {
  out << "label,standard,d,u_d,expanded_u_d\n";
  for (const auto& doe : result.does) {
    out << csv_quote(doe.label) << ',' << to_string(doe.standard) << ',' << exact(doe.d) << ','
        << exact(doe.u_d) << ',' << exact(2.0 * doe.u_d) << '\n';
  }
}

void emit_plot_data(const LinkingResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  write_plot_data(out, result);
  out.flush();
  if (!out) throw std::runtime_error("error writing '" + path.string() + "'");
}

SyntheticScenario scenario_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("scenario must be a JSON object", 0);
  static const std::vector<std::string> known = {"y_a_true", "y_b_true", "sigma_a", "sigma_b",
                                                 "rho",      "n",        "layout",  "seed"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ParseError("unknown scenario field '" + key + "'", 0);
    }
  }
  SyntheticScenario s;
  try {
    for (const auto& key : known) {
      if (!j.contains(key)) throw ParseError("missing scenario field '" + key + "'", 0);
    }
    s.y_a_true = j.at("y_a_true").get<double>();
    s.y_b_true = j.at("y_b_true").get<double>();
    s.sigma_a = j.at("sigma_a").get<double>();
    s.sigma_b = j.at("sigma_b").get<double>();
    s.rho = j.at("rho").get<double>();
    s.n = j.at("n").get<int>();
    const auto& layout = j.at("layout");
    s.layout.only_a = layout.at("only_a").get<int>();
    s.layout.linking = layout.at("linking").get<int>();
    s.layout.only_b = layout.at("only_b").get<int>();
    s.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid scenario: ") + e.what(), 0);
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid scenario: ") + e.what(), 0);
  }
  return s;
}

nlohmann::json scenario_to_json(const SyntheticScenario& s) {
  return {{"y_a_true", s.y_a_true},
          {"y_b_true", s.y_b_true},
          {"sigma_a", s.sigma_a},
          {"sigma_b", s.sigma_b},
          {"rho", s.rho},
          {"n", s.n},
          {"layout", {{"only_a", s.layout.only_a}, {"linking", s.layout.linking}, {"only_b", s.layout.only_b}}},
          {"seed", s.seed}};
}

SyntheticScenario read_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
  }
  return scenario_from_json(j);
}

}  // namespace kclink
