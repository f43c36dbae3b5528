#include "kclink/report.hpp"

#include "kclink/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace kclink {

double round_half_up(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double scaled = value * scale;
  const double floor_part = std::floor(std::abs(scaled));
  const double frac = std::abs(scaled) - floor_part;
  const double tie_slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(scaled));
  const double magnitude = (frac + tie_slack >= 0.5) ? floor_part + 1.0 : floor_part;
  return std::copysign(magnitude, scaled) / scale;
}

std::string format_fixed(double value, int decimals) {
  double rounded = round_half_up(value, decimals);
  if (rounded == 0.0) rounded = 0.0;  // drop the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, rounded);
  return buf;
}

ReportDocument make_report(const LinkingResult& result, const RenderOptions& options) {
  ReportDocument doc;
  doc.tool_version = std::string(kToolName) + " " + std::string(kToolVersion);
  doc.source = options.source;
  if (options.input) {
    doc.units = options.input->units();
    doc.input_labs = options.input->labs();
  }
  doc.result = result;
  doc.contributions = options.contributions;
  doc.decimals = options.decimals;
  return doc;
}

namespace {

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::vector<std::string> labels_in_order(const LinkingResult& result) {
  std::vector<std::string> labels;
  for (const auto& doe : result.does) {
    if (std::find(labels.begin(), labels.end(), doe.label) == labels.end()) labels.push_back(doe.label);
  }
  return labels;
}

}  // namespace

std::string ReportDocument::to_text() const {
  std::ostringstream out;
  const int dp = decimals;
  const std::string unit_suffix = units.empty() ? "" : " " + units;
  const std::string unit_sq = units.empty() ? "" : " " + units + "^2";
  const auto& k = result.kcrv;
  const auto& c = result.conformity;

  out << tool_version << "  linked evaluation of two key comparisons\n";
  if (!source.empty()) out << "input: " << source << '\n';
  if (!units.empty()) out << "units: " << units << '\n';
  out << '\n';

  const auto labels = labels_in_order(result);
  std::size_t label_width = 8;
  for (const auto& l : labels) label_width = std::max(label_width, l.size() + 2);
  constexpr std::size_t col = 10;

  out << pad_right("lab", label_width) << pad_left("d_A", col) << pad_left("u(d_A)", col)
      << pad_left("d_B", col) << pad_left("u(d_B)", col) << '\n';
  for (const auto& label : labels) {
    std::string row = pad_right(label, label_width);
    for (Standard s : {Standard::A, Standard::B}) {
      if (const auto* doe = result.find_doe(label, s)) {
        row += pad_left(format_fixed(doe->d, dp), col) + pad_left(format_fixed(doe->u_d, dp), col);
      } else {
        row += std::string(2 * col, ' ');
      }
    }
    row.erase(row.find_last_not_of(' ') + 1);
    out << row << '\n';
  }
  out << '\n';
  out << "ŷ_A=" << format_fixed(k.y_a, dp) << ", u(ŷ_A)=" << format_fixed(k.u_a, dp) << unit_suffix
      << '\n';
  out << "ŷ_B=" << format_fixed(k.y_b, dp) << ", u(ŷ_B)=" << format_fixed(k.u_b, dp) << unit_suffix
      << '\n';
  out << "u(ŷ_A,ŷ_B)=" << format_fixed(k.cov_ab, dp) << unit_sq
      << ", r=" << format_fixed(k.r_tilde, 3) << '\n';
  out << "q²/(N-2)=" << (c.ratio ? format_fixed(*c.ratio, 2) : std::string("n/a")) << " ("
      << (c.passed ? "passed" : "failed") << ")\n";
  out << "q²=" << format_fixed(c.q2, 2) << ", N=" << c.dof + 2 << '\n';

  if (!contributions.empty()) {
    out << "\nq² contributions\n";
    for (const auto& lc : contributions) {
      out << "  " << pad_right(lc.label, label_width) << pad_left(format_fixed(lc.q2, 2), col) << '\n';
    }
  }
  if (!result.warnings.empty()) {
    out << "\nwarnings:\n";
    for (const auto& w : result.warnings) out << "  - " << w << '\n';
  }
  return out.str();
}

nlohmann::json result_to_json(const LinkingResult& r) {
  nlohmann::json does = nlohmann::json::array();
  for (const auto& d : r.does) {
    does.push_back({{"label", d.label}, {"standard", std::string(to_string(d.standard))}, {"d", d.d}, {"u_d", d.u_d}});
  }
  return {
      {"aux", {{"a", r.aux.a}, {"b", r.aux.b}, {"c", r.aux.c}, {"s1", r.aux.s1}, {"s2", r.aux.s2}}},
      {"kcrv",
       {{"y_a", r.kcrv.y_a},
        {"u_a", r.kcrv.u_a},
        {"y_b", r.kcrv.y_b},
        {"u_b", r.kcrv.u_b},
        {"cov_ab", r.kcrv.cov_ab},
        {"r_tilde", r.kcrv.r_tilde}}},
      {"does", std::move(does)},
      {"conformity",
       {{"q2", r.conformity.q2},
        {"dof", r.conformity.dof},
        {"n", r.conformity.dof + 2},
        {"ratio", r.conformity.ratio ? nlohmann::json(*r.conformity.ratio) : nlohmann::json()},
        {"passed", r.conformity.passed}}},
      {"warnings", r.warnings},
  };
}

LinkingResult result_from_json(const nlohmann::json& j) {
  const nlohmann::json& src = j.contains("result") ? j.at("result") : j;
  LinkingResult r;
  const auto& aux = src.at("aux");
  r.aux = {aux.at("a").get<double>(), aux.at("b").get<double>(), aux.at("c").get<double>(),
           aux.at("s1").get<double>(), aux.at("s2").get<double>()};
  const auto& k = src.at("kcrv");
  r.kcrv.y_a = k.at("y_a").get<double>();
  r.kcrv.u_a = k.at("u_a").get<double>();
  r.kcrv.y_b = k.at("y_b").get<double>();
  r.kcrv.u_b = k.at("u_b").get<double>();
  r.kcrv.cov_ab = k.at("cov_ab").get<double>();
  r.kcrv.r_tilde = k.at("r_tilde").get<double>();
  for (const auto& d : src.at("does")) {
    const auto standard = parse_standard(d.at("standard").get<std::string>());
    if (!standard) throw std::invalid_argument("bad standard in DOE entry");
    r.does.push_back({d.at("label").get<std::string>(), *standard, d.at("d").get<double>(),
                      d.at("u_d").get<double>()});
  }
  const auto& c = src.at("conformity");
  r.conformity.q2 = c.at("q2").get<double>();
  r.conformity.dof = c.at("dof").get<int>();
  if (!c.at("ratio").is_null()) r.conformity.ratio = c.at("ratio").get<double>();
  r.conformity.passed = c.at("passed").get<bool>();
  r.warnings = src.at("warnings").get<std::vector<std::string>>();
  return r;
}

nlohmann::json ReportDocument::to_json() const {
  const int dp = decimals;
  const auto& k = result.kcrv;
  nlohmann::json display_does = nlohmann::json::array();
  for (const auto& d : result.does) {
    display_does.push_back({{"label", d.label},
                            {"standard", std::string(to_string(d.standard))},
                            {"d", format_fixed(d.d, dp)},
                            {"u_d", format_fixed(d.u_d, dp)}});
  }
  nlohmann::json doc = {
      {"tool", {{"name", std::string(kToolName)}, {"version", std::string(kToolVersion)}}},
      {"result", result_to_json(result)},
      {"display",
       {{"decimals", dp},
        {"kcrv",
         {{"y_a", format_fixed(k.y_a, dp)},
          {"u_a", format_fixed(k.u_a, dp)},
          {"y_b", format_fixed(k.y_b, dp)},
          {"u_b", format_fixed(k.u_b, dp)}}},
        {"does", std::move(display_does)},
        {"ratio", result.conformity.ratio ? nlohmann::json(format_fixed(*result.conformity.ratio, 2))
                                          : nlohmann::json()},
        {"verdict", result.conformity.passed ? "passed" : "failed"}}},
  };
  nlohmann::json input = {{"source", source}, {"units", units}};
  nlohmann::json labs = nlohmann::json::array();
  for (const auto& lab : input_labs) labs.push_back(lab_to_json(lab));
  input["labs"] = std::move(labs);
  doc["input"] = std::move(input);
  if (!contributions.empty()) {
    nlohmann::json contrib = nlohmann::json::array();
    for (const auto& lc : contributions) contrib.push_back({{"label", lc.label}, {"q2", lc.q2}});
    doc["q2_contributions"] = std::move(contrib);
  }
  return doc;
}

std::string render_report(const LinkingResult& result, ReportFormat format,
                          const RenderOptions& options) {
  const ReportDocument doc = make_report(result, options);
  if (format == ReportFormat::Json) return doc.to_json().dump(2) + "\n";
  return doc.to_text();
}

}  // namespace kclink
