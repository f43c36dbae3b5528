// kclink: command-line front end for linked key comparison evaluation.
//
// Exit codes: 0 success (and conformity passed, for `link`), 2 analysis ran
// but the conformity test failed, 1 any error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "kclink/conformity.hpp"
#include "kclink/io.hpp"
#include "kclink/linking.hpp"
#include "kclink/report.hpp"
#include "kclink/selftest.hpp"
#include "kclink/synthetic.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNonConforming = 2;

kclink::DataFormat resolve_format(const std::string& flag, const std::string& path) {
  if (!flag.empty()) {
    if (auto f = kclink::parse_data_format(flag)) return *f;
    throw std::invalid_argument("unknown format '" + flag + "' (expected csv or json)");
  }
  if (auto f = kclink::format_from_extension(path)) return *f;
  return kclink::DataFormat::Csv;
}

kclink::ReportFormat resolve_report_format(const std::string& flag) {
  if (flag == "text") return kclink::ReportFormat::Text;
  if (flag == "json") return kclink::ReportFormat::Json;
  throw std::invalid_argument("unknown report format '" + flag + "' (expected text or json)");
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("error writing '" + path + "'");
}

struct LinkArgs {
  std::string input, format, output, report_format = "text", plot_data;
  int decimals = 1;
  bool contributions = false;
};

int run_link(const LinkArgs& args) {
  const auto dataset = kclink::parse_dataset(args.input, resolve_format(args.format, args.input));
  const auto result = kclink::link(dataset);
  kclink::RenderOptions options;
  options.decimals = args.decimals;
  options.source = args.input;
  options.input = &dataset;
  if (args.contributions) options.contributions = kclink::q2_contributions(dataset, result.kcrv);
  write_output(args.output,
               kclink::render_report(result, resolve_report_format(args.report_format), options));
  if (!args.plot_data.empty()) kclink::emit_plot_data(result, args.plot_data);
  return result.conformity.passed ? kExitOk : kExitNonConforming;
}

struct InflateArgs {
  std::string input, format, lab, standard, output, report_format = "text";
  std::string u_decimals = "auto";
  double tolerance = 1e-4;
  int decimals = 1;
};

int run_inflate(const InflateArgs& args) {
  const auto parsed = kclink::read_dataset(args.input, resolve_format(args.format, args.input));
  const auto standard = kclink::parse_standard(args.standard);
  if (!standard) throw std::invalid_argument("standard must be A or B");

  kclink::InflationOptions options;
  options.tolerance = args.tolerance;
  if (args.u_decimals == "auto") {
    options.report_decimals = parsed.decimals_of(args.lab, *standard);
  } else if (args.u_decimals != "none") {
    options.report_decimals = std::stoi(args.u_decimals);
  }

  const auto inflated = kclink::minimal_inflation(parsed.dataset, args.lab, *standard, options);
  const auto relinked_dataset =
      kclink::with_uncertainty(parsed.dataset, args.lab, *standard, inflated.minimal_u);

  kclink::RenderOptions render;
  render.decimals = args.decimals;
  render.source = args.input;
  render.input = &relinked_dataset;

  std::string content;
  if (resolve_report_format(args.report_format) == kclink::ReportFormat::Json) {
    auto doc = kclink::make_report(inflated.relinked, render).to_json();
    doc["inflation"] = {
        {"label", inflated.label},
        {"standard", std::string(kclink::to_string(inflated.standard))},
        {"original_u", inflated.original_u},
        {"threshold_u", inflated.threshold_u},
        {"minimal_u", inflated.minimal_u},
        {"tolerance", options.tolerance},
        {"u_decimals", options.report_decimals ? nlohmann::json(*options.report_decimals)
                                               : nlohmann::json()},
        {"warnings", inflated.warnings},
    };
    content = doc.dump(2) + "\n";
  } else {
    std::ostringstream out;
    const int shown = options.report_decimals.value_or(4);
    const std::string units = parsed.dataset.units().empty() ? "" : " " + parsed.dataset.units();
    out << "inflating u(" << inflated.label << ", " << kclink::to_string(inflated.standard)
        << "): " << kclink::format_fixed(inflated.original_u, shown) << units << " -> "
        << kclink::format_fixed(inflated.minimal_u, shown) << units
        << " (threshold " << kclink::format_fixed(inflated.threshold_u, 4) << units << ")\n";
    for (const auto& w : inflated.warnings) out << "warning: " << w << '\n';
    out << '\n' << kclink::make_report(inflated.relinked, render).to_text();
    content = out.str();
  }
  write_output(args.output, content);
  return kExitOk;
}

struct SynthArgs {
  std::string scenario, output, format;
  std::optional<std::uint64_t> seed;
};

int run_synth(const SynthArgs& args) {
  auto scenario = kclink::read_scenario(args.scenario);
  if (args.seed) scenario.seed = *args.seed;
  const auto dataset = kclink::generate_scenario(scenario);
  const auto format = resolve_format(args.format, args.output);
  std::ostringstream out;
  if (format == kclink::DataFormat::Json) {
    out << kclink::dataset_to_json(dataset).dump(2) << '\n';
  } else {
    kclink::write_dataset_csv(out, dataset);
  }
  write_output(args.output, out.str());
  for (const auto& w : dataset.warnings()) std::cerr << "warning: " << w << '\n';
  return kExitOk;
}

int run_selftest() {
  bool all = true;
  for (const auto& check : kclink::run_selftest()) {
    std::cout << (check.passed ? "PASS  " : "FAIL  ") << check.name;
    if (!check.passed) std::cout << ": " << check.detail;
    std::cout << '\n';
    all = all && check.passed;
  }
  return all ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linked evaluation of two key comparisons with joint participants"};
  app.set_version_flag("--version", std::string(kclink::kToolVersion));
  app.require_subcommand(1);

  LinkArgs link_args;
  auto* link_cmd = app.add_subcommand("link", "Compute both KCRVs, DOEs and the conformity test");
  link_cmd->add_option("--input,-i", link_args.input, "Dataset file (CSV or JSON)")->required();
  link_cmd->add_option("--format", link_args.format, "Input format: csv|json (default: by extension)");
  link_cmd->add_option("--output,-o", link_args.output, "Report file (default: stdout)");
  link_cmd->add_option("--report-format", link_args.report_format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));
  link_cmd->add_option("--decimals", link_args.decimals, "Decimals shown in the report")
      ->check(CLI::Range(0, 12));
  link_cmd->add_option("--plot-data", link_args.plot_data, "Write DOE plot data (CSV) to this file");
  link_cmd->add_flag("--contributions", link_args.contributions, "List each lab's share of q^2");

  InflateArgs inflate_args;
  auto* inflate_cmd = app.add_subcommand(
      "inflate", "Find the smallest uncertainty of one lab that makes the data conform");
  inflate_cmd->add_option("--input,-i", inflate_args.input, "Dataset file (CSV or JSON)")->required();
  inflate_cmd->add_option("--format", inflate_args.format, "Input format: csv|json");
  inflate_cmd->add_option("--lab", inflate_args.lab, "Label of the lab to inflate")->required();
  inflate_cmd->add_option("--standard", inflate_args.standard, "A or B")->required();
  inflate_cmd->add_option("--tolerance", inflate_args.tolerance, "Relative bisection tolerance");
  inflate_cmd->add_option("--u-decimals", inflate_args.u_decimals,
                          "Round the result up to this many decimals: auto (as reported), none, or N");
  inflate_cmd->add_option("--output,-o", inflate_args.output, "Report file (default: stdout)");
  inflate_cmd->add_option("--report-format", inflate_args.report_format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));
  inflate_cmd->add_option("--decimals", inflate_args.decimals, "Decimals shown in the report")
      ->check(CLI::Range(0, 12));

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset from a scenario file");
  synth_cmd->add_option("--scenario", synth_args.scenario, "Scenario JSON file")->required();
  synth_cmd->add_option("--seed-override", synth_args.seed, "Replace the scenario's seed");
  synth_cmd->add_option("--output,-o", synth_args.output, "Dataset file (default: CSV on stdout)");
  synth_cmd->add_option("--format", synth_args.format, "csv|json (default: by extension)");

  app.add_subcommand("selftest", "Re-evaluate the bundled reference datasets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*link_cmd) return run_link(link_args);
    if (*inflate_cmd) return run_inflate(inflate_args);
    if (*synth_cmd) return run_synth(synth_args);
    return run_selftest();
  } catch (const kclink::ParseError& e) {
    std::cerr << "kclink: parse error";
    if (e.line() > 0) std::cerr << " (line/entry " << e.line() << ")";
    std::cerr << ": " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "kclink: error: " << e.what() << '\n';
  }
  return kExitError;
}
