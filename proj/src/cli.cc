#include "pftpha/cli.h"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pftpha/crosscheck.h"
#include "pftpha/error.h"
#include "pftpha/format.h"
#include "pftpha/measures.h"
#include "pftpha/report.h"

namespace pftpha::cli {

namespace {

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed model text, already prefixed with file and position.
class InputError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string model_path;
  double time = 0.0;
  double from = 0.0, to = 0.0, step = 0.0;
  int stage = 0;
  std::vector<std::string> order;
  std::optional<int> decimals;
  bool posterior = false;
  bool basic = false;
  std::optional<std::size_t> max_explanations;
  std::optional<double> epsilon;
  bool exhaustive = false;
  std::string output;
  std::string format;
  int precision = kDefaultPrecision;
  double tolerance = 1e-9;
  bool verbose = false;
};

StopCriteria stop_of(const RunConfig& c) {
  StopCriteria s{c.max_explanations, c.epsilon, c.exhaustive};
  if (!s.max_explanations && !s.epsilon) s.exhaustive = true;
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path);
  return ss.str();
}

PftModel load_model(const RunConfig& c) {
  const std::string text = read_file(c.model_path);
  try {
    return parse_model(text);
  } catch (const ParseError& e) {
    throw InputError(c.model_path + ":" + std::to_string(e.line()) + ":" +
                     std::to_string(e.column()) + ": " + e.message());
  }
}

// "S=P,MM,DM" -> S: [P, MM, DM]
std::map<std::string, std::vector<std::string>> parse_order(
    const std::vector<std::string>& specs) {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& spec : specs) {
    auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ValidationError("--order expects GATE=IN1,IN2,... but got '" + spec + "'");
    std::vector<std::string> inputs;
    std::stringstream rest(spec.substr(eq + 1));
    for (std::string item; std::getline(rest, item, ',');)
      if (!item.empty()) inputs.push_back(item);
    out[spec.substr(0, eq)] = std::move(inputs);
  }
  return out;
}

AnalysisOptions analysis_options(const RunConfig& c) {
  AnalysisOptions opts;
  opts.compile.input_order = parse_order(c.order);
  opts.stop = stop_of(c);
  return opts;
}

bool csv(const RunConfig& c, const char* fallback) {
  return (c.format.empty() ? std::string(fallback) : c.format) == "csv";
}

int cmd_validate(const RunConfig& c, std::ostream& out) {
  const PftModel model = load_model(c);
  const auto violations = validate(model);
  for (const auto& v : violations) out << c.model_path << ": " << v << '\n';
  if (!violations.empty()) return kInvalid;
  out << c.model_path << ": valid\n";
  return kOk;
}

int cmd_compile(const RunConfig& c, std::ostream& out) {
  const PftModel model = load_model(c);
  CompileOptions opts;
  opts.time_hours = c.time;
  opts.input_order = parse_order(c.order);
  const PhaTheory theory = c.stage == 1 ? conversion1(model, opts) : conversion2(model, opts);
  out << serialize(theory, SerializeOptions{c.decimals});
  return kOk;
}

int cmd_mcs(const RunConfig& c, std::ostream& out) {
  const Analysis analysis(load_model(c), c.time, analysis_options(c));
  auto cut_sets = analysis.minimal_cut_sets(stop_of(c));
  if (c.posterior) analysis.attach_posteriors(cut_sets);
  const auto rows = mcs_rows(cut_sets);
  if (csv(c, "table"))
    write_mcs_csv(out, rows, c.precision);
  else
    write_mcs_table(out, rows, c.precision);
  return kOk;
}

void write_points(const RunConfig& c, std::ostream& out,
                  const std::vector<UnreliabilityPoint>& points, const char* fallback) {
  if (csv(c, fallback))
    write_curve_csv(out, points, c.precision);
  else
    write_curve_table(out, points, c.precision);
}

int cmd_unrel(const RunConfig& c, std::ostream& out) {
  const Analysis analysis(load_model(c), c.time, analysis_options(c));
  write_points(c, out, {{c.time, analysis.system_unreliability()}}, "table");
  return kOk;
}

int cmd_curve(const RunConfig& c, std::ostream& out) {
  const PftModel model = load_model(c);
  write_points(c, out, unreliability_curve(model, c.from, c.to, c.step, stop_of(c)), "csv");
  return kOk;
}

int cmd_posterior(const RunConfig& c, std::ostream& out) {
  const Analysis analysis(load_model(c), c.time, analysis_options(c));
  if (!c.basic) {
    auto cut_sets = analysis.minimal_cut_sets(stop_of(c));
    analysis.attach_posteriors(cut_sets);
    if (csv(c, "table"))
      write_mcs_csv(out, mcs_rows(cut_sets), c.precision);
    else
      write_mcs_table(out, mcs_rows(cut_sets), c.precision);
    return kOk;
  }
  const auto rows = posteriors_by_class(analysis.model(), analysis.basic_event_posteriors());
  if (csv(c, "table"))
    write_posterior_csv(out, rows, c.precision);
  else
    write_posterior_table(out, rows, c.precision);
  return kOk;
}

int cmd_oracle(const RunConfig& c, std::ostream& out) {
  const PftModel model = load_model(c);
  const CrossCheck check = cross_check(model, c.time, analysis_options(c));
  const Comparison* worst = nullptr;
  for (const auto& cmp : check.comparisons)
    if (!worst || cmp.deviation() > worst->deviation()) worst = &cmp;
  out << "basic events: " << check.basic_events << '\n';
  if (c.time > 0.0)
    out << "cut sets: engine " << check.engine_cut_sets << ", oracle "
        << check.oracle_cut_sets << ", " << (check.cut_sets_equal ? "equal" : "DIFFERENT")
        << '\n';
  out << "quantities compared: " << check.comparisons.size() << '\n';
  if (c.verbose)
    for (const auto& cmp : check.comparisons)
      out << "  " << cmp.quantity << "  engine " << format_significant(cmp.engine, 17)
          << "  oracle " << format_significant(cmp.oracle, 17) << '\n';
  out << "max deviation: " << format_significant(check.max_deviation(), 3);
  if (worst) out << " at " << worst->quantity;
  out << '\n';
  const bool ok = check.passed(c.tolerance);
  out << (ok ? "PASS" : "FAIL") << " (tolerance " << format_significant(c.tolerance, 3)
      << ")\n";
  return ok ? kOk : kAnalysis;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Parametric fault tree analysis by probabilistic Horn abduction", "pftpha"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every command");

  auto model_arg = [&](CLI::App* sub) {
    sub->add_option("model", c.model_path, "Model file (DSL text)")->required();
  };
  auto time_opt = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("-t,--time", c.time, "Analysis time in hours")
                  ->check(CLI::NonNegativeNumber);
    if (required) o->required();
  };
  auto stop_opts = [&](CLI::App* sub) {
    sub->add_option("--max-explanations", c.max_explanations,
                    "Stop after this many explanations")
        ->check(CLI::PositiveNumber);
    sub->add_option("--epsilon", c.epsilon, "Stop once upper - lower <= epsilon")
        ->check(CLI::NonNegativeNumber);
    sub->add_flag("--exhaustive", c.exhaustive,
                  "Run to exhaustion (default when no other criterion is given)");
  };
  auto output_opts = [&](CLI::App* sub, bool formatted) {
    sub->add_option("-o,--output", c.output, "Write results to this file");
    if (!formatted) return;
    sub->add_option("--format", c.format, "table or csv")
        ->check(CLI::IsMember({"table", "csv"}));
    sub->add_option("--precision", c.precision, "Significant digits")
        ->check(CLI::Range(1, 17));
  };
  auto order_opt = [&](CLI::App* sub) {
    sub->add_option("--order", c.order,
                    "Input order of a gate, GATE=IN1,IN2,... (repeatable)")
        ->take_all();
  };

  auto* validate_cmd = app.add_subcommand("validate", "Check a model and list violations");
  model_arg(validate_cmd);

  auto* compile_cmd = app.add_subcommand("compile", "Write the PHA theory of a model");
  model_arg(compile_cmd);
  compile_cmd->add_option("--stage", c.stage, "1 or 2")
      ->required()
      ->check(CLI::IsMember({1, 2}));
  time_opt(compile_cmd, true);
  order_opt(compile_cmd);
  compile_cmd->add_option("--decimals", c.decimals, "Fixed decimals for probabilities")
      ->check(CLI::Range(0, 17));
  output_opts(compile_cmd, false);

  auto* mcs_cmd = app.add_subcommand("mcs", "Ranked minimal cut sets");
  model_arg(mcs_cmd);
  time_opt(mcs_cmd, true);
  mcs_cmd->add_flag("--posterior", c.posterior, "Add posteriors given system failure");
  order_opt(mcs_cmd);
  stop_opts(mcs_cmd);
  output_opts(mcs_cmd, true);

  auto* unrel_cmd = app.add_subcommand("unrel", "System unreliability bounds");
  model_arg(unrel_cmd);
  time_opt(unrel_cmd, true);
  order_opt(unrel_cmd);
  stop_opts(unrel_cmd);
  output_opts(unrel_cmd, true);

  auto* curve_cmd = app.add_subcommand("curve", "System unreliability over time");
  model_arg(curve_cmd);
  curve_cmd->add_option("--from", c.from, "First time point (hours)")
      ->required()
      ->check(CLI::NonNegativeNumber);
  curve_cmd->add_option("--to", c.to, "Last time point (hours)")
      ->required()
      ->check(CLI::NonNegativeNumber);
  curve_cmd->add_option("--step", c.step, "Spacing (hours)")
      ->required()
      ->check(CLI::PositiveNumber);
  stop_opts(curve_cmd);
  output_opts(curve_cmd, true);

  auto* posterior_cmd = app.add_subcommand(
      "posterior", "Posteriors given system failure (cut sets, or --basic events)");
  model_arg(posterior_cmd);
  time_opt(posterior_cmd, true);
  posterior_cmd->add_flag("--basic", c.basic, "Per-class basic-event posteriors");
  order_opt(posterior_cmd);
  stop_opts(posterior_cmd);
  output_opts(posterior_cmd, true);

  auto* oracle_cmd = app.add_subcommand("oracle", "Cross-check every measure by enumeration");
  model_arg(oracle_cmd);
  time_opt(oracle_cmd, true);
  oracle_cmd->add_option("--tolerance", c.tolerance, "Allowed absolute deviation")
      ->check(CLI::NonNegativeNumber);
  oracle_cmd->add_flag("-v,--verbose", c.verbose, "List every compared quantity");
  order_opt(oracle_cmd);
  output_opts(oracle_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    std::ostringstream buffer;
    int code = kOk;
    if (validate_cmd->parsed()) code = cmd_validate(c, buffer);
    else if (compile_cmd->parsed()) code = cmd_compile(c, buffer);
    else if (mcs_cmd->parsed()) code = cmd_mcs(c, buffer);
    else if (unrel_cmd->parsed()) code = cmd_unrel(c, buffer);
    else if (curve_cmd->parsed()) code = cmd_curve(c, buffer);
    else if (posterior_cmd->parsed()) code = cmd_posterior(c, buffer);
    else if (oracle_cmd->parsed()) code = cmd_oracle(c, buffer);

    if (c.output.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(c.output, std::ios::binary);
      if (!file) throw IoError("cannot write " + c.output);
      file << buffer.str();
      file.close();
      if (!file) throw IoError("error writing " + c.output);
    }
    return code;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const InputError& e) {
    err << e.what() << '\n';
    return kInvalid;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const ValidationError& e) {
    err << "invalid model: " << e.what() << '\n';
    return kInvalid;
  } catch (const Error& e) {
    err << "analysis failed: " << e.what() << '\n';
    return kAnalysis;
  } catch (const std::exception& e) {
    err << "analysis failed: " << e.what() << '\n';
    return kAnalysis;
  }
}

}  // namespace pftpha::cli
