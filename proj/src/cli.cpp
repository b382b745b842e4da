#include "keysim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "keysim/calibrate.hpp"
#include "keysim/error.hpp"
#include "keysim/layout.hpp"
#include "keysim/layout_io.hpp"
#include "keysim/motor.hpp"
#include "keysim/session.hpp"
#include "keysim/simulator.hpp"

namespace keysim::cli {

namespace {

namespace fs = std::filesystem;

// Values that print as zero at three decimals print without a sign.
double no_negative_zero(double v) { return std::fabs(v) < 5e-4 ? 0.0 : v; }

class ValidationFailure : public std::runtime_error {
 public:
  ValidationFailure(std::string what, ValidationReport report)
      : std::runtime_error(std::move(what)), report(std::move(report)) {}
  ValidationReport report;
};

struct ParamOptions {
  std::string params_file;
  std::optional<double> i_m;
  std::optional<double> tap_cost;
  std::optional<double> slide_extra;
  std::optional<double> think_qwert;
  std::optional<double> think_qwerty;
  std::optional<double> think_3x4;
  std::string formulation;

  void attach(CLI::App* app) {
    app->add_option("--params", params_file, "Motor parameter JSON file");
    app->add_option("--im", i_m, "Fitts slope I_m in ms/bit");
    app->add_option("--tap-cost", tap_cost, "Tap execution time in ms");
    app->add_option("--slide-extra", slide_extra, "Extra slide-up time in ms");
    app->add_option("--think-qwert", think_qwert, "Think step on QWERT in ms");
    app->add_option("--think-qwerty", think_qwerty, "Think step on QWERTY in ms");
    app->add_option("--think-3x4", think_3x4, "Think step on 3x4 in ms");
    app->add_option("--formulation", formulation, "Index of difficulty form")
        ->check(CLI::IsMember({"welford", "shannon"}));
  }

  MotorParams resolve() const {
    MotorParams p;
    if (!params_file.empty()) {
      try {
        p = parse_params_json(read_text_file(params_file));
      } catch (const FormatError& e) {
        throw FormatError(fmt::format("{}: {}", params_file, e.what()));
      }
    }
    if (i_m) p.i_m = *i_m;
    if (tap_cost) p.tap_cost = *tap_cost;
    if (slide_extra) p.slide_extra = *slide_extra;
    if (think_qwert) p.think_qwert = *think_qwert;
    if (think_qwerty) p.think_qwerty = *think_qwerty;
    if (think_3x4) p.think_3x4 = *think_3x4;
    if (!formulation.empty()) p.formulation = *parse_formulation(formulation);
    check_params(p);
    return p;
  }
};

struct TextOptions {
  std::string text;
  std::string text_file;

  void attach(CLI::App* app) {
    auto* t = app->add_option("--text", text, "Text to type");
    auto* f = app->add_option("--text-file", text_file, "File holding the text to type");
    t->excludes(f);
    app->callback([t, f] {
      if (t->count() == 0 && f->count() == 0) {
        throw CLI::RequiredError("--text or --text-file");
      }
    });
  }

  std::string resolve() const { return text_file.empty() ? text : read_text_file(text_file); }
};

KeyboardLayout checked_layout(std::string_view name_or_path) {
  KeyboardLayout layout = load_layout(name_or_path);
  ValidationReport report = validate_layout(layout);
  if (!report.ok) {
    throw ValidationFailure(fmt::format("layout '{}' is invalid", name_or_path), std::move(report));
  }
  return layout;
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    if (comma > start) out.emplace_back(text.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError(fmt::format("cannot write '{}'", path.string()));
  f << content;
}

std::string symbol_text(const std::optional<char>& c) { return c ? std::string(1, *c) : ""; }

void print_issues(std::ostream& os, const ValidationReport& report) {
  for (const ValidationIssue& issue : report.issues) {
    os << (issue.severity == Severity::kError ? "error: " : "warning: ") << issue.message << "\n";
  }
}

// --- predict -------------------------------------------------------------

struct PredictCommand {
  std::string layout = "qwert";
  TextOptions text;
  ParamOptions params;
  std::string trace;
  std::string format = "text";

  void attach(CLI::App* app) {
    app->add_option("--layout", layout, "Built-in layout name or layout file")->capture_default_str();
    text.attach(app);
    params.attach(app);
    app->add_option("--trace", trace, "Write the per-step timeline as CSV");
    app->add_option("--format", format)->check(CLI::IsMember({"text", "csv"}));
  }

  int run(std::ostream& out) const {
    const MotorParams p = params.resolve();
    const KeyboardLayout kb = checked_layout(layout);
    const Timeline tl = predict_text(text.resolve(), kb, p);
    if (!trace.empty()) write_file(trace, trace_csv(tl));
    if (format == "csv") {
      out << "layout,symbols,total_s,predicted_wpm\n"
          << fmt::format("{},{},{},{:.3f}\n", tl.layout_name, tl.symbol_count,
                         format_seconds(tl.total), tl.predicted_wpm);
    } else {
      out << fmt::format("layout         {}\n", tl.layout_name)
          << fmt::format("symbols        {}\n", tl.symbol_count)
          << fmt::format("total          {} s\n", format_seconds(tl.total))
          << fmt::format("predicted wpm  {:.3f}\n", tl.predicted_wpm);
    }
    return kExitOk;
  }
};

// --- compare -------------------------------------------------------------

struct CompareCommand {
  std::string layouts = "qwert,qwerty,3x4";
  TextOptions text;
  ParamOptions params;
  std::string format = "text";

  void attach(CLI::App* app) {
    app->add_option("--layouts", layouts, "Comma-separated layout names or files")
        ->capture_default_str();
    text.attach(app);
    params.attach(app);
    app->add_option("--format", format)->check(CLI::IsMember({"text", "csv"}));
  }

  int run(std::ostream& out) const {
    const MotorParams p = params.resolve();
    std::vector<KeyboardLayout> kbs;
    for (const std::string& name : split_list(layouts)) kbs.push_back(checked_layout(name));
    if (kbs.empty()) throw Error("no layouts given");
    const auto rows = compare(text.resolve(), kbs, p);
    if (format == "csv") {
      out << "rank,layout,total_s,predicted_wpm\n";
      for (std::size_t i = 0; i < rows.size(); ++i) {
        out << fmt::format("{},{},{},{:.3f}\n", i + 1, rows[i].layout_name,
                           format_seconds(rows[i].total), rows[i].predicted_wpm);
      }
    } else {
      out << fmt::format("{:<6}{:<12}{:>10}{:>10}\n", "rank", "layout", "total_s", "wpm");
      for (std::size_t i = 0; i < rows.size(); ++i) {
        out << fmt::format("{:<6}{:<12}{:>10}{:>10.3f}\n", i + 1, rows[i].layout_name,
                           format_seconds(rows[i].total), rows[i].predicted_wpm);
      }
    }
    return kExitOk;
  }
};

// --- layout --------------------------------------------------------------

struct LayoutCommand {
  CLI::App* show = nullptr;
  CLI::App* validate = nullptr;
  CLI::App* exporter = nullptr;
  std::string show_layout, validate_layout_name, export_layout_name;
  std::string format = "text";
  std::string output;

  void attach(CLI::App* app) {
    app->require_subcommand(1);
    show = app->add_subcommand("show", "Print the keys of a layout");
    show->add_option("layout", show_layout, "Built-in layout name or layout file")->required();
    show->add_option("--format", format)->check(CLI::IsMember({"text", "csv"}));
    validate = app->add_subcommand("validate", "Check a layout for geometry and binding problems");
    validate->add_option("layout", validate_layout_name)->required();
    exporter = app->add_subcommand("export", "Write a layout as JSON");
    exporter->add_option("layout", export_layout_name)->required();
    exporter->add_option("-o,--output", output, "Output file (default: standard output)");
  }

  int run(std::ostream& out) const {
    if (show->parsed()) return run_show(out);
    if (validate->parsed()) {
      const KeyboardLayout kb = load_layout(validate_layout_name);
      const ValidationReport report = validate_layout(kb);
      if (!report.ok) throw ValidationFailure(fmt::format("layout '{}' is invalid", kb.name()), report);
      print_issues(out, report);
      out << fmt::format("layout '{}' is valid\n", kb.name());
      return kExitOk;
    }
    const std::string json = export_layout_json(load_layout(export_layout_name));
    if (output.empty()) {
      out << json;
    } else {
      write_file(output, json);
    }
    return kExitOk;
  }

  int run_show(std::ostream& out) const {
    const KeyboardLayout kb = load_layout(show_layout);
    auto multitap = [](const KeyDef& k) { return std::string(k.multitap_symbols.begin(), k.multitap_symbols.end()); };
    if (format == "csv") {
      out << "id,x_mm,y_mm,w_mm,h_mm,tap,slide,multitap\n";
      for (const KeyDef& k : kb.keys()) {
        out << fmt::format("{},{:.3f},{:.3f},{:.3f},{:.3f},\"{}\",\"{}\",\"{}\"\n", k.id,
                           k.bounds.origin.x, k.bounds.origin.y, k.bounds.width, k.bounds.height,
                           symbol_text(k.tap_symbol), symbol_text(k.slide_symbol), multitap(k));
      }
      return kExitOk;
    }
    out << fmt::format("{} ({}), screen {:.3f} x {:.3f} mm, home key '{}'\n", kb.name(),
                       to_string(kb.kind()), kb.screen().width, kb.screen().height, kb.home_key());
    out << fmt::format("{:<8}{:>9}{:>9}{:>9}{:>9}  {:<5}{:<7}{}\n", "id", "x_mm", "y_mm", "w_mm",
                       "h_mm", "tap", "slide", "multitap");
    for (const KeyDef& k : kb.keys()) {
      out << fmt::format("{:<8}{:>9.3f}{:>9.3f}{:>9.3f}{:>9.3f}  {:<5}{:<7}{}\n", k.id,
                         k.bounds.origin.x, k.bounds.origin.y, k.bounds.width, k.bounds.height,
                         fmt::format("'{}'", symbol_text(k.tap_symbol)),
                         fmt::format("'{}'", symbol_text(k.slide_symbol)), multitap(k));
    }
    return kExitOk;
  }
};

// --- analyze -------------------------------------------------------------

struct AnalyzeCommand {
  std::vector<std::string> logs;
  std::vector<std::string> layout_files;
  std::string curve;
  std::string format = "text";
  TranscriptionConfig config;

  void attach(CLI::App* app) {
    app->add_option("logs", logs, "Session log files")->required();
    app->add_option("--layout-file", layout_files, "Layout file for custom layouts named in logs");
    app->add_option("--curve", curve, "Write the learning curve CSV to this file");
    app->add_option("--format", format)->check(CLI::IsMember({"text", "csv"}));
    app->add_option("--slide-threshold", config.slide_threshold_mm, "Slide-up threshold in mm")
        ->capture_default_str();
    app->add_option("--horizontal-tolerance", config.horizontal_tolerance_mm,
                    "Sideways tolerance of a slide-up in mm")
        ->capture_default_str();
    app->add_option("--multitap-timeout", config.multitap_timeout_ms, "Multi-tap timeout in ms")
        ->capture_default_str();
  }

  int run(std::ostream& out) const {
    std::vector<KeyboardLayout> custom;
    for (const std::string& f : layout_files) custom.push_back(checked_layout(f));
    auto layout_for = [&](const std::string& name) -> KeyboardLayout {
      for (const KeyboardLayout& kb : custom) {
        if (kb.name() == name) return kb;
      }
      if (auto kind = builtin_kind_for_name(name)) return builtin_layout(*kind);
      throw Error(fmt::format("no layout named '{}' (pass it with --layout-file)", name));
    };

    std::vector<SessionRecord> records;
    for (const std::string& path : logs) {
      SessionLog log = load_session_file(path);
      SessionResult result = transcribe_session(log, layout_for(log.layout_name), config);
      records.push_back({std::move(log), std::move(result)});
    }

    if (format == "csv") {
      out << "log,layout,subject_id,session_index,transcribed,wpm,error_distance\n";
      for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& [log, res] = records[i];
        out << fmt::format("{},{},{},{},\"{}\",{:.3f},{}\n", logs[i], log.layout_name, log.subject_id,
                           log.session_index, res.transcribed, res.wpm, res.error_distance);
      }
    } else {
      for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& [log, res] = records[i];
        out << fmt::format("{}\n", logs[i])
            << fmt::format("  layout {}  subject {}  session {}{}\n", log.layout_name,
                           log.subject_id, log.session_index, log.incomplete ? "  (incomplete)" : "")
            << fmt::format("  transcribed \"{}\"\n", res.transcribed)
            << fmt::format("  wpm {:.3f}  error distance {}\n", res.wpm, res.error_distance);
      }
    }

    const auto points = aggregate_sessions(records);
    if (!curve.empty()) write_file(curve, learning_curve_csv(points));
    if (format == "text") {
      out << "learning curve\n";
      for (const LearningCurvePoint& p : points) {
        out << fmt::format("  {} session {}: mean {:.3f} wpm, sd {:.3f}, n {}\n", p.layout_name,
                           p.session_index, p.mean_wpm, p.stddev_wpm, p.n);
      }
    }
    return kExitOk;
  }
};

// --- calibrate -----------------------------------------------------------

std::vector<Observation> read_observations(const fs::path& path) {
  std::istringstream in(read_text_file(path));
  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };

  std::vector<Observation> obs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "layout,text_file,observed_seconds") {
        throw FormatError(fmt::format("{}: expected header 'layout,text_file,observed_seconds'",
                                      path.string()));
      }
      continue;
    }
    const std::vector<std::string> cells = split_list(line);
    if (cells.size() != 3) {
      throw FormatError(fmt::format("{}:{}: expected 3 columns", path.string(), line_no));
    }
    double seconds = 0.0;
    try {
      std::size_t used = 0;
      seconds = std::stod(cells[2], &used);
      if (used != cells[2].size()) throw std::invalid_argument(cells[2]);
    } catch (const std::logic_error&) {
      throw FormatError(fmt::format("{}:{}: bad observed_seconds '{}'", path.string(), line_no, cells[2]));
    }
    KeyboardLayout kb = builtin_kind_for_name(cells[0]) ? checked_layout(cells[0])
                                                        : checked_layout(resolve(cells[0]).string());
    obs.push_back({read_text_file(resolve(cells[1])), std::move(kb), seconds * 1000.0});
  }
  if (obs.empty()) throw FormatError(fmt::format("{}: no observations", path.string()));
  return obs;
}

struct CalibrateCommand {
  std::string observations;
  std::string free = "think_qwerty,think_qwert,think_3x4,tap_cost,slide_extra";
  std::string output;
  int max_sweeps = 200;
  ParamOptions params;

  void attach(CLI::App* app) {
    app->add_option("--observations", observations, "CSV: layout,text_file,observed_seconds")
        ->required();
    app->add_option("--free", free, "Comma-separated parameter fields to fit")->capture_default_str();
    app->add_option("-o,--out", output, "Write fitted parameters as JSON");
    app->add_option("--max-sweeps", max_sweeps)->capture_default_str()->check(CLI::PositiveNumber);
    params.attach(app);
  }

  int run(std::ostream& out) const {
    const MotorParams seed = params.resolve();
    std::vector<ParamField> fields;
    for (const std::string& name : split_list(free)) {
      const auto f = parse_param_field(name);
      if (!f) throw CLI::ValidationError("--free", fmt::format("unknown parameter field '{}'", name));
      fields.push_back(*f);
    }
    const std::vector<Observation> obs = read_observations(observations);
    CalibrationOptions options;
    options.max_sweeps = max_sweeps;
    const CalibrationResult r = calibrate(obs, fields, seed, options);

    out << fmt::format("sweeps       {}\n", r.sweeps)
        << fmt::format("initial sse  {:.3f} ms^2\n", r.initial_sse)
        << fmt::format("final sse    {:.3f} ms^2\n", no_negative_zero(r.final_sse))
        << fmt::format("{:<12}{:>12}{:>13}{:>10}\n", "layout", "observed_s", "predicted_s", "error_%");
    for (const ObservationFit& f : r.fits) {
      out << fmt::format("{:<12}{:>12.3f}{:>13.3f}{:>10.3f}\n", f.layout_name, f.observed_ms / 1000.0,
                         f.predicted_ms / 1000.0,
                         no_negative_zero(100.0 * (f.predicted_ms - f.observed_ms) / f.observed_ms));
    }
    out << "fitted parameters\n";
    for (ParamField f : fields) {
      out << fmt::format("  {:<13}{:.3f}\n", to_string(f), field_value(r.params, f));
    }
    if (!output.empty()) write_file(output, export_params_json(r.params));
    return kExitOk;
  }
};

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Text-entry time prediction for soft keyboard layouts", "keysim"};
  app.require_subcommand(1);
  app.fallthrough(false);

  PredictCommand predict;
  CompareCommand compare_cmd;
  LayoutCommand layout;
  AnalyzeCommand analyze;
  CalibrateCommand calibrate_cmd;

  CLI::App* predict_app = app.add_subcommand("predict", "Predict entry time of a text on one layout");
  predict.attach(predict_app);
  CLI::App* compare_app = app.add_subcommand("compare", "Rank layouts by predicted entry time");
  compare_cmd.attach(compare_app);
  CLI::App* layout_app = app.add_subcommand("layout", "Inspect, validate and export layouts");
  layout.attach(layout_app);
  CLI::App* analyze_app = app.add_subcommand("analyze", "Transcribe and score session logs");
  analyze.attach(analyze_app);
  CLI::App* calibrate_app = app.add_subcommand("calibrate", "Fit motor parameters to observed totals");
  calibrate_cmd.attach(calibrate_app);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);

    if (predict_app->parsed()) return predict.run(out);
    if (compare_app->parsed()) return compare_cmd.run(out);
    if (layout_app->parsed()) return layout.run(out);
    if (analyze_app->parsed()) return analyze.run(out);
    return calibrate_cmd.run(out);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "keysim: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const ValidationFailure& e) {
    err << "keysim: " << e.what() << "\n";
    print_issues(err, e.report);
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "keysim: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace keysim::cli
