#include "keysim/session.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <utility>

#include <fmt/core.h>

#include "json.hpp"
#include "json_util.hpp"
#include "keysim/error.hpp"
#include "keysim/layout_io.hpp"

namespace keysim {

using nlohmann::json;

namespace {

PointerEvent parse_event(const json& j, std::size_t i, double px_per_mm) {
  const std::string where = fmt::format("events[{}]", i);
  if (!j.is_object()) throw FormatError(where + " must be an object");
  detail::reject_unknown(j, {"t_ms", "phase", "x_px", "y_px"}, where);
  PointerEvent ev;
  ev.t_ms = detail::require_number(j, "t_ms", where);
  const std::string phase = detail::require_string(j, "phase", where);
  if (phase == "down") {
    ev.phase = PointerPhase::kDown;
  } else if (phase == "up") {
    ev.phase = PointerPhase::kUp;
  } else {
    throw FormatError(fmt::format("{}: phase must be \"down\" or \"up\"", where));
  }
  ev.pos = {detail::require_number(j, "x_px", where) / px_per_mm,
            detail::require_number(j, "y_px", where) / px_per_mm};
  return ev;
}

// A multi-tap burst still waiting for its commit.
struct PendingGroup {
  const KeyDef* key = nullptr;
  std::size_t taps = 0;
  double last_up_ms = 0.0;
};

}  // namespace

SessionLog parse_session_json(std::string_view text) {
  const json doc = detail::parse_json(text, "session");
  if (!doc.is_object()) throw FormatError("session: top level must be an object");
  detail::reject_unknown(doc,
                         {"version", "layout", "stimulus", "started_at", "px_per_mm", "subject_id",
                          "session_index", "events", "incomplete"},
                         "session");
  const json& version = detail::require(doc, "version", "session");
  if (!version.is_number_integer() || version.get<int>() != 1) {
    throw FormatError("session: unsupported version (expected 1)");
  }

  SessionLog log;
  log.layout_name = detail::require_string(doc, "layout", "session");
  log.stimulus = detail::require_string(doc, "stimulus", "session");
  log.started_at = detail::require_string(doc, "started_at", "session");
  log.subject_id = detail::require_string(doc, "subject_id", "session");
  log.px_per_mm = detail::require_number(doc, "px_per_mm", "session");
  if (!(log.px_per_mm > 0.0) || !std::isfinite(log.px_per_mm)) {
    throw FormatError("session: px_per_mm must be > 0");
  }
  const json& index = detail::require(doc, "session_index", "session");
  if (!index.is_number_integer() || index.get<long long>() < 1) {
    throw FormatError("session: session_index must be an integer >= 1");
  }
  log.session_index = index.get<int>();
  if (auto it = doc.find("incomplete"); it != doc.end()) {
    if (!it->is_boolean()) throw FormatError("session: 'incomplete' must be a boolean");
    log.incomplete = it->get<bool>();
  }

  const json& events = detail::require(doc, "events", "session");
  if (!events.is_array()) throw FormatError("session: field 'events' must be an array");
  log.events.reserve(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    log.events.push_back(parse_event(events[i], i, log.px_per_mm));
  }
  return log;
}

std::string export_session_json(const SessionLog& log) {
  json events = json::array();
  for (const PointerEvent& ev : log.events) {
    nlohmann::ordered_json ej;
    ej["t_ms"] = ev.t_ms;
    ej["phase"] = ev.phase == PointerPhase::kDown ? "down" : "up";
    ej["x_px"] = ev.pos.x * log.px_per_mm;
    ej["y_px"] = ev.pos.y * log.px_per_mm;
    events.push_back(json(ej));
  }
  nlohmann::ordered_json doc;
  doc["version"] = 1;
  doc["layout"] = log.layout_name;
  doc["stimulus"] = log.stimulus;
  doc["started_at"] = log.started_at;
  doc["px_per_mm"] = log.px_per_mm;
  doc["subject_id"] = log.subject_id;
  doc["session_index"] = log.session_index;
  if (log.incomplete) doc["incomplete"] = true;
  doc["events"] = std::move(events);
  return doc.dump(2) + "\n";
}

SessionLog load_session_file(const std::filesystem::path& path) {
  try {
    return parse_session_json(read_text_file(path));
  } catch (const FormatError& e) {
    throw FormatError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

double session_wpm(std::size_t char_count, double duration_ms) {
  if (!(duration_ms > 0.0)) throw Error("session duration must be > 0");
  return static_cast<double>(char_count) / (duration_ms / 1000.0) * 60.0 / 5.0;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

SessionResult transcribe_session(const SessionLog& log, const KeyboardLayout& layout,
                                 const TranscriptionConfig& config) {
  if (log.layout_name != layout.name()) {
    throw Error(fmt::format("session was recorded on layout '{}', not '{}'", log.layout_name,
                            layout.name()));
  }
  if (log.events.empty()) throw Error("session has no events");

  const auto& events = log.events;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const PointerPhase expected = i % 2 == 0 ? PointerPhase::kDown : PointerPhase::kUp;
    if (events[i].phase != expected) throw Error(fmt::format("unmatched down/up at event {}", i));
    if (i > 0 && events[i].t_ms < events[i - 1].t_ms) {
      throw Error(fmt::format("event {} goes back in time", i));
    }
  }
  if (events.size() % 2 != 0) throw Error("unmatched down/up: last down has no up");

  SessionResult result;
  std::optional<PendingGroup> pending;
  auto flush = [&] {
    if (!pending) return;
    const auto& group = pending->key->multitap_symbols;
    result.transcribed.push_back(group[(pending->taps - 1) % group.size()]);
    pending.reset();
  };

  for (std::size_t i = 0; i < events.size(); i += 2) {
    const PointerEvent& down = events[i];
    const PointerEvent& up = events[i + 1];
    if (i > 0) result.keystroke_intervals.push_back(down.t_ms - events[i - 2].t_ms);

    const auto id = hit_test(layout, down.pos);
    const KeyDef* key = id ? layout.find_key(*id) : nullptr;
    if (key && key->is_multitap()) {
      const bool continues = pending && pending->key == key &&
                             down.t_ms - pending->last_up_ms <= config.multitap_timeout_ms;
      if (continues) {
        ++pending->taps;
      } else {
        flush();
        pending = PendingGroup{key, 1, 0.0};
      }
      pending->last_up_ms = up.t_ms;
      continue;
    }

    flush();
    if (!key) continue;
    const bool slide = down.pos.y - up.pos.y >= config.slide_threshold_mm &&
                       std::fabs(up.pos.x - down.pos.x) < config.horizontal_tolerance_mm;
    // A slide on a key without a slide symbol types its tap symbol.
    if (slide && key->slide_symbol) {
      result.transcribed.push_back(*key->slide_symbol);
    } else if (key->tap_symbol) {
      result.transcribed.push_back(*key->tap_symbol);
    }
  }
  flush();

  const double span = events.back().t_ms - events.front().t_ms;
  result.wpm = span > 0.0 ? session_wpm(result.transcribed.size(), span) : 0.0;
  result.error_distance = levenshtein(result.transcribed, log.stimulus);
  return result;
}

std::vector<LearningCurvePoint> aggregate_sessions(std::span<const SessionRecord> records) {
  std::map<std::pair<std::string, int>, std::vector<double>> groups;
  for (const SessionRecord& r : records) {
    groups[{r.log.layout_name, r.log.session_index}].push_back(r.result.wpm);
  }
  std::vector<LearningCurvePoint> points;
  points.reserve(groups.size());
  for (const auto& [key, wpms] : groups) {
    const double n = static_cast<double>(wpms.size());
    double mean = 0.0;
    for (double w : wpms) mean += w;
    mean /= n;
    double var = 0.0;
    for (double w : wpms) var += (w - mean) * (w - mean);
    points.push_back({key.first, key.second, mean, std::sqrt(var / n), wpms.size()});
  }
  return points;
}

std::string learning_curve_csv(std::span<const LearningCurvePoint> points) {
  std::string out = "layout,session_index,mean_wpm,stddev_wpm,n\n";
  for (const LearningCurvePoint& p : points) {
    out += fmt::format("{},{},{:.3f},{:.3f},{}\n", p.layout_name, p.session_index, p.mean_wpm,
                       p.stddev_wpm, p.n);
  }
  return out;
}

SessionLog synthesize_log(const Timeline& timeline, const KeyboardLayout& layout,
                          std::string_view stimulus, const SynthesisOptions& options) {
  SessionLog log;
  log.layout_name = layout.name();
  log.stimulus = std::string(stimulus);
  log.started_at = options.started_at;
  log.px_per_mm = options.px_per_mm;
  log.subject_id = options.subject_id;
  log.session_index = options.session_index;

  double offset_ms = 0.0;
  double last_up_ms = 0.0;
  bool group_open = false;
  const KeyDef* last_group_key = nullptr;

  for (const TimelineStep& step : timeline.steps) {
    if (!step.action.is_pointing()) continue;
    const KeyDef& key = layout.key(step.action.target);
    double down_ms = to_ms(step.end - step.breakdown.execution) + offset_ms;
    if (!group_open && key.is_multitap() && last_group_key == &key &&
        down_ms - last_up_ms < options.commit_gap_ms) {
      offset_ms += options.commit_gap_ms - (down_ms - last_up_ms);
      down_ms = last_up_ms + options.commit_gap_ms;
    }
    group_open = true;
    const double up_ms = to_ms(step.end) + offset_ms;

    const PointMM center = key.bounds.center();
    PointMM release = center;
    if (step.action.kind == ActionKind::kPointSlideUp) release.y -= options.slide_distance_mm;
    log.events.push_back({down_ms, PointerPhase::kDown, center});
    log.events.push_back({up_ms, PointerPhase::kUp, release});
    last_up_ms = up_ms;

    if (step.action.produced_symbol) {
      group_open = false;
      last_group_key = &key;
    }
  }

  if (!log.events.empty()) {
    const double t0 = log.events.front().t_ms;
    for (PointerEvent& ev : log.events) ev.t_ms -= t0;
  }
  return log;
}

}  // namespace keysim
