#include "keysim/simulator.hpp"

#include <algorithm>
#include <cstdlib>

#include <fmt/core.h>

#include "keysim/error.hpp"

namespace keysim {

Timeline simulate(const ActionSequence& seq, const KeyboardLayout& layout, const MotorParams& params) {
  if (seq.layout_name != layout.name()) {
    throw Error(fmt::format("sequence was compiled for layout '{}', not '{}'", seq.layout_name,
                            layout.name()));
  }
  check_params(params);
  layout.key(layout.home_key());

  Timeline tl;
  tl.layout_name = layout.name();
  tl.symbol_count = seq.source_text.size();
  tl.steps.reserve(seq.actions.size());

  std::string thumb = layout.home_key();
  Micros clock{0};
  for (std::size_t i = 0; i < seq.actions.size(); ++i) {
    const PrimitiveAction& action = seq.actions[i];
    TimelineStep step;
    step.index = i;
    step.action = action;
    if (action.is_pointing()) step.from_key = thumb;
    step.breakdown = action_time(action, step.from_key, layout, params);
    step.start = clock;
    clock += step.breakdown.total;
    step.end = clock;
    if (action.is_pointing()) thumb = action.target;
    tl.steps.push_back(std::move(step));
  }
  tl.total = clock;
  if (tl.total.count() > 0) {
    const double seconds = static_cast<double>(tl.total.count()) / 1e6;
    tl.predicted_wpm = static_cast<double>(tl.symbol_count) / seconds * 60.0 / 5.0;
  }
  return tl;
}

Timeline predict_text(std::string_view text, const KeyboardLayout& layout, const MotorParams& params) {
  return simulate(compile_text(normalize_text(text), layout, params), layout, params);
}

std::vector<ComparisonRow> compare(std::string_view text, std::span<const KeyboardLayout> layouts,
                                   const MotorParams& params) {
  if (layouts.empty()) throw Error("compare needs at least one layout");
  const std::string normalized = normalize_text(text);
  std::vector<ComparisonRow> rows;
  rows.reserve(layouts.size());
  for (const KeyboardLayout& layout : layouts) {
    const Timeline tl = simulate(compile_text(normalized, layout, params), layout, params);
    rows.push_back({layout.name(), tl.total, tl.predicted_wpm});
  }
  std::sort(rows.begin(), rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
    if (a.total != b.total) return a.total < b.total;
    return a.layout_name < b.layout_name;
  });
  return rows;
}

std::string format_ms(Micros t) {
  const long long us = t.count();
  const long long mag = std::llabs(us);
  return fmt::format("{}{}.{:03}", us < 0 ? "-" : "", mag / 1000, mag % 1000);
}

std::string format_seconds(Micros t) {
  const long long us = t.count();
  const long long ms = (std::llabs(us) + 500) / 1000;
  return fmt::format("{}{}.{:03}", us < 0 ? "-" : "", ms / 1000, ms % 1000);
}

std::string trace_csv(const Timeline& timeline) {
  std::string out =
      "index,action,from_key,target,think_ms,eye_ms,movement_ms,execution_ms,total_ms,start_ms,end_ms\n";
  for (const TimelineStep& s : timeline.steps) {
    const ActionTimeBreakdown& b = s.breakdown;
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", s.index, to_string(s.action.kind),
                       s.from_key.value_or(""), s.action.target, format_ms(b.think), format_ms(b.eye),
                       format_ms(b.movement), format_ms(b.execution), format_ms(b.total),
                       format_ms(s.start), format_ms(s.end));
  }
  return out;
}

}  // namespace keysim
