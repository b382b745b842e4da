#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "keysim/layout.hpp"
#include "keysim/motor.hpp"
#include "keysim/transcriber.hpp"

namespace keysim {

struct TimelineStep {
  std::size_t index = 0;
  PrimitiveAction action;
  std::optional<std::string> from_key;  // thumb position before a pointing action
  ActionTimeBreakdown breakdown;
  Micros start{0};
  Micros end{0};

  bool operator==(const TimelineStep&) const = default;
};

struct Timeline {
  std::string layout_name;
  std::vector<TimelineStep> steps;
  Micros total{0};
  std::size_t symbol_count = 0;
  double predicted_wpm = 0.0;  // 12 * symbols / seconds; 0 for a zero-length timeline

  bool operator==(const Timeline&) const = default;
};

// The thumb starts on the layout's home key and moves to each pointing
// target. Think steps and slide-ups leave the thumb where it is.
Timeline simulate(const ActionSequence& seq, const KeyboardLayout& layout, const MotorParams& params);

// simulate(compile_text(normalize_text(text))).
Timeline predict_text(std::string_view text, const KeyboardLayout& layout, const MotorParams& params);

struct ComparisonRow {
  std::string layout_name;
  Micros total{0};
  double predicted_wpm = 0.0;
};

// Ascending by total, ties broken by layout name.
std::vector<ComparisonRow> compare(std::string_view text, std::span<const KeyboardLayout> layouts,
                                   const MotorParams& params);

// "12.345": milliseconds with exactly three decimals (exact for Micros).
std::string format_ms(Micros t);
// "12.345": seconds rounded half away from zero to three decimals.
std::string format_seconds(Micros t);

// index,action,from_key,target,think_ms,eye_ms,movement_ms,execution_ms,total_ms,start_ms,end_ms
std::string trace_csv(const Timeline& timeline);

}  // namespace keysim
