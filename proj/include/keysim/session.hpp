#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "keysim/layout.hpp"
#include "keysim/simulator.hpp"

namespace keysim {

enum class PointerPhase { kDown, kUp };

struct PointerEvent {
  double t_ms = 0.0;  // since session start
  PointerPhase phase = PointerPhase::kDown;
  PointMM pos;

  bool operator==(const PointerEvent&) const = default;
};

// One typing session as exported by the typing harness. Positions are held in
// millimeters; the file stores pixels and px_per_mm.
struct SessionLog {
  std::string layout_name;
  std::string stimulus;
  std::string started_at;  // ISO-8601
  double px_per_mm = 1.0;
  std::vector<PointerEvent> events;
  std::string subject_id;
  int session_index = 1;  // 1-based
  bool incomplete = false;

  bool operator==(const SessionLog&) const = default;
};

// Session log file, version 1:
//   {version:1, layout, stimulus, started_at, px_per_mm, subject_id,
//    session_index, events:[{t_ms, phase:"down"|"up", x_px, y_px}], incomplete?}
SessionLog parse_session_json(std::string_view text);
std::string export_session_json(const SessionLog& log);
SessionLog load_session_file(const std::filesystem::path& path);

// Gesture classification thresholds.
struct TranscriptionConfig {
  double slide_threshold_mm = 4.0;        // minimum upward travel for a slide-up
  double horizontal_tolerance_mm = 6.0;   // maximum sideways travel for a slide-up
  double multitap_timeout_ms = 1000.0;    // max up-to-down gap that still cycles a group
};

struct SessionResult {
  std::string transcribed;
  double wpm = 0.0;
  std::size_t error_distance = 0;  // Levenshtein distance to the stimulus
  std::vector<double> keystroke_intervals;  // ms between consecutive downs

  bool operator==(const SessionResult&) const = default;
};

// Pairs downs with ups, resolves keys by hit-testing the down position and
// replays tap / slide-up / multi-tap semantics. wpm is measured from the
// first down to the last up (0 for a zero-length span).
SessionResult transcribe_session(const SessionLog& log, const KeyboardLayout& layout,
                                 const TranscriptionConfig& config = {});

// 12 * chars / seconds. Throws keysim::Error for a non-positive duration.
double session_wpm(std::size_t char_count, double duration_ms);

std::size_t levenshtein(std::string_view a, std::string_view b);

struct SessionRecord {
  SessionLog log;
  SessionResult result;
};

struct LearningCurvePoint {
  std::string layout_name;
  int session_index = 0;
  double mean_wpm = 0.0;
  double stddev_wpm = 0.0;  // population standard deviation
  std::size_t n = 0;

  bool operator==(const LearningCurvePoint&) const = default;
};

// One point per (layout, session_index), sorted by layout then session index.
std::vector<LearningCurvePoint> aggregate_sessions(std::span<const SessionRecord> records);

// layout,session_index,mean_wpm,stddev_wpm,n
std::string learning_curve_csv(std::span<const LearningCurvePoint> points);

struct SynthesisOptions {
  double px_per_mm = 10.0;
  double slide_distance_mm = 6.0;
  // Minimum up-to-down gap inserted between two symbols on the same
  // multi-tap key so that a transcriber with a shorter timeout commits.
  double commit_gap_ms = 1200.0;
  std::string subject_id = "synthetic";
  int session_index = 1;
  std::string started_at = "1970-01-01T00:00:00Z";
};

// Replays a simulated timeline as a pointer log: each pointing step becomes
// a down at the target center once thinking and movement are done and an up
// at the end of the step (6 mm higher for a slide-up).
SessionLog synthesize_log(const Timeline& timeline, const KeyboardLayout& layout,
                          std::string_view stimulus, const SynthesisOptions& options = {});

}  // namespace keysim
