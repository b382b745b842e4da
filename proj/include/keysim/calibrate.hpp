#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "keysim/layout.hpp"
#include "keysim/motor.hpp"

namespace keysim {

struct Observation {
  std::string text;
  KeyboardLayout layout;
  double observed_ms = 0.0;
};

struct CalibrationOptions {
  int max_sweeps = 200;
  double relative_tolerance = 1e-9;  // stop when a sweep improves SSE by less than this fraction
  double line_search_tolerance_ms = 1e-4;
};

struct ObservationFit {
  std::string layout_name;
  double observed_ms = 0.0;
  double predicted_ms = 0.0;
};

struct CalibrationResult {
  MotorParams params;
  double initial_sse = 0.0;  // ms^2
  double final_sse = 0.0;
  std::vector<double> sse_history;  // after each sweep, non-increasing
  int sweeps = 0;
  std::vector<ObservationFit> fits;
};

// Search interval: [10, 500] ms/bit for i_m, [0, 5000] ms otherwise.
std::pair<double, double> calibration_bounds(ParamField field);

// Least-squares fit of the free fields so predicted totals match observed
// totals. Coordinate descent in the order given by `free`, golden-section
// search per coordinate; a coordinate only moves when the SSE drops.
CalibrationResult calibrate(std::span<const Observation> observations,
                            std::span<const ParamField> free, const MotorParams& seed,
                            const CalibrationOptions& options = {});

}  // namespace keysim
