#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "keysim/layout.hpp"

namespace keysim {

// Timelines are carried in integer microseconds so that sums are exact.
using Micros = std::chrono::microseconds;

Micros to_micros(double ms);
double to_ms(Micros t);

enum class Formulation {
  kWelfordHalf,  // ID = log2(A/W + 0.5), clamped at 0
  kShannonOne,   // ID = log2(A/W + 1)
};

std::string_view to_string(Formulation f);
std::optional<Formulation> parse_formulation(std::string_view text);

// Timing constants, all in milliseconds except i_m (ms/bit). tap_cost and
// slide_extra defaults are calibration seeds, and eye_* default to zero.
struct MotorParams {
  double i_m = 100.0;
  Formulation formulation = Formulation::kWelfordHalf;
  double intercept_a = 0.0;
  double tap_cost = 100.0;
  double slide_extra = 150.0;
  double think_qwerty = 500.0;
  double think_qwert = 500.0;
  double think_3x4 = 200.0;
  double eye_prep = 0.0;
  double eye_exec = 0.0;
  // Extra Think between consecutive symbols on the same multi-tap key.
  bool multitap_commit_pause = true;

  // Custom layouts use think_qwert.
  double think_for(LayoutKind kind) const;

  bool operator==(const MotorParams&) const = default;
};

// Throws keysim::Error when a field is negative or non-finite, or i_m is 0.
void check_params(const MotorParams& params);

// The numeric MotorParams fields, addressable by name for calibration and
// parameter files.
enum class ParamField {
  kIm,
  kInterceptA,
  kTapCost,
  kSlideExtra,
  kThinkQwerty,
  kThinkQwert,
  kThink3x4,
  kEyePrep,
  kEyeExec,
};

inline constexpr ParamField kAllParamFields[] = {
    ParamField::kIm,          ParamField::kInterceptA,  ParamField::kTapCost,
    ParamField::kSlideExtra,  ParamField::kThinkQwerty, ParamField::kThinkQwert,
    ParamField::kThink3x4,    ParamField::kEyePrep,     ParamField::kEyeExec,
};

std::string_view to_string(ParamField field);
std::optional<ParamField> parse_param_field(std::string_view text);
double& field_ref(MotorParams& params, ParamField field);
double field_value(const MotorParams& params, ParamField field);

// Same key names as to_string(ParamField) plus "formulation"
// ("welford"|"shannon") and "multitap_commit_pause". Missing fields keep
// their defaults; unknown fields are rejected.
MotorParams parse_params_json(std::string_view text, const MotorParams& base = {});
std::string export_params_json(const MotorParams& params);

struct ActionTimeBreakdown {
  Micros think{0};
  Micros eye{0};
  Micros movement{0};
  Micros execution{0};
  Micros total{0};  // always think + eye + movement + execution

  bool operator==(const ActionTimeBreakdown&) const = default;
};

// Bits. Throws keysim::Error("degenerate target") for W <= 0.
double index_of_difficulty(double amplitude_mm, double width_mm, Formulation formulation);

// intercept_a + i_m * ID, in milliseconds.
double fitts_mt(double amplitude_mm, double width_mm, const MotorParams& params);

// Duration of one primitive action. For pointing actions the amplitude is the
// center distance from `from_key` to the target and W is the smaller side of
// the target. Think uses the layout kind's think duration.
ActionTimeBreakdown action_time(const PrimitiveAction& action,
                                const std::optional<std::string>& from_key,
                                const KeyboardLayout& layout, const MotorParams& params);

}  // namespace keysim
