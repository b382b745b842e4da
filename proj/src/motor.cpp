#include "keysim/motor.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "json.hpp"
#include "json_util.hpp"
#include "keysim/error.hpp"

namespace keysim {

Micros to_micros(double ms) { return Micros{std::llround(ms * 1000.0)}; }

double to_ms(Micros t) { return static_cast<double>(t.count()) / 1000.0; }

std::string_view to_string(Formulation f) {
  return f == Formulation::kShannonOne ? "shannon" : "welford";
}

std::optional<Formulation> parse_formulation(std::string_view text) {
  if (text == "welford") return Formulation::kWelfordHalf;
  if (text == "shannon") return Formulation::kShannonOne;
  return std::nullopt;
}

double MotorParams::think_for(LayoutKind kind) const {
  switch (kind) {
    case LayoutKind::kQwerty: return think_qwerty;
    case LayoutKind::kThreeByFour: return think_3x4;
    case LayoutKind::kQwert:
    case LayoutKind::kCustom: break;
  }
  return think_qwert;
}

std::string_view to_string(ParamField field) {
  switch (field) {
    case ParamField::kIm: return "i_m";
    case ParamField::kInterceptA: return "intercept_a";
    case ParamField::kTapCost: return "tap_cost";
    case ParamField::kSlideExtra: return "slide_extra";
    case ParamField::kThinkQwerty: return "think_qwerty";
    case ParamField::kThinkQwert: return "think_qwert";
    case ParamField::kThink3x4: return "think_3x4";
    case ParamField::kEyePrep: return "eye_prep";
    case ParamField::kEyeExec: return "eye_exec";
  }
  return "";
}

std::optional<ParamField> parse_param_field(std::string_view text) {
  for (ParamField f : kAllParamFields) {
    if (to_string(f) == text) return f;
  }
  return std::nullopt;
}

double& field_ref(MotorParams& p, ParamField field) {
  switch (field) {
    case ParamField::kIm: return p.i_m;
    case ParamField::kInterceptA: return p.intercept_a;
    case ParamField::kTapCost: return p.tap_cost;
    case ParamField::kSlideExtra: return p.slide_extra;
    case ParamField::kThinkQwerty: return p.think_qwerty;
    case ParamField::kThinkQwert: return p.think_qwert;
    case ParamField::kThink3x4: return p.think_3x4;
    case ParamField::kEyePrep: return p.eye_prep;
    case ParamField::kEyeExec: return p.eye_exec;
  }
  return p.i_m;
}

double field_value(const MotorParams& p, ParamField field) {
  return field_ref(const_cast<MotorParams&>(p), field);
}

void check_params(const MotorParams& params) {
  for (ParamField f : kAllParamFields) {
    const double v = field_value(params, f);
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(fmt::format("parameter '{}' must be a finite value >= 0", to_string(f)));
    }
  }
  if (!(params.i_m > 0.0)) throw Error("parameter 'i_m' must be > 0");
}

MotorParams parse_params_json(std::string_view text, const MotorParams& base) {
  const auto doc = detail::parse_json(text, "params");
  if (!doc.is_object()) throw FormatError("params: top level must be an object");

  MotorParams params = base;
  for (const auto& [key, value] : doc.items()) {
    if (key == "formulation") {
      const auto f = value.is_string() ? parse_formulation(value.get<std::string>()) : std::nullopt;
      if (!f) throw FormatError("params: 'formulation' must be \"welford\" or \"shannon\"");
      params.formulation = *f;
    } else if (key == "multitap_commit_pause") {
      if (!value.is_boolean()) throw FormatError("params: 'multitap_commit_pause' must be a boolean");
      params.multitap_commit_pause = value.get<bool>();
    } else if (const auto field = parse_param_field(key)) {
      if (!value.is_number()) throw FormatError(fmt::format("params: field '{}' must be a number", key));
      field_ref(params, *field) = value.get<double>();
    } else {
      throw FormatError(fmt::format("params: unknown field '{}'", key));
    }
  }
  try {
    check_params(params);
  } catch (const Error& e) {
    throw FormatError(fmt::format("params: {}", e.what()));
  }
  return params;
}

std::string export_params_json(const MotorParams& params) {
  nlohmann::ordered_json doc;
  for (ParamField f : kAllParamFields) doc[std::string(to_string(f))] = field_value(params, f);
  doc["formulation"] = std::string(to_string(params.formulation));
  doc["multitap_commit_pause"] = params.multitap_commit_pause;
  return doc.dump(2) + "\n";
}

double index_of_difficulty(double amplitude_mm, double width_mm, Formulation formulation) {
  if (!(width_mm > 0.0) || !std::isfinite(width_mm)) throw Error("degenerate target");
  if (!(amplitude_mm >= 0.0) || !std::isfinite(amplitude_mm)) throw Error("negative amplitude");
  const double ratio = amplitude_mm / width_mm;
  if (formulation == Formulation::kShannonOne) return std::log2(ratio + 1.0);
  // Negative below A = W/2 (e.g. repeated taps on one key); clamp to zero.
  return std::max(0.0, std::log2(ratio + 0.5));
}

double fitts_mt(double amplitude_mm, double width_mm, const MotorParams& params) {
  return params.intercept_a +
         params.i_m * index_of_difficulty(amplitude_mm, width_mm, params.formulation);
}

ActionTimeBreakdown action_time(const PrimitiveAction& action,
                                const std::optional<std::string>& from_key,
                                const KeyboardLayout& layout, const MotorParams& params) {
  check_params(params);
  ActionTimeBreakdown b;
  if (action.kind == ActionKind::kThink) {
    b.think = to_micros(params.think_for(layout.kind()));
  } else {
    if (!from_key) throw Error("pointing action without a starting key");
    const KeyDef& target = layout.key(action.target);
    const double amplitude = key_distance(layout, *from_key, action.target);
    const double width = std::min(target.bounds.width, target.bounds.height);
    b.eye = to_micros(params.eye_prep) + to_micros(params.eye_exec);
    b.movement = to_micros(fitts_mt(amplitude, width, params));
    b.execution = to_micros(params.tap_cost);
    if (action.kind == ActionKind::kPointSlideUp) b.execution += to_micros(params.slide_extra);
  }
  b.total = b.think + b.eye + b.movement + b.execution;
  return b;
}

}  // namespace keysim
