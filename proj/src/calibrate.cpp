#include "keysim/calibrate.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "keysim/error.hpp"
#include "keysim/simulator.hpp"
#include "keysim/transcriber.hpp"

namespace keysim {

namespace {

struct Problem {
  std::span<const Observation> observations;
  std::vector<ActionSequence> sequences;

  std::vector<double> predictions(const MotorParams& p) const {
    std::vector<double> out;
    out.reserve(sequences.size());
    for (std::size_t i = 0; i < sequences.size(); ++i) {
      out.push_back(to_ms(simulate(sequences[i], observations[i].layout, p).total));
    }
    return out;
  }

  double sse(const MotorParams& p) const {
    const std::vector<double> pred = predictions(p);
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const double r = pred[i] - observations[i].observed_ms;
      s += r * r;
    }
    return s;
  }
};

// Minimizes f over [lo, hi] assuming unimodality.
template <typename F>
double golden_section(F&& f, double lo, double hi, double tolerance) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tolerance) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2.0;
}

}  // namespace

std::pair<double, double> calibration_bounds(ParamField field) {
  if (field == ParamField::kIm) return {10.0, 500.0};
  return {0.0, 5000.0};
}

CalibrationResult calibrate(std::span<const Observation> observations,
                            std::span<const ParamField> free, const MotorParams& seed,
                            const CalibrationOptions& options) {
  if (observations.empty()) throw Error("calibration needs at least one observation");
  if (free.empty()) throw Error("no free fields to calibrate");
  check_params(seed);

  Problem problem{observations, {}};
  for (const Observation& obs : observations) {
    problem.sequences.push_back(compile_text(normalize_text(obs.text), obs.layout, seed));
  }

  CalibrationResult result;
  result.params = seed;
  for (ParamField f : free) {
    const auto [lo, hi] = calibration_bounds(f);
    double& v = field_ref(result.params, f);
    v = std::clamp(v, lo, hi);
  }
  double best = problem.sse(result.params);
  result.initial_sse = best;

  while (best > 0.0 && result.sweeps < options.max_sweeps) {
    const double before = best;
    for (ParamField f : free) {
      const auto [lo, hi] = calibration_bounds(f);
      MotorParams trial = result.params;
      double& slot = field_ref(trial, f);
      const double candidate = golden_section(
          [&](double x) {
            slot = x;
            return problem.sse(trial);
          },
          lo, hi, options.line_search_tolerance_ms);
      slot = candidate;
      const double s = problem.sse(trial);
      if (s < best) {
        best = s;
        result.params = trial;
      }
    }
    ++result.sweeps;
    result.sse_history.push_back(best);
    if ((before - best) / before < options.relative_tolerance) break;
  }
  result.final_sse = best;

  const std::vector<double> pred = problem.predictions(result.params);
  for (std::size_t i = 0; i < observations.size(); ++i) {
    result.fits.push_back({observations[i].layout.name(), observations[i].observed_ms, pred[i]});
  }
  return result;
}

}  // namespace keysim
