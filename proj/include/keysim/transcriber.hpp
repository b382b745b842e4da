#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "keysim/layout.hpp"
#include "keysim/motor.hpp"

namespace keysim {

struct ActionSequence {
  std::string layout_name;
  std::vector<PrimitiveAction> actions;
  std::string source_text;

  bool operator==(const ActionSequence&) const = default;
};

// Lowercases, maps whitespace to single spaces, drops everything outside the
// supported alphabet and trims both ends. Throws keysim::Error("no supported
// content") when nothing is left.
std::string normalize_text(std::string_view raw);

// One Think before each symbol followed by its pointing actions. When
// params.multitap_commit_pause is set, two consecutive symbols on the same
// multi-tap key get one more Think between their bursts.
ActionSequence compile_text(std::string_view text, const KeyboardLayout& layout,
                            const MotorParams& params);

}  // namespace keysim
