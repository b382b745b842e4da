#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "keysim/layout.hpp"

namespace keysim {

// JSON layout files:
//   {name, kind, screen:{w_mm,h_mm}, home_key,
//    keys:[{id, x_mm, y_mm, w_mm, h_mm, tap?, slide?, multitap?:[...]}]}
// Millimeter values carry at most three fractional digits. Unknown fields are
// rejected. Parsing does not validate geometry or bindings.
KeyboardLayout parse_layout_json(std::string_view text);
std::string export_layout_json(const KeyboardLayout& layout);

KeyboardLayout load_layout_file(const std::filesystem::path& path);

// "qwert", "qwerty" or "3x4".
std::optional<LayoutKind> builtin_kind_for_name(std::string_view name);

// A built-in name, otherwise a path to a layout file.
KeyboardLayout load_layout(std::string_view name_or_path);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace keysim
