#include "keysim/layout_io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <fmt/core.h>

#include "json.hpp"
#include "keysim/error.hpp"
#include "json_util.hpp"

namespace keysim {

using nlohmann::json;

namespace {

double millimeters(const json& obj, std::string_view field, std::string_view where) {
  const double v = detail::require_number(obj, field, where);
  const double scaled = v * 1000.0;
  if (std::fabs(scaled - std::round(scaled)) > 1e-6) {
    throw FormatError(fmt::format("{}: field '{}' has more than 3 fractional digits", where, field));
  }
  return std::round(scaled) / 1000.0;
}

char symbol_from(const json& value, std::string_view where) {
  if (!value.is_string() || value.get_ref<const std::string&>().size() != 1) {
    throw FormatError(fmt::format("{}: symbol must be a one-character string", where));
  }
  return value.get_ref<const std::string&>()[0];
}

KeyDef parse_key(const json& j, std::size_t index) {
  const std::string where = fmt::format("keys[{}]", index);
  detail::reject_unknown(j, {"id", "x_mm", "y_mm", "w_mm", "h_mm", "tap", "slide", "multitap"},
                         where);
  KeyDef key;
  key.id = detail::require_string(j, "id", where);
  key.bounds = {{millimeters(j, "x_mm", where), millimeters(j, "y_mm", where)},
                millimeters(j, "w_mm", where),
                millimeters(j, "h_mm", where)};
  if (auto it = j.find("tap"); it != j.end()) key.tap_symbol = symbol_from(*it, where + ".tap");
  if (auto it = j.find("slide"); it != j.end()) key.slide_symbol = symbol_from(*it, where + ".slide");
  if (auto it = j.find("multitap"); it != j.end()) {
    if (!it->is_array()) throw FormatError(where + ": field 'multitap' must be an array");
    for (const json& s : *it) key.multitap_symbols.push_back(symbol_from(s, where + ".multitap"));
  }
  return key;
}

std::string symbol_string(char c) { return std::string(1, c); }

}  // namespace

KeyboardLayout parse_layout_json(std::string_view text) {
  const json doc = detail::parse_json(text, "layout");
  if (!doc.is_object()) throw FormatError("layout: top level must be an object");
  detail::reject_unknown(doc, {"name", "kind", "screen", "home_key", "keys"}, "layout");

  const std::string name = detail::require_string(doc, "name", "layout");
  const std::string kind_text = detail::require_string(doc, "kind", "layout");
  const auto kind = parse_layout_kind(kind_text);
  if (!kind) throw FormatError(fmt::format("layout: unknown kind '{}'", kind_text));

  const json& screen_j = detail::require(doc, "screen", "layout");
  if (!screen_j.is_object()) throw FormatError("layout: field 'screen' must be an object");
  detail::reject_unknown(screen_j, {"w_mm", "h_mm"}, "screen");
  const RectMM screen{{0.0, 0.0}, millimeters(screen_j, "w_mm", "screen"),
                      millimeters(screen_j, "h_mm", "screen")};

  const json& keys_j = detail::require(doc, "keys", "layout");
  if (!keys_j.is_array()) throw FormatError("layout: field 'keys' must be an array");
  std::vector<KeyDef> keys;
  keys.reserve(keys_j.size());
  for (std::size_t i = 0; i < keys_j.size(); ++i) {
    if (!keys_j[i].is_object()) throw FormatError(fmt::format("keys[{}] must be an object", i));
    keys.push_back(parse_key(keys_j[i], i));
  }

  return {name, *kind, screen, std::move(keys), detail::require_string(doc, "home_key", "layout")};
}

std::string export_layout_json(const KeyboardLayout& layout) {
  json keys = json::array();
  for (const KeyDef& k : layout.keys()) {
    json kj = json::object();
    kj["id"] = k.id;
    kj["x_mm"] = k.bounds.origin.x;
    kj["y_mm"] = k.bounds.origin.y;
    kj["w_mm"] = k.bounds.width;
    kj["h_mm"] = k.bounds.height;
    if (k.tap_symbol) kj["tap"] = symbol_string(*k.tap_symbol);
    if (k.slide_symbol) kj["slide"] = symbol_string(*k.slide_symbol);
    if (k.is_multitap()) {
      json group = json::array();
      for (char c : k.multitap_symbols) group.push_back(symbol_string(c));
      kj["multitap"] = std::move(group);
    }
    keys.push_back(std::move(kj));
  }
  json doc = json::object();
  doc["name"] = layout.name();
  doc["kind"] = std::string(to_string(layout.kind()));
  doc["screen"] = {{"w_mm", layout.screen().width}, {"h_mm", layout.screen().height}};
  doc["home_key"] = layout.home_key();
  doc["keys"] = std::move(keys);
  return doc.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

KeyboardLayout load_layout_file(const std::filesystem::path& path) {
  try {
    return parse_layout_json(read_text_file(path));
  } catch (const FormatError& e) {
    throw FormatError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::optional<LayoutKind> builtin_kind_for_name(std::string_view name) {
  const auto kind = parse_layout_kind(name);
  if (kind && *kind != LayoutKind::kCustom) return kind;
  return std::nullopt;
}

KeyboardLayout load_layout(std::string_view name_or_path) {
  if (auto kind = builtin_kind_for_name(name_or_path)) return builtin_layout(*kind);
  return load_layout_file(std::filesystem::path(name_or_path));
}

}  // namespace keysim
