#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace keysim {

// Screen coordinates in millimeters. Origin is the top-left corner of the
// screen and y grows downward.
struct PointMM {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const PointMM&) const = default;
};

struct RectMM {
  PointMM origin;
  double width = 0.0;
  double height = 0.0;

  double left() const { return origin.x; }
  double top() const { return origin.y; }
  double right() const { return origin.x + width; }
  double bottom() const { return origin.y + height; }
  PointMM center() const { return {origin.x + width / 2.0, origin.y + height / 2.0}; }

  // Closed rectangle: points on the edge are contained.
  bool contains(PointMM p) const {
    return p.x >= left() && p.x <= right() && p.y >= top() && p.y <= bottom();
  }

  bool operator==(const RectMM&) const = default;
};

enum class LayoutKind { kQwert, kQwerty, kThreeByFour, kCustom };

std::string_view to_string(LayoutKind kind);
std::optional<LayoutKind> parse_layout_kind(std::string_view text);

// 26 lowercase letters, space, period and comma.
inline constexpr std::string_view kSupportedAlphabet = "abcdefghijklmnopqrstuvwxyz .,";

bool is_supported_symbol(char c);

// A key is either tap/slide typed (big letter on tap, small letter on
// slide-up) or multi-tap typed (n-th symbol of the group takes n taps).
// Keys with no binding at all are inert function keys (enter, delete, ...).
struct KeyDef {
  std::string id;
  RectMM bounds;
  std::optional<char> tap_symbol;
  std::optional<char> slide_symbol;
  std::vector<char> multitap_symbols;

  bool is_multitap() const { return !multitap_symbols.empty(); }
  bool has_binding() const { return tap_symbol || slide_symbol || is_multitap(); }

  bool operator==(const KeyDef&) const = default;
};

enum class ActionKind { kThink, kPointTap, kPointSlideUp };

std::string_view to_string(ActionKind kind);

struct PrimitiveAction {
  ActionKind kind = ActionKind::kThink;
  std::string target;  // empty for kThink
  // Set on the action that completes a symbol (the last tap of a multi-tap
  // burst); empty on every other action.
  std::optional<char> produced_symbol;

  static PrimitiveAction think() { return {}; }
  static PrimitiveAction tap(std::string key, std::optional<char> symbol = std::nullopt) {
    return {ActionKind::kPointTap, std::move(key), symbol};
  }
  static PrimitiveAction slide_up(std::string key, std::optional<char> symbol = std::nullopt) {
    return {ActionKind::kPointSlideUp, std::move(key), symbol};
  }

  bool is_pointing() const { return kind != ActionKind::kThink; }

  bool operator==(const PrimitiveAction&) const = default;
};

// Immutable after construction. Construction does not validate; use
// validate_layout() for that.
class KeyboardLayout {
 public:
  KeyboardLayout(std::string name, LayoutKind kind, RectMM screen, std::vector<KeyDef> keys,
                 std::string home_key);

  const std::string& name() const { return name_; }
  LayoutKind kind() const { return kind_; }
  const RectMM& screen() const { return screen_; }
  const std::vector<KeyDef>& keys() const { return keys_; }
  const std::string& home_key() const { return home_key_; }

  // nullptr when no key has this id.
  const KeyDef* find_key(std::string_view id) const;
  // Throws keysim::Error for an unknown id.
  const KeyDef& key(std::string_view id) const;

  // Same geometry and bindings under another name.
  KeyboardLayout renamed(std::string name) const;

 private:
  std::string name_;
  LayoutKind kind_;
  RectMM screen_;
  std::vector<KeyDef> keys_;
  std::string home_key_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

enum class Severity { kWarning, kError };

struct ValidationIssue {
  Severity severity = Severity::kError;
  std::string message;
  std::optional<std::string> key_id;
};

struct ValidationReport {
  bool ok = true;  // true iff no issue has Severity::kError
  std::vector<ValidationIssue> issues;
};

// QWERT, QWERTY or THREE_BY_FOUR. Throws keysim::Error("unsupported builtin")
// for kCustom.
KeyboardLayout builtin_layout(LayoutKind kind);

ValidationReport validate_layout(const KeyboardLayout& layout);

// Pointing actions that type `symbol`: one tap, one slide-up, or i+1 taps for
// the i-th member of a multi-tap group. Throws keysim::Error("no binding ...").
std::vector<PrimitiveAction> resolve_symbol(char symbol, const KeyboardLayout& layout);

// Center-to-center Euclidean distance.
double key_distance(const KeyboardLayout& layout, std::string_view a, std::string_view b);

// Key whose bounds contain p. A point on a shared edge belongs to the key
// whose origin is nearest to p, ties going to the lexicographically lowest id.
std::optional<std::string> hit_test(const KeyboardLayout& layout, PointMM p);

}  // namespace keysim
