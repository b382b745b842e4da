#include "keysim/layout.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include <fmt/core.h>

#include "keysim/error.hpp"

namespace keysim {

namespace {

// Geometry is kept on a micrometer grid so exported files stay at three
// fractional digits.
double snap(double mm) { return std::round(mm * 1000.0) / 1000.0; }

RectMM rect(double x, double y, double w, double h) {
  return {{snap(x), snap(y)}, snap(w), snap(h)};
}

KeyDef tap_slide_key(std::string id, RectMM bounds, std::optional<char> tap,
                     std::optional<char> slide = std::nullopt) {
  return {std::move(id), bounds, tap, slide, {}};
}

KeyDef multitap_key(std::string id, RectMM bounds, std::string_view group) {
  return {std::move(id), bounds, std::nullopt, std::nullopt, {group.begin(), group.end()}};
}

// LU6800 portrait screen.
constexpr double kPhoneWidth = 54.102;
constexpr double kPhoneHeight = 93.98;

KeyboardLayout make_qwert() {
  constexpr double kKeyW = 10.2;
  constexpr double kKeyH = 10.7;
  constexpr double kGap = 1.0;
  constexpr double kMargin = 0.5;
  constexpr double kTop = 46.0;
  // Five 10.2 mm keys with 1 mm spacing need 55 mm, slightly more than the
  // phone's 54.102 mm, so the screen is widened to fit a 0.5 mm margin.
  constexpr double kScreenW = 5 * kKeyW + 4 * kGap + 2 * kMargin;

  // Left-half letter on tap, right-half letter on slide-up.
  struct Pair {
    char tap;
    std::optional<char> slide;
  };
  const std::array<std::array<Pair, 5>, 3> rows{{
      {{{'q', 'y'}, {'w', 'u'}, {'e', 'i'}, {'r', 'o'}, {'t', 'p'}}},
      {{{'a', 'h'}, {'s', 'j'}, {'d', 'k'}, {'f', 'l'}, {'g', std::nullopt}}},
      {{{'z', 'n'}, {'x', 'm'}, {'c', ','}, {'v', '.'}, {'b', std::nullopt}}},
  }};

  auto x_at = [&](int col) { return kMargin + col * (kKeyW + kGap); };
  auto y_at = [&](int row) { return kTop + row * (kKeyH + kGap); };

  std::vector<KeyDef> keys;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 5; ++c) {
      const Pair& p = rows[r][c];
      keys.push_back(tap_slide_key(std::string(1, p.tap), rect(x_at(c), y_at(r), kKeyW, kKeyH),
                                   p.tap, p.slide));
    }
  }
  const double bottom = y_at(3);
  keys.push_back(tap_slide_key("enter", rect(x_at(0), bottom, kKeyW, kKeyH), std::nullopt));
  keys.push_back(tap_slide_key("num", rect(x_at(1), bottom, kKeyW, kKeyH), std::nullopt));
  keys.push_back(tap_slide_key("space", rect(x_at(2), bottom, 2 * kKeyW + kGap, kKeyH), ' '));
  keys.push_back(tap_slide_key("del", rect(x_at(4), bottom, kKeyW, kKeyH), std::nullopt));

  return {"qwert", LayoutKind::kQwert, rect(0, 0, kScreenW, kPhoneHeight), std::move(keys),
          "space"};
}

KeyboardLayout make_qwerty() {
  constexpr double kKeyW = 5.1;
  constexpr double kKeyH = 7.9;
  constexpr double kGap = 0.3;
  constexpr double kPitchX = kKeyW + kGap;
  constexpr double kPitchY = kKeyH + kGap;
  constexpr double kMargin = (kPhoneWidth - (10 * kKeyW + 9 * kGap)) / 2;
  constexpr double kTop = 60.0;
  constexpr double kWideW = 1.5 * kPitchX - kGap;  // shift, del, num, enter

  struct Row {
    std::string_view letters;
    double offset;  // in key pitches
  };
  const std::array<Row, 3> rows{{{"qwertyuiop", 0.0}, {"asdfghjkl", 0.5}, {"zxcvbnm", 1.5}}};

  std::vector<KeyDef> keys;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double y = kTop + r * kPitchY;
    for (std::size_t i = 0; i < rows[r].letters.size(); ++i) {
      const char c = rows[r].letters[i];
      keys.push_back(tap_slide_key(std::string(1, c),
                                   rect(kMargin + (rows[r].offset + i) * kPitchX, y, kKeyW, kKeyH), c));
    }
  }
  const double row3 = kTop + 2 * kPitchY;
  const double right_col = kMargin + 8.5 * kPitchX;
  keys.push_back(tap_slide_key("shift", rect(kMargin, row3, kWideW, kKeyH), std::nullopt));
  keys.push_back(tap_slide_key("del", rect(right_col, row3, kWideW, kKeyH), std::nullopt));

  const double row4 = kTop + 3 * kPitchY;
  const double comma_x = kMargin + 1.5 * kPitchX;
  const double space_x = comma_x + kPitchX;
  const double period_x = kMargin + 7.5 * kPitchX;
  keys.push_back(tap_slide_key("num", rect(kMargin, row4, kWideW, kKeyH), std::nullopt));
  keys.push_back(tap_slide_key("comma", rect(comma_x, row4, kKeyW, kKeyH), ','));
  keys.push_back(tap_slide_key("space", rect(space_x, row4, period_x - kGap - space_x, kKeyH), ' '));
  keys.push_back(tap_slide_key("period", rect(period_x, row4, kKeyW, kKeyH), '.'));
  keys.push_back(tap_slide_key("enter", rect(right_col, row4, kWideW, kKeyH), std::nullopt));

  return {"qwerty", LayoutKind::kQwerty, rect(0, 0, kPhoneWidth, kPhoneHeight), std::move(keys),
          "space"};
}

KeyboardLayout make_three_by_four() {
  constexpr double kKeyW = 18.0;
  constexpr double kKeyH = 15.0;
  constexpr double kMargin = (kPhoneWidth - 3 * kKeyW) / 2;
  constexpr double kTop = 33.0;

  // ITU-T E.161 letter grouping; '.' and ',' share key 1.
  const std::array<std::pair<std::string_view, std::string_view>, 12> grid{{
      {"1", ".,"}, {"2", "abc"}, {"3", "def"},
      {"4", "ghi"}, {"5", "jkl"}, {"6", "mno"},
      {"7", "pqrs"}, {"8", "tuv"}, {"9", "wxyz"},
      {"*", ""}, {"0", " "}, {"#", ""},
  }};

  std::vector<KeyDef> keys;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto [id, group] = grid[i];
    const RectMM bounds = rect(kMargin + (i % 3) * kKeyW, kTop + (i / 3) * kKeyH, kKeyW, kKeyH);
    if (id == "0") {
      keys.push_back(tap_slide_key(std::string(id), bounds, ' '));
    } else if (group.empty()) {
      keys.push_back(tap_slide_key(std::string(id), bounds, std::nullopt));
    } else {
      keys.push_back(multitap_key(std::string(id), bounds, group));
    }
  }
  return {"3x4", LayoutKind::kThreeByFour, rect(0, 0, kPhoneWidth, kPhoneHeight), std::move(keys),
          "0"};
}

std::string quoted(char c) { return fmt::format("'{}'", c); }

// Interiors intersect; touching edges do not count.
bool overlaps(const RectMM& a, const RectMM& b) {
  constexpr double kEps = 1e-9;
  return a.left() < b.right() - kEps && b.left() < a.right() - kEps && a.top() < b.bottom() - kEps &&
         b.top() < a.bottom() - kEps;
}

bool within(const RectMM& inner, const RectMM& outer) {
  constexpr double kEps = 1e-9;
  return inner.left() >= outer.left() - kEps && inner.top() >= outer.top() - kEps &&
         inner.right() <= outer.right() + kEps && inner.bottom() <= outer.bottom() + kEps;
}

}  // namespace

std::string_view to_string(LayoutKind kind) {
  switch (kind) {
    case LayoutKind::kQwert: return "qwert";
    case LayoutKind::kQwerty: return "qwerty";
    case LayoutKind::kThreeByFour: return "3x4";
    case LayoutKind::kCustom: return "custom";
  }
  return "custom";
}

std::optional<LayoutKind> parse_layout_kind(std::string_view text) {
  for (LayoutKind k : {LayoutKind::kQwert, LayoutKind::kQwerty, LayoutKind::kThreeByFour,
                       LayoutKind::kCustom}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::kThink: return "think";
    case ActionKind::kPointTap: return "tap";
    case ActionKind::kPointSlideUp: return "slide_up";
  }
  return "think";
}

bool is_supported_symbol(char c) { return kSupportedAlphabet.find(c) != std::string_view::npos; }

KeyboardLayout::KeyboardLayout(std::string name, LayoutKind kind, RectMM screen,
                               std::vector<KeyDef> keys, std::string home_key)
    : name_(std::move(name)),
      kind_(kind),
      screen_(screen),
      keys_(std::move(keys)),
      home_key_(std::move(home_key)) {
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    index_.emplace(keys_[i].id, i);  // first definition wins for duplicate ids
  }
}

const KeyDef* KeyboardLayout::find_key(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &keys_[it->second];
}

const KeyDef& KeyboardLayout::key(std::string_view id) const {
  if (const KeyDef* k = find_key(id)) return *k;
  throw Error(fmt::format("unknown key '{}' in layout '{}'", id, name_));
}

KeyboardLayout KeyboardLayout::renamed(std::string name) const {
  return {std::move(name), kind_, screen_, keys_, home_key_};
}

KeyboardLayout builtin_layout(LayoutKind kind) {
  switch (kind) {
    case LayoutKind::kQwert: return make_qwert();
    case LayoutKind::kQwerty: return make_qwerty();
    case LayoutKind::kThreeByFour: return make_three_by_four();
    case LayoutKind::kCustom: break;
  }
  throw Error("unsupported builtin");
}

ValidationReport validate_layout(const KeyboardLayout& layout) {
  ValidationReport report;
  auto add = [&](Severity sev, std::string msg, std::optional<std::string> key = std::nullopt) {
    if (sev == Severity::kError) report.ok = false;
    report.issues.push_back({sev, std::move(msg), std::move(key)});
  };

  const RectMM& screen = layout.screen();
  if (!(screen.width > 0) || !(screen.height > 0)) {
    add(Severity::kError, "screen has non-positive size");
  }

  std::map<std::string, int, std::less<>> id_counts;
  std::array<int, 256> binding_counts{};
  const auto& keys = layout.keys();

  for (const KeyDef& k : keys) {
    if (++id_counts[k.id] == 2) add(Severity::kError, fmt::format("duplicate key id '{}'", k.id), k.id);
    if (!(k.bounds.width > 0) || !(k.bounds.height > 0)) {
      add(Severity::kError, fmt::format("key '{}' has non-positive size", k.id), k.id);
    }
    if (!within(k.bounds, screen)) {
      add(Severity::kError, fmt::format("key '{}' lies outside the screen", k.id), k.id);
    }
    if (k.is_multitap() && (k.tap_symbol || k.slide_symbol)) {
      add(Severity::kError,
          fmt::format("key '{}' mixes multi-tap and tap/slide bindings", k.id), k.id);
    }
    if (k.slide_symbol && !k.tap_symbol) {
      add(Severity::kWarning, fmt::format("key '{}' has a slide symbol but no tap symbol", k.id),
          k.id);
    }

    auto count = [&](char c) {
      if (!is_supported_symbol(c)) {
        add(Severity::kError, fmt::format("unsupported symbol {} on key '{}'", quoted(c), k.id), k.id);
        return;
      }
      ++binding_counts[static_cast<unsigned char>(c)];
    };
    if (k.tap_symbol) count(*k.tap_symbol);
    if (k.slide_symbol) count(*k.slide_symbol);
    for (char c : k.multitap_symbols) count(c);
  }

  for (std::size_t i = 0; i < keys.size(); ++i) {
    for (std::size_t j = i + 1; j < keys.size(); ++j) {
      if (overlaps(keys[i].bounds, keys[j].bounds)) {
        add(Severity::kError, fmt::format("keys '{}' and '{}' overlap", keys[i].id, keys[j].id),
            keys[i].id);
      }
    }
  }

  for (char c : kSupportedAlphabet) {
    const int n = binding_counts[static_cast<unsigned char>(c)];
    if (n == 0) add(Severity::kError, fmt::format("unreachable symbol {}", quoted(c)));
    if (n > 1) add(Severity::kError, fmt::format("duplicate binding {}", quoted(c)));
  }

  if (!layout.find_key(layout.home_key())) {
    add(Severity::kError, fmt::format("home key '{}' not found", layout.home_key()));
  }
  return report;
}

std::vector<PrimitiveAction> resolve_symbol(char symbol, const KeyboardLayout& layout) {
  for (const KeyDef& k : layout.keys()) {
    if (k.tap_symbol == symbol) return {PrimitiveAction::tap(k.id, symbol)};
    if (k.slide_symbol == symbol) return {PrimitiveAction::slide_up(k.id, symbol)};
    auto it = std::find(k.multitap_symbols.begin(), k.multitap_symbols.end(), symbol);
    if (it != k.multitap_symbols.end()) {
      const auto taps = static_cast<std::size_t>(it - k.multitap_symbols.begin()) + 1;
      std::vector<PrimitiveAction> burst(taps, PrimitiveAction::tap(k.id));
      burst.back().produced_symbol = symbol;
      return burst;
    }
  }
  throw Error(fmt::format("no binding for {} in layout '{}'", quoted(symbol), layout.name()));
}

double key_distance(const KeyboardLayout& layout, std::string_view a, std::string_view b) {
  const PointMM pa = layout.key(a).bounds.center();
  const PointMM pb = layout.key(b).bounds.center();
  return std::hypot(pa.x - pb.x, pa.y - pb.y);
}

std::optional<std::string> hit_test(const KeyboardLayout& layout, PointMM p) {
  if (!layout.screen().contains(p)) return std::nullopt;
  const KeyDef* best = nullptr;
  double best_d = 0.0;
  for (const KeyDef& k : layout.keys()) {
    if (!k.bounds.contains(p)) continue;
    const double d = std::hypot(p.x - k.bounds.origin.x, p.y - k.bounds.origin.y);
    if (!best || d < best_d || (d == best_d && k.id < best->id)) {
      best = &k;
      best_d = d;
    }
  }
  if (!best) return std::nullopt;
  return best->id;
}

}  // namespace keysim
