#include "keysim/transcriber.hpp"

#include <cctype>

#include "keysim/error.hpp"

namespace keysim {

std::string normalize_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char ch : raw) {
    const auto uc = static_cast<unsigned char>(ch);
    if (std::isspace(uc)) {
      if (!out.empty() && out.back() != ' ') out.push_back(' ');
      continue;
    }
    const char c = static_cast<char>(std::tolower(uc));
    if (c != ' ' && is_supported_symbol(c)) out.push_back(c);
  }
  if (!out.empty() && out.back() == ' ') out.pop_back();
  if (out.empty()) throw Error("no supported content");
  return out;
}

ActionSequence compile_text(std::string_view text, const KeyboardLayout& layout,
                            const MotorParams& params) {
  ActionSequence seq{layout.name(), {}, std::string(text)};
  seq.actions.reserve(text.size() * 3);

  const KeyDef* previous_key = nullptr;
  for (char symbol : text) {
    const std::vector<PrimitiveAction> burst = resolve_symbol(symbol, layout);
    const KeyDef& key = layout.key(burst.front().target);
    if (params.multitap_commit_pause && key.is_multitap() && previous_key == &key) {
      seq.actions.push_back(PrimitiveAction::think());
    }
    seq.actions.push_back(PrimitiveAction::think());
    seq.actions.insert(seq.actions.end(), burst.begin(), burst.end());
    previous_key = &key;
  }
  return seq;
}

}  // namespace keysim
