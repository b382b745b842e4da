#include <random>

#include "doctest.h"
#include "keysim/error.hpp"
#include "keysim/layout_io.hpp"
#include "keysim/simulator.hpp"
#include "keysim/transcriber.hpp"
#include "test_support.hpp"

using namespace keysim;
using keysim::test::qwert;
using keysim::test::qwerty;
using keysim::test::three_by_four;

namespace {

const std::string& dinner_text() {
  static const std::string text = normalize_text(read_text_file(keysim::test::fixture("table4.txt")));
  return text;
}

std::vector<const KeyboardLayout*> builtins() { return {&qwert(), &qwerty(), &three_by_four()}; }

}  // namespace

TEST_CASE("two taps on 'a' from the space bar") {
  // Space center (33.6, 86.45), a center (5.6, 63.05): A = 36.4905 mm, W = 10.2 mm.
  const Timeline tl = predict_text("aa", qwert(), {});
  CHECK(tl.symbol_count == 2);
  REQUIRE(tl.steps.size() == 4);
  CHECK(tl.steps[1].from_key == "space");
  CHECK(to_ms(tl.steps[1].breakdown.movement) == doctest::Approx(202.769).epsilon(1e-6));
  CHECK(tl.steps[3].from_key == "a");
  CHECK(tl.steps[3].breakdown.movement == Micros{0});
  CHECK(to_ms(tl.total) == doctest::Approx(1402.769).epsilon(1e-6));
}

TEST_CASE("zero-cost parameters give a zero timeline") {
  MotorParams p;
  p.i_m = 1e-9;
  p.tap_cost = 0;
  p.slide_extra = 0;
  p.think_qwert = 0;
  p.think_qwerty = 0;
  p.think_3x4 = 0;
  const Timeline tl = predict_text("hello", qwert(), p);
  CHECK(tl.total == Micros{0});
  CHECK(tl.predicted_wpm == 0.0);
}

TEST_CASE("dinner sentence totals with default parameters") {
  REQUIRE(dinner_text() == "thanks for your dinner. take care.");
  REQUIRE(dinner_text().size() == 34);

  const double expected_ms[] = {26990.0958, 27253.6188, 17808.5154};
  const auto layouts = builtins();
  for (std::size_t i = 0; i < layouts.size(); ++i) {
    CAPTURE(layouts[i]->name());
    const Timeline tl = predict_text(dinner_text(), *layouts[i], {});
    CHECK(tl.symbol_count == 34);
    CHECK(to_ms(tl.total) == doctest::Approx(expected_ms[i]).epsilon(0.05 / expected_ms[i]));
    CHECK(tl.predicted_wpm == doctest::Approx(12.0 * 34 / (to_ms(tl.total) / 1000.0)));
  }
}

TEST_CASE("case and spacing do not change the prediction") {
  for (const KeyboardLayout* kb : builtins()) {
    CHECK(predict_text("A", *kb, {}).total == predict_text("a", *kb, {}).total);
    CHECK(predict_text("Take  Care.", *kb, {}).total == predict_text("take care.", *kb, {}).total);
  }
}

TEST_CASE("empty text is rejected") {
  CHECK_THROWS_WITH_AS(predict_text("", qwert(), {}), "no supported content", Error);
  CHECK_THROWS_WITH_AS(predict_text("!!!", qwert(), {}), "no supported content", Error);
}

TEST_CASE("sequence and layout must match") {
  const ActionSequence seq = compile_text("a", qwert(), {});
  CHECK_THROWS_AS(simulate(seq, qwerty(), {}), Error);
}

TEST_CASE("compare") {
  SUBCASE("single layout") {
    const std::vector<KeyboardLayout> one{qwert()};
    const auto rows = compare("hello", one, {});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].layout_name == "qwert");
    CHECK(rows[0].total == predict_text("hello", qwert(), {}).total);
  }
  SUBCASE("identical layouts under two names tie and sort by name") {
    const std::vector<KeyboardLayout> twins{qwert().renamed("zeta"), qwert().renamed("alpha")};
    const auto rows = compare(dinner_text(), twins, {});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].total == rows[1].total);
    CHECK(rows[0].layout_name == "alpha");
    CHECK(rows[1].layout_name == "zeta");
  }
  SUBCASE("sorted ascending") {
    const std::vector<KeyboardLayout> all{qwert(), qwerty(), three_by_four()};
    const auto rows = compare(dinner_text(), all, {});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].total <= rows[1].total);
    CHECK(rows[1].total <= rows[2].total);
  }
  SUBCASE("no layouts") {
    CHECK_THROWS_AS(compare("a", std::span<const KeyboardLayout>{}, {}), Error);
  }
}

TEST_CASE("timeline invariants on random texts") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> ms(0.0, 700.0);
  for (int i = 0; i < 150; ++i) {
    const std::string text = keysim::test::random_text(rng, 40);
    MotorParams p;
    p.i_m = 10.0 + ms(rng);
    p.tap_cost = ms(rng);
    p.slide_extra = ms(rng);
    p.eye_prep = ms(rng) / 10.0;
    for (const KeyboardLayout* kb : builtins()) {
      const Timeline tl = predict_text(text, *kb, p);
      CHECK(tl.symbol_count == text.size());
      Micros clock{0};
      Micros sum{0};
      for (const TimelineStep& s : tl.steps) {
        CHECK(s.start == clock);
        CHECK(s.end == s.start + s.breakdown.total);
        CHECK(s.breakdown.total >= Micros{0});
        clock = s.end;
        sum += s.breakdown.total;
      }
      CHECK(tl.total == clock);
      CHECK(tl.total == sum);
      CHECK(predict_text(text, *kb, p) == tl);
    }
  }
}

TEST_CASE("appending text never shortens the prediction") {
  std::mt19937 rng(5);
  for (int i = 0; i < 200; ++i) {
    const std::string a = keysim::test::random_text(rng, 20);
    const std::string b = keysim::test::random_text(rng, 20);
    for (const KeyboardLayout* kb : builtins()) {
      CHECK(predict_text(a + b, *kb, {}).total >= predict_text(a, *kb, {}).total);
    }
  }
}

TEST_CASE("totals add up across a boundary") {
  std::mt19937 rng(17);
  for (int i = 0; i < 200; ++i) {
    const std::string a = keysim::test::random_text(rng, 20);
    const std::string b = keysim::test::random_text(rng, 20);
    for (const KeyboardLayout* kb : builtins()) {
      const MotorParams p;
      const Micros ta = predict_text(a, *kb, p).total;
      const Timeline tb = predict_text(b, *kb, p);

      {
        // Exact when the first part ends on the home key. Compiled directly: normalization would trim the trailing space.
        const std::string first = a + " ";
        const Micros t_first = simulate(compile_text(first, *kb, p), *kb, p).total;
        const Micros joined = simulate(compile_text(first + b, *kb, p), *kb, p).total;
        CHECK(joined == t_first + tb.total);
      }
      {
        // Otherwise only the first movement of the second part changes.
        const Timeline joined = simulate(compile_text(a + b, *kb, p), *kb, p);
        const std::string last_key = resolve_symbol(a.back(), *kb).front().target;
        const std::string next_key = resolve_symbol(b.front(), *kb).front().target;
        const Micros fresh_move = action_time(PrimitiveAction::tap(next_key), kb->home_key(), *kb, p).movement;
        const Micros joined_move = action_time(PrimitiveAction::tap(next_key), last_key, *kb, p).movement;
        Micros pause{0};
        if (last_key == next_key && kb->key(next_key).is_multitap()) pause = to_micros(p.think_for(kb->kind()));
        CHECK(joined.total == ta + tb.total - fresh_move + joined_move + pause);
      }
    }
  }
}

TEST_CASE("format helpers") {
  CHECK(format_ms(Micros{1402769}) == "1402.769");
  CHECK(format_ms(Micros{5}) == "0.005");
  CHECK(format_ms(Micros{0}) == "0.000");
  CHECK(format_seconds(Micros{26990096}) == "26.990");
  CHECK(format_seconds(Micros{1500}) == "0.002");
  CHECK(format_seconds(Micros{1499}) == "0.001");
  CHECK(format_seconds(Micros{999999500}) == "1000.000");
}

TEST_CASE("trace CSV totals match the timeline") {
  const Timeline tl = predict_text("hey you", qwerty(), {});
  const std::string csv = trace_csv(tl);
  CHECK(csv.rfind("index,action,from_key,target,think_ms,eye_ms,movement_ms,execution_ms,total_ms,start_ms,end_ms\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == tl.steps.size() + 1);
  CHECK(csv.find("\n0,think,,,500.000,0.000,0.000,0.000,500.000,0.000,500.000\n") != std::string::npos);
  CHECK(csv.rfind("," + format_ms(tl.total) + "\n") == csv.size() - format_ms(tl.total).size() - 2);
}
