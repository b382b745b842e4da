#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "keysim/cli.hpp"
#include "keysim/layout_io.hpp"
#include "keysim/motor.hpp"
#include "keysim/simulator.hpp"
#include "test_support.hpp"

using namespace keysim;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("keysim-cli-" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& contents) const {
    std::ofstream(path / name) << contents;
    return (path / name).string();
  }
  std::string read(const std::string& name) const { return read_text_file(path / name); }
};

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("predict prints the total and rate") {
  const Run r = run({"predict", "--layout", "qwert", "--text", "aa"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out ==
        "layout         qwert\n"
        "symbols        2\n"
        "total          1.403 s\n"
        "predicted wpm  17.109\n");
}

TEST_CASE("predict reads text files and emits CSV") {
  const Run r = run({"predict", "--layout", "3x4", "--text-file", keysim::test::fixture("table4.txt"),
                     "--format", "csv"});
  CHECK(r.code == cli::kExitOk);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 2);
  CHECK(l[0] == "layout,symbols,total_s,predicted_wpm");
  CHECK(l[1].rfind("3x4,34,17.809,", 0) == 0);
}

TEST_CASE("predict is deterministic") {
  const std::vector<std::string> args{"predict", "--layout", "qwerty", "--text-file",
                                      keysim::test::fixture("table4.txt")};
  CHECK(run(args).out == run(args).out);
}

TEST_CASE("trace file sums to the printed total") {
  TempDir tmp;
  const std::string trace = (tmp.path / "trace.csv").string();
  const Run r = run({"predict", "--text", "hello there", "--trace", trace, "--format", "csv"});
  REQUIRE(r.code == cli::kExitOk);

  long long total_us = 0;
  const auto rows = lines(tmp.read("trace.csv"));
  REQUIRE(rows.size() > 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::vector<std::string> cells;
    std::istringstream in(rows[i]);
    for (std::string c; std::getline(in, c, ',');) cells.push_back(c);
    REQUIRE(cells.size() == 11);
    total_us += std::llround(std::stod(cells[8]) * 1000.0);
  }
  const std::string row = lines(r.out)[1];
  CHECK(row.rfind("qwert,11,", 0) == 0);
  const std::string total_s = row.substr(9, row.find(',', 9) - 9);
  CHECK(total_s == format_seconds(Micros{total_us}));
}

TEST_CASE("compare ranks three layouts by default") {
  const Run r = run({"compare", "--text-file", keysim::test::fixture("table4.txt"), "--format", "csv"});
  CHECK(r.code == cli::kExitOk);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 4);
  CHECK(l[0] == "rank,layout,total_s,predicted_wpm");
  CHECK(l[1].rfind("1,3x4,17.809,", 0) == 0);
  CHECK(l[2].rfind("2,qwert,26.990,", 0) == 0);
  CHECK(l[3].rfind("3,qwerty,27.254,", 0) == 0);

  const Run text = run({"compare", "--text", "take care", "--layouts", "qwerty,qwert"});
  CHECK(text.code == cli::kExitOk);
  CHECK(lines(text.out).size() == 3);
}

TEST_CASE("parameter overrides change the prediction") {
  const Run base = run({"predict", "--text", "aa", "--format", "csv"});
  const Run slower = run({"predict", "--text", "aa", "--format", "csv", "--tap-cost", "600"});
  CHECK(lines(base.out)[1].rfind("qwert,2,1.403,", 0) == 0);
  CHECK(lines(slower.out)[1].rfind("qwert,2,2.403,", 0) == 0);

  TempDir tmp;
  const std::string params = tmp.file("p.json", R"({"think_qwert": 0})");
  const Run from_file = run({"predict", "--text", "aa", "--format", "csv", "--params", params});
  CHECK(lines(from_file.out)[1].rfind("qwert,2,0.403,", 0) == 0);
  // Flags win over the file.
  const Run both = run({"predict", "--text", "aa", "--format", "csv", "--params", params,
                        "--think-qwert", "100"});
  CHECK(lines(both.out)[1].rfind("qwert,2,0.603,", 0) == 0);

  const Run bad = run({"predict", "--text", "aa", "--formulation", "fitts"});
  CHECK(bad.code == cli::kExitUsage);
}

TEST_CASE("layout subcommands") {
  SUBCASE("validate a built-in") {
    const Run r = run({"layout", "validate", "qwerty"});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out == "layout 'qwerty' is valid\n");
  }
  SUBCASE("validate the overlapping layout") {
    const Run r = run({"layout", "validate", keysim::test::fixture("overlapping.layout.json")});
    CHECK(r.code == cli::kExitValidation);
    CHECK(r.err.find("keys 'a' and 'b' overlap") != std::string::npos);
  }
  SUBCASE("predict refuses an invalid layout") {
    const Run r = run({"predict", "--layout", keysim::test::fixture("overlapping.layout.json"), "--text", "ab"});
    CHECK(r.code == cli::kExitValidation);
  }
  SUBCASE("export then load") {
    TempDir tmp;
    const std::string path = (tmp.path / "qwert.json").string();
    CHECK(run({"layout", "export", "qwert", "-o", path}).code == cli::kExitOk);
    CHECK(tmp.read("qwert.json") == export_layout_json(keysim::test::qwert()));
    CHECK(run({"layout", "validate", path}).code == cli::kExitOk);
    CHECK(run({"layout", "export", "qwert"}).out == export_layout_json(keysim::test::qwert()));
    // A file layout predicts exactly like the built-in it came from.
    CHECK(run({"predict", "--layout", path, "--text", "hello"}).out ==
          run({"predict", "--layout", "qwert", "--text", "hello"}).out);
  }
  SUBCASE("show") {
    const Run r = run({"layout", "show", "3x4", "--format", "csv"});
    CHECK(r.code == cli::kExitOk);
    const auto l = lines(r.out);
    REQUIRE(l.size() == 13);
    CHECK(l[0] == "id,x_mm,y_mm,w_mm,h_mm,tap,slide,multitap");
    CHECK(run({"layout", "show", "qwert"}).code == cli::kExitOk);
  }
}

TEST_CASE("usage and input errors") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run({"predict"}).code == cli::kExitUsage);
  CHECK(run({"predict", "--text", "a", "--text-file", "x.txt"}).code == cli::kExitUsage);
  CHECK(run({"predict", "--text", "a", "--format", "xml"}).code == cli::kExitUsage);
  CHECK(run({"--help"}).code == cli::kExitOk);

  const Run missing = run({"predict", "--text-file", "/nonexistent/text.txt"});
  CHECK(missing.code == cli::kExitInput);
  CHECK(missing.err.find("cannot open") != std::string::npos);
  CHECK(run({"predict", "--text", "???"}).code == cli::kExitInput);
  CHECK(run({"predict", "--layout", "/nonexistent/layout.json", "--text", "a"}).code == cli::kExitInput);
  CHECK(run({"analyze", "/nonexistent.session.json"}).code == cli::kExitInput);
}

TEST_CASE("analyze transcribes logs and writes a learning curve") {
  TempDir tmp;
  const std::string curve = (tmp.path / "curve.csv").string();
  const Run r = run({"analyze", keysim::test::fixture("hey_qwert.session.json"),
                     keysim::test::fixture("drag_q_2mm.session.json"), "--curve", curve, "--format", "csv"});
  CHECK(r.code == cli::kExitOk);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 3);
  CHECK(l[0] == "log,layout,subject_id,session_index,transcribed,wpm,error_distance");
  CHECK(l[1].find(",qwert,s01,1,\"hey\",24.161,0") != std::string::npos);
  CHECK(l[2].find(",qwert,s01,2,\"q\",80.000,1") != std::string::npos);
  CHECK(tmp.read("curve.csv") ==
        "layout,session_index,mean_wpm,stddev_wpm,n\n"
        "qwert,1,24.161,0.000,1\n"
        "qwert,2,80.000,0.000,1\n");

  const Run strict = run({"analyze", keysim::test::fixture("drag_q_2mm.session.json"), "--slide-threshold",
                          "1.5", "--format", "csv"});
  CHECK(lines(strict.out)[1].find("\"y\"") != std::string::npos);

  CHECK(run({"analyze", keysim::test::fixture("hey_qwert.session.json")}).code == cli::kExitOk);
}

TEST_CASE("calibrate fits parameters from an observation file") {
  TempDir tmp;
  tmp.file("dinner.txt", "thanks for your dinner. take care.\n");
  tmp.file("hello.txt", "hello\n");
  const std::string csv = tmp.file("obs.csv",
                                   "layout,text_file,observed_seconds\n"
                                   "qwert,dinner.txt,20.5\n"
                                   "qwerty,dinner.txt,21.0\n"
                                   "3x4,hello.txt,4.2\n");
  const std::string out = (tmp.path / "fitted.json").string();
  const Run r = run({"calibrate", "--observations", csv, "--free", "tap_cost,think_qwert", "-o", out});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("fitted parameters") != std::string::npos);
  CHECK(r.out.find("-0.000") == std::string::npos);
  const MotorParams fitted = parse_params_json(tmp.read("fitted.json"));
  CHECK(fitted.tap_cost != MotorParams{}.tap_cost);
  CHECK(fitted.slide_extra == MotorParams{}.slide_extra);

  CHECK(run({"calibrate", "--observations", csv, "--free", "speed"}).code == cli::kExitUsage);
  const std::string bad = tmp.file("bad.csv", "layout,text,seconds\nqwert,dinner.txt,1\n");
  CHECK(run({"calibrate", "--observations", bad}).code == cli::kExitInput);
}
