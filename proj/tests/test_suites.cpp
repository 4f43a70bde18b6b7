#include <set>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "shm/suites.hpp"

using namespace shm;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return ErrorCode::config_parse;
}

SuiteConfig small() {
  SuiteConfig c;
  c.n1 = c.n2 = 16;
  return c;
}

}  // namespace

TEST_CASE("config entries") {
  SuiteConfig c;
  apply_config_entry(c, "grid", "64x16");
  CHECK(c.n1 == 64);
  CHECK(c.n2 == 16);
  apply_config_entry(c, "mode", "fd4");
  CHECK(c.mode == DerivMode::central4);
  apply_config_entry(c, "gens", "12");
  CHECK(c.generators == 12);
  apply_config_entry(c, "seed", "99");
  CHECK(c.seed == 99);
  apply_config_entry(c, "tol.weyl.drift", "1e-7");
  CHECK(c.tolerance.at("weyl.drift") == 1e-7);
  apply_config_entry(c, "timing", "1");
  CHECK(c.timing);

  CHECK(code_of([&] { apply_config_entry(c, "colour", "blue"); }) == ErrorCode::config_parse);
  CHECK(code_of([&] { apply_config_entry(c, "grid", "7x8"); }) == ErrorCode::config_parse);
  CHECK(code_of([&] { apply_config_entry(c, "grid", "32"); }) == ErrorCode::config_parse);
  CHECK(code_of([&] { apply_config_entry(c, "mode", "fd3"); }) == ErrorCode::config_parse);
  CHECK(code_of([&] { apply_config_entry(c, "gens", "4"); }) == ErrorCode::config_parse);
  CHECK(code_of([&] { apply_config_entry(c, "timing", "yes"); }) == ErrorCode::config_parse);
  CHECK(code_of([&] { apply_config_entry(c, "tol.x", "abc"); }) == ErrorCode::config_parse);
}

TEST_CASE("config files") {
  std::istringstream in("# comment\n\nsuite = weyl\n  grid = 16x16  \nmode=fd2\n");
  SuiteConfig c;
  parse_config(in, c);
  CHECK(c.suite == "weyl");
  CHECK(c.n1 == 16);
  CHECK(c.mode == DerivMode::central2);
  std::istringstream bad("grid 16x16\n");
  CHECK(code_of([&] { parse_config(bad, c); }) == ErrorCode::config_parse);
  CHECK(mode_name(parse_mode("spectral")) == "spectral");
  CHECK(parse_grid("8x1024") == std::pair<int, int>(8, 1024));
}

TEST_CASE("records serialize as one JSON object per line") {
  CheckRecord r;
  r.id = "x.y";
  r.anchor = "a statement";
  r.mode = "spectral";
  r.grid = "32x32";
  r.kind = CheckKind::band;
  r.measured = 4.0;
  r.tolerance = 3.5;
  r.upper = 4.5;
  r.pass = true;
  const std::string line = to_json_line(r);
  CHECK(line.find('\n') == std::string::npos);
  const auto j = nlohmann::json::parse(line);
  CHECK(j["id"] == "x.y");
  CHECK(j["kind"] == "band");
  CHECK(j["upper"] == 4.5);
  CHECK(j["pass"] == true);
  CHECK_FALSE(j.contains("error"));

  r.kind = CheckKind::bound;
  r.measured = std::nan("");
  r.error = "aliasing_detected: boom";
  const auto k = nlohmann::json::parse(to_json_line(r));
  CHECK(k["measured"].is_null());
  CHECK(k["error"] == "aliasing_detected: boom");
  CHECK_FALSE(k.contains("upper"));
}

TEST_CASE("unknown suites are rejected") {
  CHECK(code_of([] { (void)run_suite("bogus", SuiteConfig{}); }) == ErrorCode::unknown_suite);
}

TEST_CASE("algebra suite passes and is deterministic") {
  const auto a = run_suite("algebra", SuiteConfig{});
  const auto b = run_suite("algebra", SuiteConfig{});
  REQUIRE(a.size() == b.size());
  CHECK(all_pass(a));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(to_json_line(a[i]) == to_json_line(b[i]));
  const std::string table = summary_table(a);
  CHECK(table.find("algebra.associativity") != std::string::npos);
}

TEST_CASE("susy-full carries stationarity and its witness") {
  const auto recs = run_suite("susy-full", small());
  bool stationarity = false, witness = false;
  for (const auto& r : recs) {
    if (r.id == "susy_full.stationarity") {
      stationarity = true;
      CHECK(r.kind == CheckKind::bound);
      CHECK(r.tolerance == 1e-8);
      CHECK(r.pass);
    }
    if (r.id == "susy_full.unfactorized_witness") {
      witness = true;
      CHECK(r.kind == CheckKind::witness);
      CHECK(r.tolerance == 1e-3);
      CHECK(r.pass);
    }
  }
  CHECK(stationarity);
  CHECK(witness);
}

TEST_CASE("tolerance overrides flip a record") {
  SuiteConfig c;
  c.tolerance["algebra.nilpotency"] = -1.0;
  const auto recs = run_suite("algebra", c);
  CHECK_FALSE(all_pass(recs));
  int failing = 0;
  for (const auto& r : recs) failing += r.pass ? 0 : 1;
  CHECK(failing == 1);
}

TEST_CASE("suite list") {
  const auto& names = suite_names();
  CHECK(names.size() == 11);
  CHECK(names.front() == "algebra");
  CHECK(std::set<std::string>(names.begin(), names.end()).count("super-weyl") == 1);
}
