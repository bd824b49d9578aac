#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "subsig/config.hpp"
#include "subsig/suites.hpp"

using namespace subsig;

TEST_CASE("config parsing: values, lists, matrices") {
  auto cfg = Config::parse(
      "# comment\n"
      "n = 4\n"
      "odd = false\n"
      "tol = 1e-9\n"
      "angles = 0.9, 2.1\n"
      "RE = 0, -1; 1, 0\n",
      "inline.cfg");
  CHECK(cfg.get_int("n") == 4);
  CHECK(cfg.get_bool("odd") == false);
  CHECK(cfg.get_double("tol") == 1e-9);
  auto a = cfg.get_angles("angles");
  REQUIRE(a.size() == 2);
  CHECK(a[1] == 2.1);
  auto m = cfg.get_matrix("RE");
  CHECK(m(0, 1) == -1.0);
  CHECK(m(1, 0) == 1.0);
}

TEST_CASE("config errors carry line numbers") {
  try {
    Config::parse("n = 4\nk : 2\n", "f.cfg");
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("f.cfg:2") != std::string::npos);
  }
  auto cfg = Config::parse("n = 4\nk = two\n", "f.cfg");
  try {
    cfg.get_int("k");
    FAIL("expected a value error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("f.cfg:2") != std::string::npos);
  }
  CHECK_THROWS_AS(Config::parse("x = 1\nx = 2\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("m = 1, 2; 3\n").get_matrix("m"), ConfigError);
}

TEST_CASE("suite reports are deterministic and carry the schema") {
  SuiteParams p;
  p.suite = "rotation-lift";
  p.trials = 4;
  p.seed = 5;
  auto r1 = run_suite(p).to_json();
  auto r2 = run_suite(p).to_json();
  CHECK(r1.dump() == r2.dump());
  CHECK(r1["schema"] == kReportSchema);
  CHECK(r1["pass"] == true);
  CHECK(r1["summary"]["trials"] == 8);  // two dims, four tuples each

  auto with_time = run_suite(p).to_json(true);
  CHECK(with_time.contains("wall_ms"));
  CHECK(!r1.contains("wall_ms"));
}

TEST_CASE("unknown suite and bad modes are usage errors") {
  SuiteParams p;
  p.suite = "nope";
  CHECK_THROWS_AS(run_suite(p), std::invalid_argument);
  p.suite = "lemma-3.11";
  p.mode = "float";
  CHECK_THROWS_AS(run_suite(p), std::invalid_argument);
  p.mode = "exact";
  p.n = 2;
  p.trials = 3;
  CHECK(run_suite(p).pass);
}

TEST_CASE("canonical element text matches the golden file") {
  using QR = GaussianRational;
  using EQ = CliffordElement<QR>;
  EQ x = EQ::blade(3, 0b011, 0b101) * QR::frac(3, 2) + EQ::one(3) * (-QR::unit_i());
  std::ifstream is(std::string(TEST_DATA_DIR) + "/golden_element.txt");
  REQUIRE(is.good());
  std::string line;
  std::getline(is, line);
  CHECK(x.str() == line);
}
