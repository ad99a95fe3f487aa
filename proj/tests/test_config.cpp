#include <doctest.h>

#include "helpers/testutil.hpp"
#include "wartem/config.hpp"

using namespace wartem;

TEST_SUITE("config") {

TEST_CASE("parses keys, values, and comments") {
  KeyValueConfig cfg = KeyValueConfig::parse_string(
      "# a comment\n"
      "family = mixed\n"
      "lambda = 2.5  # trailing comment\n"
      "\n"
      "batch_size=16\r\n"
      "seeds = 1, 2, 3\n");
  CHECK(cfg.get_string("family") == "mixed");
  CHECK(cfg.get_double("lambda") == 2.5);
  CHECK(cfg.get_int("batch_size") == 16);
  CHECK(cfg.get_seed_list("seeds") == std::vector<std::uint64_t>{1, 2, 3});
  CHECK_NOTHROW(cfg.fail_on_unknown());
}

TEST_CASE("missing required keys name the key") {
  KeyValueConfig cfg = KeyValueConfig::parse_string("a = 1\n");
  CHECK_THROWS_WITH_AS(cfg.get_string("seed"), doctest::Contains("'seed'"), std::runtime_error);
}

TEST_CASE("defaults are recorded for provenance") {
  KeyValueConfig cfg = KeyValueConfig::parse_string("x = 7\n");
  CHECK(cfg.get_int("x", 0) == 7);
  CHECK(cfg.get_double("lr", 0.001) == 0.001);
  CHECK(cfg.get_bool("flag", true) == true);

  const auto& resolved = cfg.resolved();
  REQUIRE(resolved.size() == 3);
  CHECK(resolved[0].first == "x");
  CHECK(resolved[0].second == "7");
  CHECK(resolved[1].first == "lr");
  CHECK(resolved[2] == std::pair<std::string, std::string>{"flag", "true"});
}

TEST_CASE("unknown keys are rejected") {
  KeyValueConfig cfg = KeyValueConfig::parse_string("known = 1\ntypo_key = 2\n");
  CHECK(cfg.get_int("known") == 1);
  CHECK_THROWS_WITH_AS(cfg.fail_on_unknown(), doctest::Contains("typo_key"), std::runtime_error);
}

TEST_CASE("malformed lines and duplicates are rejected") {
  CHECK_THROWS_WITH_AS(KeyValueConfig::parse_string("just words\n"), doctest::Contains(":1"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(KeyValueConfig::parse_string("a = 1\na = 2\n"),
                       doctest::Contains("duplicate"), std::runtime_error);
  CHECK_THROWS_AS(KeyValueConfig::parse_string("= 1\n"), std::runtime_error);
}

TEST_CASE("typed getters validate their values") {
  KeyValueConfig cfg = KeyValueConfig::parse_string("n = abc\nb = maybe\nf = 1.5.2\n");
  CHECK_THROWS_WITH_AS(cfg.get_int("n"), doctest::Contains("'n'"), std::runtime_error);
  CHECK_THROWS_AS(cfg.get_bool("b", false), std::runtime_error);
  CHECK_THROWS_AS(cfg.get_double("f"), std::runtime_error);
}

TEST_CASE("bool spellings") {
  KeyValueConfig cfg = KeyValueConfig::parse_string("a = true\nb = 0\nc = yes\nd = false\n");
  CHECK(cfg.get_bool("a", false));
  CHECK(!cfg.get_bool("b", true));
  CHECK(cfg.get_bool("c", false));
  CHECK(!cfg.get_bool("d", true));
}

TEST_CASE("config hash is stable and sensitive") {
  const std::string text = "a = 1\nb = 2\n";
  CHECK(fnv1a_hex(text) == fnv1a_hex(text));
  CHECK(fnv1a_hex(text) != fnv1a_hex("a = 1\nb = 3\n"));
  CHECK(fnv1a_hex(text).size() == 16);
}

TEST_CASE("parse_file reads from disk") {
  const auto path = testutil::temp_path("config.cfg");
  testutil::write_file(path, "seed = 9\n");
  KeyValueConfig cfg = KeyValueConfig::parse_file(path);
  CHECK(cfg.get_seed("seed", 0) == 9);
  CHECK_THROWS_AS(KeyValueConfig::parse_file("/nonexistent/config.cfg"), std::runtime_error);
}

}  // TEST_SUITE
