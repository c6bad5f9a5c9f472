#include <doctest.h>

#include <filesystem>

#include "cadyn/error.hpp"
#include "cadyn/reduction.hpp"
#include "cadyn/rule_io.hpp"
#include "oracles.hpp"

using namespace cadyn;

namespace {

std::size_t error_line(std::string_view text) {
  try {
    parse_rule(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("words use digits and letters up to 36 states") {
  CHECK(format_word(Word{0, 10, 35}, 36) == "0az");
  CHECK(parse_word("0az", 36) == Word{0, 10, 35});
  CHECK(format_word(Word{3, 40}, 41) == "3.40");
  CHECK(parse_word("3.40", 41) == Word{3, 40});
  CHECK_THROWS_AS(parse_word("3", 3), std::invalid_argument);
  CHECK_THROWS_AS(parse_word("0.1", 3), std::invalid_argument);
}

TEST_CASE("the example rule has the documented canonical text") {
  const std::string text = format_rule(example_021_rule());
  CHECK(text.rfind("ca v1\nsides: one\nstates: 3\nneighborhood: 0 1\ntable:\n00 -> 0\n", 0) == 0);
  CHECK(text.find("11 -> 2\n") != std::string::npos);
  CHECK(text.find("21 -> 0\n") != std::string::npos);
}

TEST_CASE("format then parse is the identity on random rules") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 40; ++i) {
    const auto sides = i % 2 ? Sidedness::TwoSided : Sidedness::OneSided;
    const Neighborhood nb = sides == Sidedness::TwoSided ? Neighborhood{-1, 0} : Neighborhood{0, 2};
    const LocalRule r = oracle::random_rule(rng, 2 + rng() % 3, nb, sides);
    const std::string text = format_rule(r);
    const LocalRule back = parse_rule(text);
    CHECK(back == r);
    CHECK(format_rule(back) == text);
  }
}

TEST_CASE("product alphabets keep their factors") {
  const LocalRule p = product_power(1);
  const std::string text = format_rule(p);
  CHECK(text.find("factors: 3 3\n") != std::string::npos);
  const LocalRule back = parse_rule(text);
  CHECK(back.alphabet().factors() == std::vector<std::uint32_t>{3, 3});
  CHECK(back == p);
}

TEST_CASE("block maps between different alphabets") {
  const BlockMap m(Alphabet(3), Alphabet(2), Sidedness::OneSided, {0, 0}, {0, 1, 1});
  const std::string text = format_map(m);
  CHECK(text.rfind("map v1\n", 0) == 0);
  CHECK(text.find("states: 3 -> 2\n") != std::string::npos);
  CHECK(parse_map(text) == m);
  CHECK_THROWS_AS(parse_rule(text), ParseError);
}

TEST_CASE("comments and blank lines are ignored") {
  const std::string text =
      "# a comment\nca v1\n\nsides: one   # trailing\nstates: 2\nneighborhood: 0 0\ntable:\n"
      "0 -> 1\n# between\n1 -> 0\n";
  const LocalRule r = parse_rule(text);
  CHECK(r.table() == std::vector<State>{1, 0});
}

TEST_CASE("parse errors carry line numbers") {
  const std::string good = "ca v1\nsides: one\nstates: 2\nneighborhood: 0 0\ntable:\n0 -> 1\n1 -> 0\n";
  CHECK(error_line(good) == 0);
  CHECK(error_line("cb v1\n") == 1);
  CHECK(error_line("ca v1\nsides: three\n") == 2);
  CHECK(error_line("ca v1\nsides: one\nstates: x\n") == 3);
  CHECK(error_line("ca v1\nsides: one\nstates: 2\nneighborhood: -1 0\n") == 4);
  CHECK(error_line("ca v1\nsides: one\nstates: 2\nneighborhood: 0 0\ntable:\n0 -> 1\n0 -> 0\n") == 7);
  CHECK(error_line("ca v1\nsides: one\nstates: 2\nneighborhood: 0 0\ntable:\n0 -> 1\n2 -> 0\n") == 7);
  CHECK(error_line("ca v1\nsides: one\nstates: 2\nneighborhood: 0 0\ntable:\n0 -> 1\n") == 6);
  CHECK(error_line("ca v1\nsides: one\nstates: 2\nneighborhood: 0 0\ntable:\n00 -> 1\n") == 6);
  CHECK(error_line("ca v1\nsides: one\nstates: 2\nneighborhood: 0 0\ntable:\n0 1\n") == 6);
  try {
    parse_rule("ca v1\nsides: one\nstates: 2\nneighborhood: 0 0\ntable:\n0 -> 1\n");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("missing neighborhood word 1") != std::string::npos);
  }
}

TEST_CASE("files round-trip through save and load") {
  const auto path = std::filesystem::temp_directory_path() / "cadyn_rule_io_test.ca";
  save_text(path.string(), format_rule(example_021_rule()));
  CHECK(load_rule(path.string()) == example_021_rule());
  std::filesystem::remove(path);
  CHECK_THROWS(load_rule(path.string()));
}
