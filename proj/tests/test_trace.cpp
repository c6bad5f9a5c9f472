#include <doctest.h>

#include <cmath>

#include "cadyn/error.hpp"
#include "cadyn/reduction.hpp"
#include "cadyn/rule_io.hpp"
#include "cadyn/trace.hpp"
#include "oracles.hpp"

using namespace cadyn;

namespace {

std::set<Word> ws(std::initializer_list<const char*> items, std::uint32_t n = 3) {
  std::set<Word> out;
  for (auto s : items) out.insert(parse_word(s, n));
  return out;
}

}  // namespace

TEST_CASE("trace words of the example rule") {
  const LocalRule F = example_021_rule();
  CHECK(trace_words(F, 1, 1).words() == ws({"0", "1", "2"}));
  CHECK(trace_words(F, 1, 2).words() == ws({"00", "01", "12", "20", "21"}));
  CHECK(trace_words(F, 1, 3).words() == ws({"000", "001", "012", "120", "121", "200", "212"}));
  CHECK(subword_complexity(F, 1, 4) == 11);
}

TEST_CASE("identity and AND traces") {
  for (int L = 1; L <= 5; ++L) {
    const auto t = trace_words(identity_rule(Alphabet(3)), 1, L);
    CHECK(t.count() == 3);
    for (const auto& w : t.words()) CHECK(std::all_of(w.begin(), w.end(), [&](State s) { return s == w[0]; }));
    CHECK(subword_complexity(and_rule(), 1, L) == static_cast<std::uint64_t>(L + 1));
  }
}

TEST_CASE("product traces multiply") {
  const LocalRule F = example_021_rule();
  CHECK(subword_complexity(product(F, F), 1, 2) == 25);
  CHECK(subword_complexity(product_power(1), 1, 2) == 25);
  TraceOptions direct;
  direct.use_factorization = false;
  CHECK(subword_complexity(product(F, F), 1, 3, direct) == 49);
  CHECK(trace_words(product(F, F), 1, 3).words() == trace_words(product(F, F), 1, 3, direct).words());
}

TEST_CASE("entropy rows") {
  const auto rep = entropy_upper(example_021_rule(), 1, 6);
  REQUIRE(rep.rows.size() == 6);
  CHECK(rep.rows[1].p == 5);
  CHECK(rep.rows[1].bound == doctest::Approx(std::log2(5.0) / 2).epsilon(1e-12));
  CHECK(rep.rows[3].bound == doctest::Approx(std::log2(11.0) / 4).epsilon(1e-12));
  for (const auto& row : rep.rows) CHECK(row.bound >= 0.5);

  const auto id = entropy_upper(identity_rule(Alphabet(3)), 1, 4);
  for (const auto& row : id.rows) CHECK(row.bound == doctest::Approx(std::log2(3.0) / row.L));
  for (const auto& row : entropy_upper(shift_rule(Alphabet(2)), 1, 6).rows) {
    CHECK(row.p == (1u << row.L));
    CHECK(row.bound == doctest::Approx(1.0));
  }
}

TEST_CASE("entropy TSV has exact counts and twelve significant digits") {
  const std::string tsv = format_entropy_tsv(entropy_upper(example_021_rule(), 1, 2));
  CHECK(tsv == "1\t3\t1.58496250072\n2\t5\t1.16096404744\n");
}

TEST_CASE("block shift words") {
  CHECK(block_shift_words(ws({"00", "12"}), 2) == ws({"00", "01", "12", "20", "21"}));
  CHECK(block_shift_words(ws({"0"}), 4) == ws({"0000"}));
  CHECK(block_shift_words(ws({"01"}, 2), 3) == ws({"010", "101"}, 2));
}

TEST_CASE("example trace language is the {00,12} block shift") {
  const LocalRule F = example_021_rule();
  for (int L = 1; L <= 8; ++L) CHECK(trace_words(F, 1, L).words() == block_shift_words(ws({"00", "12"}), L));
}

TEST_CASE("trace words agree with the cyclic-configuration oracle") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 40; ++i) {
    const bool two = i % 2;
    const Neighborhood nb = two ? Neighborhood{-1, 1} : Neighborhood{0, 1 + static_cast<int>(rng() % 2)};
    const LocalRule r = oracle::random_rule(rng, 2, nb, two ? Sidedness::TwoSided : Sidedness::OneSided);
    const int k = 1 + static_cast<int>(rng() % 2), L = 1 + static_cast<int>(rng() % 3);
    const auto t = trace_words(r, k, L);
    // a cyclic word needs room for the whole dependence cone
    const std::size_t P = static_cast<std::size_t>(k + (L - 1) * (nb.hi - std::min(nb.lo, 0)) +
                                                   (L - 1) * std::max(-nb.lo, 0));
    std::set<Word> expect;
    for (auto col : oracle::trace_by_cycles(r, k, L, std::max<std::size_t>(P, 1))) expect.insert(col);
    CHECK(t.words() == expect);
  }
}

TEST_CASE("radius step multiplies by the alphabet size") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 30; ++i) {
    const std::uint32_t n = 2 + rng() % 2;
    const int r = 1 + static_cast<int>(rng() % 2);
    const LocalRule f = oracle::random_rule(rng, n, {0, r});
    for (int L = 1; L <= (n == 3 && r == 2 ? 3 : 5); ++L)
      CHECK(subword_complexity(f, r + 1, L) == n * subword_complexity(f, r, L));
  }
}

TEST_CASE("product multiplicativity on random rules") {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 20; ++i) {
    const LocalRule a = oracle::random_rule(rng, 2, {0, 1});
    const LocalRule b = oracle::random_rule(rng, 2, {0, 1});
    TraceOptions direct;
    direct.use_factorization = false;
    for (int L = 1; L <= 4; ++L) {
      const auto pa = subword_complexity(a, 1, L), pb = subword_complexity(b, 1, L);
      CHECK(subword_complexity(product(a, b), 1, L, direct) == pa * pb);
    }
  }
}

TEST_CASE("complexity bound and monotonicity") {
  std::mt19937_64 rng(44);
  for (int i = 0; i < 20; ++i) {
    const LocalRule r = oracle::random_rule(rng, 3, {0, 1});
    std::uint64_t prev = 1;
    for (int L = 1; L <= 5; ++L) {
      const auto p = subword_complexity(r, 1, L);
      CHECK(p >= prev);
      CHECK(p <= *checked_pow(3, static_cast<unsigned>(dependence_window(r, 1, L))));
      prev = p;
    }
  }
}

TEST_CASE("restricted trace count on a product with an autonomous track") {
  const LocalRule F = example_021_rule();
  const LocalRule FA = product(F, and_rule());
  CHECK(restricted_trace_count(FA, 1, 1, 1, 4) == subword_complexity(F, 1, 4));
  CHECK(restricted_trace_count(product(F, chain_rule()), 1, 2, 1, 4) == std::nullopt);
}

TEST_CASE("window budget is enforced and named") {
  TraceOptions tight;
  tight.window_budget = 100;
  tight.force_window_enumeration = true;
  try {
    (void)subword_complexity(example_021_rule(), 1, 8, tight);
    FAIL("expected a budget error");
  } catch (const BudgetError& e) {
    CHECK(std::string(e.what()).find("trace window (width 8)") != std::string::npos);
  }
  tight.force_window_enumeration = false;
  tight.window_budget = 10;
  CHECK_THROWS_AS((void)subword_complexity(example_021_rule(), 1, 8, tight), BudgetError);
}

TEST_CASE("column extension agrees with window enumeration") {
  std::mt19937_64 rng(45);
  TraceOptions direct;
  direct.force_window_enumeration = true;
  for (int i = 0; i < 60; ++i) {
    const std::uint32_t n = 2 + rng() % 2;
    const int lo = static_cast<int>(rng() % 2), hi = lo + static_cast<int>(rng() % 3);
    const LocalRule r = oracle::random_rule(rng, n, {lo, hi});
    const int k = 1 + static_cast<int>(rng() % 3), L = 1 + static_cast<int>(rng() % 4);
    CHECK(trace_words(r, k, L).codes() == trace_words(r, k, L, direct).codes());
  }
}
