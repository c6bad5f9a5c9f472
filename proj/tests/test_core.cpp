#include <doctest.h>

#include "cadyn/core.hpp"
#include "cadyn/error.hpp"
#include "cadyn/reduction.hpp"
#include "cadyn/rule_io.hpp"
#include "oracles.hpp"

using namespace cadyn;

namespace {

Word w(std::string_view s, std::uint32_t n = 3) { return parse_word(s, n); }

LocalRule xor_rule() {
  return LocalRule::tabulate(Alphabet(2), Sidedness::OneSided, {0, 1},
                             [](std::span<const State> x) { return (x[0] + x[1]) % 2; });
}

}  // namespace

TEST_CASE("alphabet product splits and joins with the first factor most significant") {
  const Alphabet a = Alphabet::product_of({3, 2, 4});
  CHECK(a.size() == 24);
  CHECK(a.tracks() == 3);
  CHECK(a.join(std::vector<State>{1, 0, 3}) == 1 * 8 + 0 * 4 + 3);
  for (State s = 0; s < a.size(); ++s) CHECK(a.join(a.split(s)) == s);
  CHECK(a.track_value(13, 0) == 1);
  CHECK(a.track_value(13, 2) == 1);
  const Alphabet b = Alphabet::product(Alphabet(3), Alphabet::product_of({2, 2}));
  CHECK(b.factors() == std::vector<std::uint32_t>{3, 2, 2});
}

TEST_CASE("word indices are lexicographic with state 0 smallest") {
  CHECK(word_index(w("000"), 3) == 0);
  CHECK(word_index(w("012"), 3) == 5);
  CHECK(index_word(5, 3, 3) == w("012"));
  CHECK(!checked_pow(10, 20));
  CHECK(*checked_pow(3, 4) == 81);
}

TEST_CASE("block map validation") {
  CHECK_THROWS_AS(BlockMap(Alphabet(2), Alphabet(2), Sidedness::OneSided, {-1, 0}, {0, 0, 0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(BlockMap(Alphabet(2), Alphabet(2), Sidedness::TwoSided, {0, 1}, {0, 0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(BlockMap(Alphabet(2), Alphabet(2), Sidedness::TwoSided, {0, 0}, {0, 2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(LocalRule(BlockMap(Alphabet(2), Alphabet(3), Sidedness::OneSided, {0, 0}, {0, 2})),
                  std::invalid_argument);
  CHECK_THROWS_AS(BlockMap::table_entries(Alphabet(10), {0, 9}, 1000), BudgetError);
}

TEST_CASE("radius follows the neighborhood") {
  CHECK(Neighborhood{-2, 1}.radius() == 2);
  CHECK(Neighborhood{0, 3}.radius() == 3);
  CHECK(Neighborhood{1, 1}.radius() == 1);
}

TEST_CASE("apply_word examples") {
  const LocalRule F = example_021_rule();
  CHECK(apply_word(F, w("10")) == w("2"));
  CHECK(apply_word(F, w("01")) == w("1"));
  CHECK(apply_word(identity_rule(Alphabet(3)), w("0120")) == w("0120"));
  CHECK_THROWS_WITH_AS(apply_word(F, w("1")), doctest::Contains("input too short"),
                       std::invalid_argument);
}

TEST_CASE("apply_cyclic examples") {
  const LocalRule F = example_021_rule();
  CHECK(apply_cyclic(F, CyclicConfig{w("0")}).word == w("0"));
  CHECK(apply_cyclic(F, CyclicConfig{w("12")}).word == w("20"));
  CHECK(apply_cyclic(shift_rule(Alphabet(3)), CyclicConfig{w("012")}).word == w("120"));
}

TEST_CASE("apply_cyclic agrees with the cyclic oracle on two-sided rules") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const LocalRule r = oracle::random_rule(rng, 3, {-1, 1}, Sidedness::TwoSided);
    const Word c = oracle::random_word(rng, 3, 1 + rng() % 7);
    CHECK(apply_cyclic(r, CyclicConfig{c}).word == oracle::step_cyclic(r, c));
  }
}

TEST_CASE("composition examples") {
  const LocalRule F = example_021_rule(), P = example_021_inverse();
  CHECK(equal_rules(compose(P, F), identity_rule(Alphabet(3))));
  CHECK(equal_rules(compose(F, P), identity_rule(Alphabet(3))));
  const LocalRule s = shift_rule(Alphabet(3));
  const LocalRule s2 = compose(s, s);
  CHECK(s2.neighborhood() == Neighborhood{0, 2});
  for (const auto& x : oracle::all_words(3, 3)) CHECK(s2(x) == x[2]);
  CHECK_THROWS_AS(compose(F, identity_rule(Alphabet(2))), std::invalid_argument);
  CHECK_THROWS_AS(compose(F, identity_rule(Alphabet(3), Sidedness::TwoSided)), std::invalid_argument);
}

TEST_CASE("power examples") {
  const Alphabet a3(3);
  CHECK(equal_rules(power(example_021_rule(), 0), identity_rule(a3)));
  CHECK(apply_word(power(shift_rule(a3), 3), w("01201")) == w("01"));
  CHECK(equal_rules(power(chain_rule(), 2), constant_rule(a3, 0)));
  CHECK_THROWS_AS(power(example_021_rule(), 40, 1'000'000), BudgetError);
}

TEST_CASE("product examples") {
  const Alphabet a3(3);
  const LocalRule F = example_021_rule();
  const LocalRule id2 = product(identity_rule(a3), identity_rule(a3));
  CHECK(equal_rules(id2, identity_rule(Alphabet::product(a3, a3))));
  const LocalRule FH = product(F, chain_rule());
  CHECK(equal_rules(project(FH, std::size_t{0}), F));
  CHECK(equal_rules(project(FH, std::size_t{1}), chain_rule()));
  CHECK_THROWS_AS(product(F, identity_rule(a3, Sidedness::TwoSided)), std::invalid_argument);
}

TEST_CASE("equal_rules examples and padding invariance") {
  const Alphabet a3(3);
  const LocalRule id = identity_rule(a3);
  CHECK(equal_rules(pad(id, {0, 1}), id));
  const LocalRule F = example_021_rule();
  const LocalRule s = shift_rule(a3);
  CHECK(!equal_rules(F, s));
  const auto diff = first_difference(F.map(), s.map());
  REQUIRE(diff);
  CHECK(diff->left != diff->right);
  CHECK(equal_rules(compose(F, example_021_inverse()), id));
}

TEST_CASE("classify_state examples") {
  const auto and_cls = classify_state(and_rule(), 0);
  CHECK(and_cls.quiescent);
  CHECK(and_cls.spreading);
  const auto f_cls = classify_state(example_021_rule(), 0);
  CHECK(f_cls.quiescent);
  CHECK(!f_cls.spreading);
  const auto s_cls = classify_state(shift_rule(Alphabet(2)), 0);
  CHECK(s_cls.quiescent);
  CHECK(!s_cls.spreading);
  CHECK_THROWS_AS(classify_state(and_rule(), 2), std::invalid_argument);
}

TEST_CASE("shift commutation on random rules") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto sides = i % 2 ? Sidedness::TwoSided : Sidedness::OneSided;
    const Neighborhood nb = sides == Sidedness::TwoSided ? Neighborhood{-1, 1} : Neighborhood{0, 2};
    const LocalRule r = oracle::random_rule(rng, 2 + rng() % 2, nb, sides);
    const CyclicConfig c{oracle::random_word(rng, r.alphabet().size(), 1 + rng() % 9)};
    CHECK(apply_cyclic(r, rotate(c, 1)) == rotate(apply_cyclic(r, c), 1));
  }
}

TEST_CASE("composition is sound on random rules and words") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    const std::uint32_t n = 2 + rng() % 2;
    const int wf = 1 + static_cast<int>(rng() % 3), wg = 1 + static_cast<int>(rng() % 3);
    const LocalRule f = oracle::random_rule(rng, n, {0, wf - 1});
    const LocalRule g = oracle::random_rule(rng, n, {0, wg - 1});
    const Word x = oracle::random_word(rng, n, static_cast<std::size_t>(wf + wg - 1) + rng() % 8);
    CHECK(apply_word(compose(g, f), x) == apply_word(g, apply_word(f, x)));
  }
}

TEST_CASE("power is additive") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 30; ++i) {
    const LocalRule r = oracle::random_rule(rng, 2, {0, 1});
    const unsigned m = rng() % 3, n = rng() % 3;
    CHECK(equal_rules(power(r, m + n), compose(power(r, m), power(r, n))));
  }
}

TEST_CASE("product and projection round-trip on random rules") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 30; ++i) {
    const LocalRule a = oracle::random_rule(rng, 2, {0, 1});
    const LocalRule b = oracle::random_rule(rng, 3, {0, 2});
    const LocalRule ab = product(a, b);
    CHECK(equal_rules(project(ab, std::size_t{0}), a));
    CHECK(equal_rules(project(ab, std::size_t{1}), b));
    CHECK(independent_track_groups(ab).size() == 2);
  }
}

TEST_CASE("equal_rules is an equivalence invariant under padding") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 30; ++i) {
    const LocalRule a = oracle::random_rule(rng, 2, {-1, 0}, Sidedness::TwoSided);
    const LocalRule b = oracle::random_rule(rng, 2, {-1, 0}, Sidedness::TwoSided);
    CHECK(equal_rules(a, a));
    CHECK(equal_rules(a, b) == equal_rules(b, a));
    CHECK(equal_rules(pad(a, {-2, 1}), a));
    CHECK(equal_rules(pad(a, {-2, 1}), b) == equal_rules(a, b));
  }
}

TEST_CASE("restrict_track keeps autonomous tracks at persistent values") {
  const LocalRule and_f = product(example_021_rule(), and_rule());
  const auto sub = restrict_track(and_f, 1, 1);
  REQUIRE(sub);
  CHECK(equal_rules(*sub, example_021_rule()));
  // 0 is persistent for AND, but 1 is not persistent for the chain rule
  CHECK(restrict_track(product(example_021_rule(), chain_rule()), 1, 2) == std::nullopt);
}

TEST_CASE("relabel conjugates by a permutation") {
  const LocalRule F = example_021_rule();
  const std::vector<State> swap{0, 2, 1};
  const LocalRule G = relabel(F, swap);
  for (const auto& x : oracle::all_words(3, 2)) {
    Word px{swap[x[0]], swap[x[1]]};
    CHECK(G(px) == swap[F(x)]);
  }
  CHECK(equal_rules(relabel(G, swap), F));
}
