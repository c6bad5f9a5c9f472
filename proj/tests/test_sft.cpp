#include <doctest.h>

#include <cmath>

#include "cadyn/error.hpp"
#include "cadyn/reduction.hpp"
#include "cadyn/rule_io.hpp"
#include "cadyn/sft.hpp"
#include "cadyn/trace.hpp"
#include "oracles.hpp"

using namespace cadyn;

namespace {

const Matrix kFull2{{1, 1}, {1, 1}};
const Matrix kOne2{{2}};
const Matrix kGolden{{1, 1}, {1, 0}};

SftPresentation golden_mean() {
  return sft_from_forbidden(Alphabet(2), {Word{1, 1}});
}

/// Applies merges in a random order until none is left.
Matrix random_total_amalgamation(Matrix m, std::mt19937_64& rng, AmalgamationConvention conv) {
  while (true) {
    std::vector<std::pair<std::size_t, std::size_t>> options;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = i + 1; j < m.size(); ++j)
        if (mergeable(m, i, j, conv)) options.emplace_back(i, j);
    if (options.empty()) return m;
    const auto [i, j] = options[rng() % options.size()];
    m = merge_states(m, i, j, conv);
  }
}

/// Random matrix whose trimmed form is nonempty.
Matrix random_live_matrix(std::mt19937_64& rng) {
  while (true) {
    Matrix m = oracle::random_matrix(rng, 1 + rng() % 5, 2);
    auto s = sft_from_matrix(m);
    if (!s.empty()) return s.adjacency;
  }
}

}  // namespace

TEST_CASE("golden mean from a forbidden word") {
  const auto g = golden_mean();
  CHECK(g.states() == 2);
  CHECK(find_isomorphism(g.adjacency, kGolden));
  for (int L = 1; L <= 4; ++L) CHECK(word_count(g, L) == std::vector<std::uint64_t>{2, 3, 5, 8}[L - 1]);
  CHECK(periodic_count(g, 3) == 4);
}

TEST_CASE("full and empty shifts") {
  const auto full = sft_from_forbidden(Alphabet(2), {});
  CHECK(word_count(full, 5) == 32);
  const auto full3 = sft_from_forbidden(Alphabet(3), {});
  for (int L = 1; L <= 4; ++L) CHECK(word_count(full3, L) == static_cast<std::uint64_t>(std::pow(3, L)));
  const auto empty = sft_from_forbidden(Alphabet(2), {Word{0}, Word{1}});
  CHECK(empty.empty());
  CHECK(word_count(empty, 3) == 0);
  CHECK(periodic_count(empty, 2) == 0);
  CHECK(periodic_count(sft_from_matrix(kFull2), 1) == 2);
}

TEST_CASE("forbidden-word language matches brute-force filtering") {
  std::mt19937_64 rng(61);
  for (int i = 0; i < 30; ++i) {
    std::set<Word> forbidden;
    const std::size_t count = 1 + rng() % 3;
    for (std::size_t f = 0; f < count; ++f) forbidden.insert(oracle::random_word(rng, 2, 2 + rng() % 2));
    const auto s = sft_from_forbidden(Alphabet(2), forbidden);
    const std::size_t m = std::max<std::size_t>(2, std::max_element(forbidden.begin(), forbidden.end(),
        [](const Word& a, const Word& b) { return a.size() < b.size(); })->size());
    for (std::size_t len = 1; len <= m + 3; ++len) {
      // at most 4 block states, so 5 extra cells on each side reach a cycle
      const auto expect = oracle::extendable(2, len, 5, forbidden);
      if (s.empty()) {
        CHECK(expect.empty());
        continue;
      }
      CHECK(words(s, static_cast<int>(len)) == expect);
      CHECK(word_count(s, static_cast<int>(len)) == expect.size());
    }
  }
}

TEST_CASE("amalgamation examples") {
  const auto [a, t] = total_amalgamation(sft_from_matrix(kFull2));
  CHECK(a.adjacency == kOne2);
  CHECK(t.merges.size() == 1);
  CHECK(total_amalgamation(sft_from_matrix(kGolden)).first.adjacency == kGolden);
  CHECK(total_amalgamation(sft_from_matrix(kOne2)).first.adjacency == kOne2);
  CHECK_THROWS_AS(total_amalgamation(sft_from_matrix(kFull2, Sidedness::TwoSided)), std::invalid_argument);
}

TEST_CASE("conventions transpose each other") {
  const Matrix m{{1, 1, 0}, {1, 1, 0}, {1, 0, 1}};
  // rows 0 and 1 agree; columns do not
  CHECK(mergeable(m, 0, 1, AmalgamationConvention::OutgoingRows));
  CHECK(!mergeable(m, 0, 1, AmalgamationConvention::IncomingColumns));
  CHECK(merge_states(m, 0, 1, AmalgamationConvention::OutgoingRows) == Matrix{{2, 0}, {1, 1}});
}

TEST_CASE("conjugacy examples") {
  CHECK(one_sided_conjugate(sft_from_matrix(kFull2), sft_from_matrix(kOne2)));
  CHECK(!one_sided_conjugate(sft_from_matrix(kFull2), sft_from_matrix(kGolden)));
  CHECK(one_sided_conjugate(sft_from_matrix(kGolden), sft_from_matrix(kGolden)));
  const Matrix big(13, std::vector<std::uint64_t>(13, 1));
  CHECK_THROWS_AS(find_isomorphism(big, big), BudgetError);
}

TEST_CASE("amalgamation preserves periodic counts and entropy") {
  std::mt19937_64 rng(62);
  for (int i = 0; i < 100; ++i) {
    const Matrix m = random_live_matrix(rng);
    const auto a = total_amalgamation(sft_from_matrix(m)).first.adjacency;
    for (int n = 1; n <= 6; ++n) CHECK(oracle::closed_walks(a, n) == oracle::closed_walks(m, n));
    // word counts agree up to a factor bounded independently of L
    const double r8 = double(oracle::matrix_word_count(m, 8)) / double(oracle::matrix_word_count(a, 8));
    const double r4 = double(oracle::matrix_word_count(m, 4)) / double(oracle::matrix_word_count(a, 4));
    CHECK(r8 >= 1.0);
    CHECK(r8 <= double(m.size()) * double(m.size()) * 8.0);
    CHECK(r4 >= 1.0);
  }
}

TEST_CASE("amalgamation is idempotent and order independent") {
  std::mt19937_64 rng(63);
  for (int i = 0; i < 100; ++i) {
    const Matrix m = random_live_matrix(rng);
    for (auto conv : {AmalgamationConvention::IncomingColumns, AmalgamationConvention::OutgoingRows}) {
      const auto [a, t] = total_amalgamation(sft_from_matrix(m), conv);
      CHECK(total_amalgamation(a, conv).first.adjacency == a.adjacency);
      CHECK(replay(m, t, conv) == a.adjacency);
      for (int trial = 0; trial < 3; ++trial)
        CHECK(find_isomorphism(random_total_amalgamation(m, rng, conv), a.adjacency));
    }
  }
}

TEST_CASE("one-sided conjugacy is an equivalence on a small corpus") {
  std::mt19937_64 rng(64);
  std::vector<SftPresentation> corpus{sft_from_matrix(kFull2), sft_from_matrix(kOne2), sft_from_matrix(kGolden)};
  for (int i = 0; i < 12; ++i) corpus.push_back(sft_from_matrix(random_live_matrix(rng)));
  const std::size_t n = corpus.size();
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rel[i][j] = one_sided_conjugate(corpus[i], corpus[j]);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(rel[i][i]);
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(rel[i][j] == rel[j][i]);
      for (std::size_t k = 0; k < n; ++k)
        if (rel[i][j] && rel[j][k]) CHECK(rel[i][k]);
      if (rel[i][j]) {
        for (int p = 1; p <= 6; ++p) CHECK(periodic_count(corpus[i], p) == periodic_count(corpus[j], p));
      }
    }
  }
}

TEST_CASE("isomorphism returns a valid permutation") {
  std::mt19937_64 rng(65);
  for (int i = 0; i < 50; ++i) {
    const Matrix m = oracle::random_matrix(rng, 1 + rng() % 6, 2);
    std::vector<std::size_t> perm(m.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix b(m.size(), std::vector<std::uint64_t>(m.size()));
    for (std::size_t x = 0; x < m.size(); ++x)
      for (std::size_t y = 0; y < m.size(); ++y) b[perm[x]][perm[y]] = m[x][y];
    const auto p = find_isomorphism(m, b);
    REQUIRE(p);
    for (std::size_t x = 0; x < m.size(); ++x)
      for (std::size_t y = 0; y < m.size(); ++y) CHECK(b[(*p)[x]][(*p)[y]] == m[x][y]);
  }
  CHECK(!find_isomorphism(kFull2, kGolden));
}

TEST_CASE("graph subshift examples") {
  const auto id = graph_subshift(identity_rule(Alphabet(3)));
  for (int L = 1; L <= 4; ++L) CHECK(word_count(id, L) == static_cast<std::uint64_t>(std::pow(3, L)));
  for (const auto& w : words(id, 3))
    for (State s : w) CHECK(s / 3 == s % 3);

  const auto f = graph_subshift(example_021_rule());
  for (int L = 1; L <= 6; ++L) {
    CHECK(projected_word_count(f, 0, L) == static_cast<std::uint64_t>(std::pow(3, L)));
    CHECK(word_count(f, L) == 5 * static_cast<std::uint64_t>(std::pow(3, L - 1)));
  }

  const auto s = graph_subshift(shift_rule(Alphabet(2)));
  for (const auto& w : words(s, 4))
    for (std::size_t i = 0; i + 1 < w.size(); ++i) CHECK(w[i] % 2 == w[i + 1] / 2);

  const LocalRule wide = LocalRule::tabulate(Alphabet(2), Sidedness::OneSided, {0, 2},
                                             [](std::span<const State> x) { return x[2]; });
  CHECK_THROWS_WITH_AS(graph_subshift(wide), doctest::Contains("recode first"), std::invalid_argument);
}

TEST_CASE("phi times phi examples") {
  const LocalRule F = example_021_rule();
  const BlockMap id = identity_map(Alphabet(3), Sidedness::OneSided);
  CHECK(check_phi_times_phi(F, F, id));
  const LocalRule G = relabel(F, std::vector<State>{0, 2, 1});
  const BlockMap swap(Alphabet(3), Alphabet(3), Sidedness::OneSided, {0, 0}, {0, 2, 1});
  CHECK(check_phi_times_phi(F, G, swap));
  CHECK(!check_phi_times_phi(F, identity_rule(Alphabet(3)), id));
  CHECK_THROWS_AS(check_phi_times_phi(F, identity_rule(Alphabet(2)), id), std::invalid_argument);
}

TEST_CASE("trace SFT approximations") {
  const auto f = trace_sft_approx(example_021_rule(), 1, 2);
  CHECK(!f.exact);
  std::set<Word> two;
  for (const auto& w : words(f.sft, 2)) two.insert(w);
  CHECK(two == trace_words(example_021_rule(), 1, 2).words());
  CHECK(words(f.sft, 3).count(Word{2, 0, 1}) == 1);
  CHECK(!trace_words(example_021_rule(), 1, 3).contains(Word{2, 0, 1}));

  const auto id = trace_sft_approx(identity_rule(Alphabet(3)), 1, 1);
  CHECK(id.exact);
  CHECK(word_count(id.sft, 5) == 3);
  const auto s = trace_sft_approx(shift_rule(Alphabet(2)), 1, 1);
  CHECK(s.exact);
  CHECK(word_count(s.sft, 6) == 64);
}

TEST_CASE("trace conjugacy reports unknown without certification") {
  CHECK(trace_conjugacy(example_021_rule(), example_021_rule(), 1, 2) == Tristate::Unknown);
  CHECK(trace_conjugacy(shift_rule(Alphabet(2)), shift_rule(Alphabet(2)), 1, 2) == Tristate::Yes);
  CHECK(trace_conjugacy(shift_rule(Alphabet(2)), identity_rule(Alphabet(2)), 1, 2) == Tristate::No);
}

TEST_CASE("matrix text round trip and errors") {
  const Matrix m{{0, 2}, {1, 1}};
  CHECK(format_matrix(m) == "2\n0 2\n1 1\n");
  CHECK(parse_matrix(format_matrix(m)) == m);
  CHECK(parse_matrix("# comment\n2\n0 2 # row\n1 1\n") == m);
  try {
    parse_matrix("2\n0 2\n1 x\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_matrix("2\n0 2\n1\n"), ParseError);
  CHECK_THROWS_AS(parse_matrix(""), ParseError);
}
