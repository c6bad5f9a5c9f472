#include <doctest.h>

#include "cadyn/reduction.hpp"
#include "cadyn/rule_io.hpp"
#include "cadyn/trace.hpp"
#include "oracles.hpp"

using namespace cadyn;

namespace {

Word w3(std::string_view s) { return parse_word(s, 3); }

BlockMap b_projection(const Alphabet& ab, std::uint32_t nb, int width) {
  return BlockMap::tabulate(ab, Alphabet(nb), Sidedness::OneSided, {0, width - 1},
                            [&](std::span<const State> x) { return x[0] % nb; });
}

}  // namespace

TEST_CASE("example rule table entries") {
  const LocalRule F = example_021_rule();
  CHECK(F(w3("00")) == 0);
  CHECK(F(w3("11")) == 2);
  CHECK(F(w3("21")) == 0);
  CHECK(F.sides() == Sidedness::OneSided);
  CHECK(F.neighborhood() == Neighborhood{0, 1});
}

TEST_CASE("product power") {
  const LocalRule p = product_power(1);
  CHECK(p.alphabet().size() == 9);
  CHECK(subword_complexity(p, 1, 2) == 25);
  CHECK(equal_rules(project(p, std::size_t{0}), example_021_rule()));
  CHECK(product_power(2).alphabet().size() == 81);
  CHECK_THROWS_AS(product_power(0), std::invalid_argument);
}

TEST_CASE("constant H makes both rules the identity on A") {
  const LocalRule H = constant_rule(Alphabet(2), 0);
  const auto inst = build_instance(pad(H, {0, 1}), 0, 1);
  CHECK(equal_rules(inst.calF, inst.calG));
  CHECK(equal_rules(inst.calG, product(pad(identity_rule(inst.A), {0, 1}), pad(H, {0, 1}))));
  const BlockMap phi = build_phi(inst, 1);
  CHECK(equal_maps(phi, identity_map(inst.alphabet(), Sidedness::OneSided)));
  CHECK(verify_certificate(phi, inst.calF, inst.calG).valid());
}

TEST_CASE("AND instance follows the case split") {
  const auto inst = build_instance(and_rule(), 0, 1);
  CHECK(inst.q_spreading);
  CHECK(!inst.entropy_gap_condition);
  CHECK(!inst.warnings.empty());
  const LocalRule f2 = product_power(1);
  for (State a0 = 0; a0 < 9; ++a0) {
    for (State a1 = 0; a1 < 9; ++a1) {
      const State f = f2(std::vector<State>{a0, a1});
      CHECK(inst.calF(std::vector<State>{a0 * 2 + 1, a1 * 2 + 1}) == f * 2 + 1);
      CHECK(inst.calF(std::vector<State>{a0 * 2 + 1, a1 * 2 + 0}) == a0 * 2 + 0);
      CHECK(inst.calG(std::vector<State>{a0 * 2 + 1, a1 * 2 + 1}) == a0 * 2 + 1);
    }
  }
}

TEST_CASE("instance preconditions") {
  CHECK_THROWS_AS(build_instance(example_021_rule(), 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_instance(identity_rule(Alphabet(2), Sidedness::TwoSided), 0, 1),
                  std::invalid_argument);
  const LocalRule wide = LocalRule::tabulate(Alphabet(2), Sidedness::OneSided, {0, 2},
                                             [](std::span<const State> x) { return x[0] * x[2]; });
  CHECK_THROWS_AS(build_instance(wide, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_phi(build_instance(and_rule(), 0, 1), 4), std::invalid_argument);
  CHECK_THROWS_AS(build_phi(build_instance(chain_rule(), 0, 1), 1), std::invalid_argument);
}

TEST_CASE("chain instance yields a valid certificate of width three") {
  const auto inst = build_instance(chain_rule(), 0, 1);
  const BlockMap phi = build_phi(inst, 2);
  CHECK(phi.width() == 3);
  CHECK(phi.source().size() == 27);
  // the B layer is carried through unchanged
  CHECK(equal_maps(compose(b_projection(inst.alphabet(), 3, 1), phi), b_projection(inst.alphabet(), 3, 3)));
  const auto cert = verify_certificate(phi, inst.calF, inst.calG);
  CHECK(cert.homomorphism);
  CHECK(cert.injective);
  CHECK(cert.surjective);
  CHECK(cert.valid());
  // after the nilpotency horizon F behaves as G
  const LocalRule f2 = power(inst.calF, 2);
  CHECK(equal_rules(compose(inst.calF, f2), compose(inst.calG, f2)));
}

TEST_CASE("nilpotent instances have polynomial trace growth") {
  for (const LocalRule& H : {pad(constant_rule(Alphabet(2), 0), {0, 1}), chain_rule()}) {
    const auto inst = build_instance(H, 0, 1);
    for (const LocalRule* r : {&inst.calF, &inst.calG}) {
      std::uint64_t prev = subword_complexity(*r, 1, 1);
      std::int64_t first = -1;
      for (int L = 2; L <= 8; ++L) {
        const auto p = subword_complexity(*r, 1, L);
        const auto d = static_cast<std::int64_t>(p - prev);
        if (first < 0) first = d;
        CHECK(d <= std::max<std::int64_t>(first, 0) * 4 + 64);
        prev = p;
      }
    }
  }
}

TEST_CASE("certificate examples") {
  const LocalRule F = example_021_rule();
  const BlockMap id = identity_map(Alphabet(3), Sidedness::OneSided);
  CHECK(verify_certificate(id, F, F).valid());
  const auto bad = verify_certificate(id, F, shift_rule(Alphabet(3)));
  CHECK(!bad.homomorphism);
  REQUIRE(bad.residue);
  CHECK(bad.residue->left != bad.residue->right);
  const BlockMap collapse(Alphabet(3), Alphabet(3), Sidedness::OneSided, {0, 0}, {0, 0, 0});
  const auto c = verify_certificate(collapse, F, constant_rule(Alphabet(3), 0));
  CHECK(!c.injective);
  CHECK(c.collision);
  CHECK(!c.surjective);
  CHECK(c.orphan);
}

TEST_CASE("conjugacy search examples") {
  const LocalRule F = example_021_rule();
  const std::vector<State> swap{0, 2, 1};
  const LocalRule G = relabel(F, swap);
  const auto found = search_strong_conjugacy(F, G, 1);
  REQUIRE(found);
  CHECK(found->phi.table() == std::vector<State>{0, 2, 1});
  CHECK(found->valid());

  const auto self = search_strong_conjugacy(F, F, 1);
  REQUIRE(self);
  CHECK(self->phi.table() == std::vector<State>{0, 1, 2});

  const LocalRule id = identity_rule(Alphabet(3));
  CHECK(search_strong_conjugacy(F, pad(id, {0, 1}), 2) == std::nullopt);
  const auto ob = trace_count_obstruction(F, id, 2, 8);
  REQUIRE(ob);
  CHECK(!ob->forward);
  CHECK(ob->narrow > ob->wide);
}

TEST_CASE("search results are valid certificates on random relabelings") {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 10; ++i) {
    const LocalRule r = oracle::random_rule(rng, 3, {0, 1});
    std::vector<State> perm{0, 1, 2};
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto cert = search_strong_conjugacy(r, relabel(r, perm), 1);
    REQUIRE(cert);
    CHECK(verify_certificate(cert->phi, r, relabel(r, perm)).valid());
    // any valid certificate respects the trace-count inequalities
    for (int L = 1; L <= 4; ++L) {
      CHECK(subword_complexity(relabel(r, perm), 1, L) <= subword_complexity(r, 1, L));
      CHECK(subword_complexity(r, 1, L) <= subword_complexity(relabel(r, perm), 1, L));
    }
  }
}
