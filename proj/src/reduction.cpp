#include "cadyn/reduction.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "cadyn/trace.hpp"

namespace cadyn {

namespace {

// rho[a][x] = image of x under the permutation attached to right neighbour a
constexpr std::array<std::array<State, 3>, 3> kRho{{{0, 2, 1}, {1, 2, 0}, {0, 2, 1}}};
constexpr std::array<std::array<State, 3>, 3> kPi{{{0, 2, 1}, {0, 2, 1}, {2, 0, 1}}};

}  // namespace

LocalRule example_021_rule() {
  return LocalRule::tabulate(Alphabet(3), Sidedness::OneSided, {0, 1},
                             [](std::span<const State> x) { return kRho[x[1]][x[0]]; });
}

LocalRule example_021_inverse() {
  return LocalRule::tabulate(Alphabet(3), Sidedness::OneSided, {0, 1},
                             [](std::span<const State> x) { return kPi[x[1]][x[0]]; });
}

LocalRule and_rule() {
  return LocalRule::tabulate(Alphabet(2), Sidedness::OneSided, {0, 1},
                             [](std::span<const State> x) { return x[0] * x[1]; });
}

LocalRule chain_rule() {
  return LocalRule::tabulate(Alphabet(3), Sidedness::OneSided, {0, 1},
                             [](std::span<const State> x) { return x[0] == 2 ? State{1} : State{0}; });
}

LocalRule product_power(int k, std::uint64_t budget) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const double entries = std::pow(3.0, 4.0 * k);
  if (entries > double(budget)) throw BudgetError("table", entries, double(budget));
  const LocalRule f = example_021_rule();
  LocalRule acc = f;
  for (int i = 1; i < 2 * k; ++i) acc = product(acc, f, budget);
  return acc;
}

ReductionInstance build_instance(const LocalRule& H, State q, int k) {
  if (H.sides() != Sidedness::OneSided) throw std::invalid_argument("H must be one-sided");
  if (H.neighborhood().lo < 0 || H.neighborhood().hi > 1)
    throw std::invalid_argument("H must have neighborhood inside [0,1]");
  const StateClass cls = classify_state(H, q);
  if (!cls.quiescent) throw std::invalid_argument("q is not quiescent for H");

  const LocalRule h = pad(H, {0, 1});
  const LocalRule f2k = product_power(k);
  const Alphabet A = f2k.alphabet();
  const Alphabet AB = Alphabet::product(A, H.alphabet());
  const std::uint32_t nb = H.alphabet().size();

  const LocalRule calG = product(pad(identity_rule(A), {0, 1}), h);
  const LocalRule calF = LocalRule::tabulate(AB, Sidedness::OneSided, {0, 1},
                                             [&](std::span<const State> x) {
                                               const State a0 = x[0] / nb, b0 = x[0] % nb;
                                               const State a1 = x[1] / nb, b1 = x[1] % nb;
                                               const State hb = h(std::array{b0, b1});
                                               const State a = hb != q ? f2k(std::array{a0, a1}) : a0;
                                               return a * nb + hb;
                                             });

  ReductionInstance inst{H, q, k, A, f2k, calF, calG, cls.spreading, false, {}};
  inst.entropy_gap_condition = double(k) > std::log2(double(nb));
  if (!inst.entropy_gap_condition)
    inst.warnings.push_back("k <= log2|B|: the entropy gap for non-nilpotent H is not guaranteed");
  if (!inst.q_spreading) inst.warnings.push_back("q is quiescent but not spreading");
  return inst;
}

BlockMap build_phi(const ReductionInstance& inst, unsigned n) {
  const auto index = nilpotency_within(inst.H, inst.q, n);
  if (!index) {
    throw std::invalid_argument("H is not certified nilpotent within " + std::to_string(n) +
                                " steps");
  }
  const LocalRule fn = power(inst.calF, n);
  const std::uint32_t nb = inst.H.alphabet().size();
  const Alphabet& ab = inst.alphabet();
  return BlockMap::tabulate(ab, ab, Sidedness::OneSided, {0, static_cast<int>(n)},
                            [&](std::span<const State> x) {
                              // fn has neighborhood [0, n] as well
                              return (fn(x) / nb) * nb + x[0] % nb;
                            });
}

ConjugacyCertificate verify_certificate(const BlockMap& phi, const LocalRule& F,
                                        const LocalRule& G) {
  if (phi.source().size() != F.alphabet().size() || phi.target().size() != G.alphabet().size())
    throw std::invalid_argument("certificate: alphabet mismatch");
  if (phi.sides() != F.sides() || F.sides() != G.sides())
    throw std::invalid_argument("certificate: sidedness mismatch");
  ConjugacyCertificate c{phi, false, false, false, {}, {}, {}};
  c.residue = first_difference(compose(phi, F.map()), compose(G.map(), phi));
  c.homomorphism = !c.residue;
  auto inj = is_injective(phi);
  c.injective = inj.verdict;
  c.collision = inj.collision;
  auto sur = is_surjective(phi);
  c.surjective = sur.verdict;
  c.orphan = sur.orphan;
  return c;
}

std::optional<ConjugacyCertificate> search_strong_conjugacy(const LocalRule& F,
                                                            const LocalRule& G, int max_width,
                                                            std::uint64_t node_budget) {
  if (F.sides() != G.sides()) throw std::invalid_argument("search: sidedness mismatch");
  const Neighborhood nb = hull(F.neighborhood(), G.neighborhood());
  const LocalRule pf = pad(F, nb), pg = pad(G, nb);
  const std::uint32_t na = F.alphabet().size(), nbz = G.alphabet().size();
  const auto wf = static_cast<std::size_t>(nb.width());
  std::uint64_t nodes = 0;

  for (int w = 1; w <= max_width; ++w) {
    const auto entries = BlockMap::table_entries(F.alphabet(), {0, w - 1}, kDefaultTableBudget);
    const auto wlen = static_cast<unsigned>(w) + static_cast<unsigned>(wf) - 1;
    const auto windows = checked_pow(na, wlen);
    if (!windows || *windows > kDefaultTableBudget)
      throw BudgetError("conjugacy-search windows at width " + std::to_string(w),
                        std::pow(double(na), double(wlen)), double(kDefaultTableBudget));

    // phi F (x) = phi(F(x));  G phi (x) = G(phi(x[0..]), ..., phi(x[wf-1..]))
    struct Constraint {
      std::uint64_t lhs;
      std::vector<std::uint64_t> rhs;
      Word f_of_x;
    };
    std::vector<std::vector<Constraint>> ready(entries);
    for (std::uint64_t i = 0; i < *windows; ++i) {
      const Word x = index_word(i, na, wlen);
      Constraint c;
      c.f_of_x = apply_word(pf, x);
      c.lhs = word_index(c.f_of_x, na);
      std::uint64_t last = c.lhs;
      for (std::size_t j = 0; j < wf; ++j) {
        c.rhs.push_back(word_index(std::span<const State>(x).subspan(j, static_cast<std::size_t>(w)), na));
        last = std::max(last, c.rhs.back());
      }
      ready[last].push_back(std::move(c));
    }

    std::vector<State> table(entries, 0);
    Word image(wf);
    auto holds = [&](std::uint64_t e) {
      for (const auto& c : ready[e]) {
        for (std::size_t j = 0; j < wf; ++j) image[j] = table[c.rhs[j]];
        if (table[c.lhs] != pg(image)) return false;
      }
      return true;
    };

    // iterative backtracking over entries in index order
    std::int64_t pos = 0;
    std::vector<std::int64_t> value(entries, -1);
    while (pos >= 0) {
      const auto p = static_cast<std::uint64_t>(pos);
      if (p == entries) {
        BlockMap phi(F.alphabet(), G.alphabet(), F.sides(), {0, w - 1}, table);
        auto cert = verify_certificate(phi, F, G);
        if (cert.valid()) return cert;
        --pos;
        continue;
      }
      if (++value[p] >= static_cast<std::int64_t>(nbz)) {
        value[p] = -1;
        --pos;
        continue;
      }
      if (++nodes > node_budget)
        throw BudgetError("conjugacy-search at width " + std::to_string(w), double(nodes),
                          double(node_budget));
      table[p] = static_cast<State>(value[p]);
      if (holds(p)) ++pos;
    }
  }
  return std::nullopt;
}

std::optional<TraceObstruction> trace_count_obstruction(const LocalRule& F, const LocalRule& G,
                                                        int width, int L_max) {
  for (int L = 1; L <= L_max; ++L) {
    const auto f1 = subword_complexity(F, 1, L), g1 = subword_complexity(G, 1, L);
    const auto fw = subword_complexity(F, width, L), gw = subword_complexity(G, width, L);
    if (g1 > fw) return TraceObstruction{L, width, true, g1, fw};
    if (f1 > gw) return TraceObstruction{L, width, false, f1, gw};
  }
  return std::nullopt;
}

}  // namespace cadyn
