#pragma once

// Decision procedures on the de Bruijn presentation of a block map.
//
// The de Bruijn graph of a map of width w has the words of length w-1 as
// nodes; reading input symbol a at node u emits m(u a) and moves to the
// suffix of u a. The pair graph runs two copies in lockstep and keeps only
// edge pairs with equal outputs. An edge of the pair graph is diagonal when
// both copies sit on the same node and read the same symbol.
//
// Injectivity conditions used here:
//   two-sided: not injective  <=>  some strongly connected component of the
//              pair graph contains a non-diagonal edge. (The diagonal is a
//              copy of the de Bruijn graph and hence one SCC, so any
//              bi-infinite path leaving and re-entering periodic behaviour
//              closes into a cycle; the cycle yields two distinct spatially
//              periodic configurations with equal image.)
//   one-sided: not injective  <=>  some non-diagonal edge ends in a node from
//              which an infinite forward path exists. Configurations over N
//              have no past, so any pair of start nodes is allowed.
// Surjectivity (equal alphabet sizes): surjective <=> no "diamond", i.e. no
// pair-graph path from the diagonal through a non-diagonal edge back to the
// diagonal. Orphans are found by subset construction over the output
// language, which is also the decision used when alphabet sizes differ.

#include <optional>
#include <string>

#include "cadyn/core.hpp"

namespace cadyn {

/// Default limit on pair-graph nodes and subset-construction states.
inline constexpr std::uint64_t kDefaultGraphBudget = 20'000'000;

/// Two inputs with equal images. Each input is prefix followed by the cycle
/// repeated forever; for two-sided witnesses the prefix is empty and the
/// inputs are spatially periodic.
struct CollisionWitness {
  Word prefix_a, cycle_a;
  Word prefix_b, cycle_b;
};

struct DecisionWitness {
  bool verdict = false;
  std::optional<CollisionWitness> collision;  ///< non-injectivity
  std::optional<Word> orphan;                 ///< non-surjectivity
};

DecisionWitness is_injective(const BlockMap& m,
                             std::uint64_t budget = kDefaultGraphBudget);
DecisionWitness is_injective(const LocalRule& r,
                             std::uint64_t budget = kDefaultGraphBudget);
DecisionWitness is_surjective(const BlockMap& m,
                              std::uint64_t budget = kDefaultGraphBudget);
DecisionWitness is_surjective(const LocalRule& r,
                              std::uint64_t budget = kDefaultGraphBudget);

/// Re-simulates a collision: the two inputs differ and have equal images.
bool verify_collision(const BlockMap& m, const CollisionWitness& w);
/// Brute-force check that no word maps onto `orphan` (falls back to a
/// preimage-set sweep when the brute-force space exceeds 2^24 words).
bool verify_orphan(const BlockMap& m, const Word& orphan);

/// "witness: periodic <word>" lines or "witness: eventually-periodic p(c)".
std::string format_collision(const CollisionWitness& w, std::uint32_t alphabet_size);

/// Least-width inverse with width <= max_width, if one exists.
std::optional<LocalRule> inverse_rule(const LocalRule& r, int max_width);

/// Least n <= n_max with power(r, n) the constant-q rule. Throws
/// std::invalid_argument if q is not quiescent.
std::optional<unsigned> nilpotency_within(const LocalRule& r, State q, unsigned n_max,
                                          std::uint64_t budget = kDefaultTableBudget);

struct Periodicity {
  unsigned preperiod;
  unsigned period;
};
/// Least (n, p) by n+p, then n, with r^(n+p) = r^n and n+p <= n_max.
std::optional<Periodicity> periodicity_within(const LocalRule& r, unsigned n_max,
                                              std::uint64_t budget = kDefaultTableBudget);

/// A cyclic word of period <= max_period whose orbit never shows `s`.
/// Throws std::invalid_argument if s is not spreading.
std::optional<Word> avoiding_configuration(const LocalRule& r, State s,
                                           unsigned max_period);

}  // namespace cadyn
