#pragma once

// The nilpotency-to-conjugacy gadget.
//
// Given a one-sided radius-1 rule H over B with quiescent state q and k >= 1,
// build two rules over A x B with A = {0,1,2}^(2k):
//   G((a0,b0)(a1,b1)) = (a0, H(b0 b1))
//   F((a0,b0)(a1,b1)) = (P(a0 a1), H(b0 b1))  if H(b0 b1) != q
//                       (a0,       H(b0 b1))  otherwise
// where P is the 2k-fold product of the reversible 3-state rule below. When H
// is nilpotent with index n, phi = (A-part of F^n, B-part of the identity) is
// a strong conjugacy from F to G; when H is not nilpotent, F carries the
// entropy of P on configurations whose B-track avoids q.

#include <optional>
#include <string>
#include <vector>

#include "cadyn/core.hpp"
#include "cadyn/debruijn.hpp"

namespace cadyn {

/// The reversible one-sided rule x0 x1 -> rho_{x1}(x0) on {0,1,2} with
/// rho_0 = rho_2 = (0)(12) and rho_1 = (012).
LocalRule example_021_rule();
/// Its radius-1 inverse x0 x1 -> pi_{x1}(x0), pi_0 = pi_1 = (0)(12),
/// pi_2 = (021).
LocalRule example_021_inverse();
/// b0 b1 -> b0 * b1 over {0,1}: non-nilpotent, 0 quiescent and spreading.
LocalRule and_rule();
/// b0 b1 -> c(b0) over {0,1,2} with c = 0->0, 1->0, 2->1: nilpotent of index 2.
LocalRule chain_rule();
/// The 2k-fold cartesian product of example_021_rule.
LocalRule product_power(int k, std::uint64_t budget = kDefaultTableBudget);

struct ReductionInstance {
  LocalRule H;
  State q;
  int k;
  Alphabet A;
  LocalRule F2k;
  LocalRule calF;
  LocalRule calG;
  bool q_spreading = false;
  /// k > log2|B|, the condition under which the entropy gap is guaranteed.
  bool entropy_gap_condition = false;
  std::vector<std::string> warnings;

  const Alphabet& alphabet() const { return calF.alphabet(); }
  /// Track index of the B component in the product alphabet.
  std::size_t b_track() const { return alphabet().tracks() - 1; }
};

ReductionInstance build_instance(const LocalRule& H, State q, int k);

/// Throws std::invalid_argument unless nilpotency_within(H, q, n) certifies
/// an index <= n.
BlockMap build_phi(const ReductionInstance& inst, unsigned n);

struct ConjugacyCertificate {
  BlockMap phi;
  bool homomorphism = false;
  bool injective = false;
  bool surjective = false;
  std::optional<RuleDifference> residue;  ///< where phi F and G phi differ
  std::optional<CollisionWitness> collision;
  std::optional<Word> orphan;

  bool valid() const { return homomorphism && injective && surjective; }
};

/// Checks phi F = G phi exactly and decides bijectivity of phi.
ConjugacyCertificate verify_certificate(const BlockMap& phi, const LocalRule& F,
                                        const LocalRule& G);

inline constexpr std::uint64_t kDefaultSearchBudget = 50'000'000;

/// First valid certificate with neighborhood [0, w-1], w = 1..max_width, in
/// lexicographic (width, table) order. nullopt means none within the width
/// bound; it says nothing about wider maps.
std::optional<ConjugacyCertificate> search_strong_conjugacy(
    const LocalRule& F, const LocalRule& G, int max_width,
    std::uint64_t node_budget = kDefaultSearchBudget);

/// A strong conjugacy F -> G of width w with an inverse of width w' forces
///   p_L(tau_1(G)) <= p_L(tau_w(F))   and   p_L(tau_1(F)) <= p_L(tau_w'(G)).
/// Reports the first L <= L_max violating either inequality at width
/// `width`; a violation rules out every conjugacy whose forward (resp.
/// inverse) map has width <= `width`.
struct TraceObstruction {
  int L;
  int width;
  bool forward;              ///< true: p_L(tau_1(G)) > p_L(tau_w(F))
  std::uint64_t narrow;      ///< p_L(tau_1(.)) of the constrained side
  std::uint64_t wide;        ///< p_L(tau_w(.)) of the other side
};
std::optional<TraceObstruction> trace_count_obstruction(const LocalRule& F, const LocalRule& G,
                                                        int width, int L_max);

}  // namespace cadyn
