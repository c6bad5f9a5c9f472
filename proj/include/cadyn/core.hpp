#pragma once

// Alphabets, words, sliding block maps and cellular automaton local rules.
//
// A neighborhood word w_0 .. w_{m-1} is stored at index
// sum_t w_t * n^(m-1-t), i.e. lexicographic order with state 0 smallest and
// the leftmost cell most significant.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cadyn/error.hpp"

namespace cadyn {

using State = std::uint32_t;
using Word = std::vector<State>;

/// Default limit on the number of table entries a single map may hold.
inline constexpr std::uint64_t kDefaultTableBudget = 100'000'000;

enum class Sidedness { OneSided, TwoSided };

const char* to_string(Sidedness s);

/// States are 0..size-1. A product alphabet records its factor sizes; a state
/// is then a mixed-radix number with the first factor most significant.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::uint32_t size);
  /// Product alphabet; `factors` must all be >= 1.
  static Alphabet product_of(std::vector<std::uint32_t> factors);
  static Alphabet product(const Alphabet& a, const Alphabet& b);

  std::uint32_t size() const { return size_; }
  /// Factor sizes; a plain alphabet has the single factor {size}.
  const std::vector<std::uint32_t>& factors() const { return factors_; }
  std::size_t tracks() const { return factors_.size(); }
  bool is_product() const { return factors_.size() > 1; }

  std::vector<State> split(State s) const;
  State join(std::span<const State> digits) const;
  State track_value(State s, std::size_t track) const;

  bool contains(State s) const { return s < size_; }

  /// Same size and same factor structure.
  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::uint32_t size_ = 1;
  std::vector<std::uint32_t> factors_{1};
};

/// Inclusive interval [lo, hi] of cell offsets read by a map.
struct Neighborhood {
  int lo = 0;
  int hi = 0;

  int width() const { return hi - lo + 1; }
  int radius() const;
  friend bool operator==(const Neighborhood&, const Neighborhood&) = default;
};

/// n^m with overflow detection; returns nullopt on overflow of 64 bits.
std::optional<std::uint64_t> checked_pow(std::uint64_t n, unsigned m);

/// Index of a word in lexicographic order over an alphabet of size n.
std::uint64_t word_index(std::span<const State> w, std::uint32_t n);
/// Inverse of word_index for words of length m.
Word index_word(std::uint64_t index, std::uint32_t n, unsigned m);

/// Sliding block code between full shifts over `source` and `target`.
/// The table is total: one output state per source word of neighborhood width.
class BlockMap {
 public:
  BlockMap(Alphabet source, Alphabet target, Sidedness sides, Neighborhood nb,
           std::vector<State> table);

  /// Builds the table by evaluating `fn` on every window in index order.
  template <class Fn>
  static BlockMap tabulate(Alphabet source, Alphabet target, Sidedness sides,
                           Neighborhood nb, Fn&& fn,
                           std::uint64_t budget = kDefaultTableBudget) {
    const std::uint64_t entries = table_entries(source, nb, budget);
    std::vector<State> table(entries);
    Word window(static_cast<std::size_t>(nb.width()), 0);
    for (std::uint64_t i = 0; i < entries; ++i) {
      table[i] = fn(std::span<const State>(window));
      // advance the odometer, last cell fastest
      for (std::size_t p = window.size(); p-- > 0;) {
        if (++window[p] < source.size()) break;
        window[p] = 0;
      }
    }
    return BlockMap(std::move(source), std::move(target), sides, nb,
                    std::move(table));
  }

  /// Number of table entries for `nb` over `source`; BudgetError if above
  /// `budget`.
  static std::uint64_t table_entries(const Alphabet& source, Neighborhood nb,
                                     std::uint64_t budget);

  const Alphabet& source() const { return source_; }
  const Alphabet& target() const { return target_; }
  Sidedness sides() const { return sides_; }
  Neighborhood neighborhood() const { return nb_; }
  int width() const { return nb_.width(); }
  int radius() const { return nb_.radius(); }
  const std::vector<State>& table() const { return table_; }

  State at(std::uint64_t index) const { return table_[index]; }
  State operator()(std::span<const State> window) const;

  friend bool operator==(const BlockMap&, const BlockMap&) = default;

 private:
  Alphabet source_;
  Alphabet target_;
  Sidedness sides_;
  Neighborhood nb_;
  std::vector<State> table_;
};

/// A cellular automaton: a block map from an alphabet to itself.
class LocalRule {
 public:
  explicit LocalRule(BlockMap map);
  LocalRule(Alphabet alphabet, Sidedness sides, Neighborhood nb,
            std::vector<State> table);

  template <class Fn>
  static LocalRule tabulate(Alphabet alphabet, Sidedness sides,
                            Neighborhood nb, Fn&& fn,
                            std::uint64_t budget = kDefaultTableBudget) {
    return LocalRule(BlockMap::tabulate(alphabet, alphabet, sides, nb,
                                        std::forward<Fn>(fn), budget));
  }

  const BlockMap& map() const { return map_; }
  const Alphabet& alphabet() const { return map_.source(); }
  Sidedness sides() const { return map_.sides(); }
  Neighborhood neighborhood() const { return map_.neighborhood(); }
  int width() const { return map_.width(); }
  int radius() const { return map_.radius(); }
  const std::vector<State>& table() const { return map_.table(); }
  State operator()(std::span<const State> window) const { return map_(window); }

  friend bool operator==(const LocalRule&, const LocalRule&) = default;

 private:
  BlockMap map_;
};

/// Spatially periodic configuration repeating `word`.
struct CyclicConfig {
  Word word;

  std::size_t period() const { return word.size(); }
  friend bool operator==(const CyclicConfig&, const CyclicConfig&) = default;
};

CyclicConfig rotate(const CyclicConfig& c, std::size_t by);

// Standard rules.
LocalRule identity_rule(const Alphabet& a, Sidedness sides = Sidedness::OneSided);
/// Left shift as the radius-1 rule x0 x1 -> x1.
LocalRule shift_rule(const Alphabet& a, Sidedness sides = Sidedness::OneSided);
LocalRule constant_rule(const Alphabet& a, State q,
                        Sidedness sides = Sidedness::OneSided);
BlockMap identity_map(const Alphabet& a, Sidedness sides);

// Application.
/// Output cell t is the table value on input[t .. t+width-1]; it therefore
/// describes input cell t - lo.
Word apply_word(const BlockMap& m, std::span<const State> input);
Word apply_word(const LocalRule& r, std::span<const State> input);
CyclicConfig apply_cyclic(const BlockMap& m, const CyclicConfig& c);
CyclicConfig apply_cyclic(const LocalRule& r, const CyclicConfig& c);

// Algebra.
/// outer o inner; requires inner.target() == outer.source() and equal sidedness.
BlockMap compose(const BlockMap& outer, const BlockMap& inner,
                 std::uint64_t budget = kDefaultTableBudget);
LocalRule compose(const LocalRule& outer, const LocalRule& inner,
                  std::uint64_t budget = kDefaultTableBudget);
LocalRule power(const LocalRule& rule, unsigned n,
                std::uint64_t budget = kDefaultTableBudget);
/// Acts as `a` on the first track group and `b` on the second.
LocalRule product(const LocalRule& a, const LocalRule& b,
                  std::uint64_t budget = kDefaultTableBudget);
BlockMap product(const BlockMap& a, const BlockMap& b,
                 std::uint64_t budget = kDefaultTableBudget);

/// Widens the neighborhood to `nb` (which must contain the current one);
/// the added cells are ignored.
BlockMap pad(const BlockMap& m, Neighborhood nb,
             std::uint64_t budget = kDefaultTableBudget);
LocalRule pad(const LocalRule& r, Neighborhood nb,
              std::uint64_t budget = kDefaultTableBudget);

/// Smallest interval containing both.
Neighborhood hull(Neighborhood a, Neighborhood b);

/// First window (over the common neighborhood) on which the maps differ.
struct RuleDifference {
  Neighborhood neighborhood;
  Word window;
  State left;
  State right;
};
std::optional<RuleDifference> first_difference(const BlockMap& f,
                                               const BlockMap& g);
/// Equality of the induced global maps.
bool equal_maps(const BlockMap& f, const BlockMap& g);
bool equal_rules(const LocalRule& f, const LocalRule& g);

/// Restriction of a product-alphabet map to a group of tracks. Only
/// meaningful when those output tracks depend on the same input tracks alone;
/// the other input tracks are fixed to 0.
LocalRule project(const LocalRule& r, std::span<const std::size_t> tracks);
LocalRule project(const LocalRule& r, std::size_t track);

/// Output track t depends on input track u (for product alphabets).
std::vector<std::vector<bool>> track_dependencies(const LocalRule& r);

/// Groups of tracks that evolve independently of one another, ordered by
/// their smallest track. A plain alphabet yields a single group.
std::vector<std::vector<std::size_t>> independent_track_groups(const LocalRule& r);

/// Fixes `track` to `value` and returns the rule on the remaining tracks, or
/// nullopt if that track does not evolve autonomously or `value` is not
/// quiescent for it.
std::optional<LocalRule> restrict_track(const LocalRule& r, std::size_t track,
                                        State value);

/// Conjugates a rule by a symbol permutation: result(x) = perm(r(perm^-1(x))).
LocalRule relabel(const LocalRule& r, std::span<const State> perm);

struct StateClass {
  bool quiescent = false;
  bool spreading = false;
};
StateClass classify_state(const LocalRule& r, State s);

}  // namespace cadyn
