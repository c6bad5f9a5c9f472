#pragma once

// Exact trace languages of cellular automata.
//
// The depth-L trace of cells [0,k) is determined by the initial word on the
// dependence window [(L-1)·lo, k-1+(L-1)·hi]; over a full shift every window
// value occurs, so enumerating all windows yields exactly the words of τ_k.
//
// For one-sided rules with neighborhood [0,r] the cells at or right of k never
// see the cells left of k, so the depth-L columns of [0,k) are exactly the
// pairs (initial word on [0,k), depth-(L-1) column of [k,k+r)) pushed through
// the rule. Iterating this from depth 1 costs about |A|^k · p_{L-1}(τ_r)
// instead of |A|^window and is the default for one-sided rules.
//
// A column word e_0 .. e_{L-1} (each e_t in A^k) is packed time-major into a
// base-|A| integer with e_0's cell 0 most significant.

#include <cstdint>
#include <set>
#include <vector>

#include "cadyn/core.hpp"

namespace cadyn {

/// Default limit on the number of initial windows (or column extensions)
/// enumerated.
inline constexpr std::uint64_t kDefaultWindowBudget = 2'000'000'000;

struct TraceOptions {
  std::uint64_t window_budget = kDefaultWindowBudget;
  /// Split product-alphabet rules into independent track groups and combine
  /// their traces.
  bool use_factorization = true;
  /// Enumerate every initial window even for one-sided rules.
  bool force_window_enumeration = false;
};

class TraceTable {
 public:
  TraceTable(std::uint32_t alphabet_size, int k, int L, std::vector<std::uint64_t> codes);

  int k() const { return k_; }
  int depth() const { return L_; }
  std::uint32_t alphabet_size() const { return n_; }
  /// Sorted packed column words.
  const std::vector<std::uint64_t>& codes() const { return codes_; }
  std::uint64_t count() const { return codes_.size(); }

  /// Column word flattened time-major (length k·L).
  Word decode(std::uint64_t code) const;
  std::uint64_t encode(std::span<const State> column) const;
  bool contains(std::span<const State> column) const;
  /// All column words, flattened.
  std::set<Word> words() const;

 private:
  std::uint32_t n_;
  int k_;
  int L_;
  std::vector<std::uint64_t> codes_;
};

/// Size of the dependence window for depth L at width k.
int dependence_window(const LocalRule& r, int k, int L);

TraceTable trace_words(const LocalRule& r, int k, int L, const TraceOptions& opt = {});
std::uint64_t subword_complexity(const LocalRule& r, int k, int L,
                                 const TraceOptions& opt = {});

struct EntropyRow {
  int L;
  std::uint64_t p;
  double bound;  ///< log2(p) / L
};

/// Upper bounds log2(p_L)/L for L = 1..L_max.
struct EntropyReport {
  std::vector<EntropyRow> rows;
};

EntropyReport entropy_upper(const LocalRule& r, int k, int L_max,
                            const TraceOptions& opt = {});

/// TSV "L\tp_L\tratio" with 12 significant digits.
std::string format_entropy_tsv(const EntropyReport& rep);

/// Length-L factors of bi-infinite concatenations of equal-length blocks.
std::set<Word> block_shift_words(const std::set<Word>& blocks, int L);

/// Lower bound on p_L(τ_1(r)) from columns whose `track` stays at `value`:
/// the count for the restricted rule on the remaining tracks. nullopt when the
/// restriction is not invariant.
std::optional<std::uint64_t> restricted_trace_count(const LocalRule& r, std::size_t track,
                                                    State value, int k, int L,
                                                    const TraceOptions& opt = {});

}  // namespace cadyn
