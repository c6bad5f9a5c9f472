#pragma once

// Subshifts of finite type as nonnegative integer matrices.
//
// An unlabeled presentation is the edge shift of its matrix: words are edge
// paths. A labeled presentation comes from a higher-block construction:
// state i stands for the word state_words[i] of length m-1 and the 0/1
// matrix allows the m-blocks; words of the subshift are then the label
// sequences of vertex paths.
//
// One-sided conjugacy follows Williams: merge states until no two are
// mergeable, then compare the results up to isomorphism. With the default
// IncomingColumns convention two states merge when their columns agree (same
// predecessors with multiplicity, self-loops identified); the merged row is
// the sum. This is an out-amalgamation, whose inverse has anticipation 1 and
// is therefore a conjugacy of one-sided edge shifts read left to right. The
// OutgoingRows convention is the transpose (one-sided shifts read right to
// left).

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cadyn/core.hpp"

namespace cadyn {

using Matrix = std::vector<std::vector<std::uint64_t>>;

struct SftPresentation {
  Sidedness sides = Sidedness::OneSided;
  Matrix adjacency;
  /// Labeled presentations only: the (m-1)-word each state stands for.
  std::optional<std::vector<Word>> state_words;
  /// Symbol alphabet of the labels (labeled presentations).
  Alphabet alphabet;

  std::size_t states() const { return adjacency.size(); }
  bool empty() const { return adjacency.empty(); }
  bool labeled() const { return state_words.has_value(); }
  /// m - 1 for labeled presentations.
  std::size_t label_length() const;
};

/// Removes states with no successor and, when `both_ends`, no predecessor,
/// until none remain.
SftPresentation trim(SftPresentation s, bool both_ends = true);

/// Higher-block presentation of X_S with window m = max(2, longest forbidden
/// word, min_window). Two-sided presentations are trimmed at both ends,
/// one-sided ones only at dead ends.
SftPresentation sft_from_forbidden(const Alphabet& a, const std::set<Word>& forbidden,
                                   Sidedness sides = Sidedness::TwoSided,
                                   std::size_t min_window = 2);
/// Presentation whose allowed m-blocks are exactly `allowed` (all of length
/// m >= 1; m = 1 allows every sequence over the listed symbols).
SftPresentation sft_from_allowed(const Alphabet& a, const std::set<Word>& allowed,
                                 Sidedness sides = Sidedness::TwoSided);

/// Unlabeled edge shift of a square matrix (trimmed).
SftPresentation sft_from_matrix(Matrix m, Sidedness sides = Sidedness::OneSided);

/// Number of words of length L (labeled: label words; unlabeled: edge paths).
std::uint64_t word_count(const SftPresentation& s, int L);
/// Label words of length L, for labeled presentations.
std::set<Word> words(const SftPresentation& s, int L);
/// trace(A^n).
std::uint64_t periodic_count(const SftPresentation& s, int n);

enum class AmalgamationConvention { IncomingColumns, OutgoingRows };

struct AmalgamationTrace {
  std::vector<std::pair<std::size_t, std::size_t>> merges;  ///< indices at merge time
  Matrix result;
};

/// States i < j that may be merged.
bool mergeable(const Matrix& m, std::size_t i, std::size_t j,
               AmalgamationConvention conv = AmalgamationConvention::IncomingColumns);
/// Merges j into i (i < j); j's index disappears.
Matrix merge_states(const Matrix& m, std::size_t i, std::size_t j,
                    AmalgamationConvention conv = AmalgamationConvention::IncomingColumns);

/// Merges the lexicographically least mergeable pair until none is left, then
/// relabels states in breadth-first order from state 0.
std::pair<SftPresentation, AmalgamationTrace> total_amalgamation(
    const SftPresentation& s,
    AmalgamationConvention conv = AmalgamationConvention::IncomingColumns);

Matrix replay(const Matrix& m, const AmalgamationTrace& t,
              AmalgamationConvention conv = AmalgamationConvention::IncomingColumns);

/// Permutation p with b[p[i]][p[j]] = a[i][j], if any. Throws BudgetError
/// beyond `max_states`.
std::optional<std::vector<std::size_t>> find_isomorphism(const Matrix& a, const Matrix& b,
                                                         std::size_t max_states = 12);

bool one_sided_conjugate(const SftPresentation& x, const SftPresentation& y,
                         AmalgamationConvention conv = AmalgamationConvention::IncomingColumns);

/// {(c, F(c))} as a labeled presentation over A x A with states (a, b) and
/// edges (a0,b0) -> (a1,b1) whenever b0 = F(a0 a1).
SftPresentation graph_subshift(const LocalRule& F);
/// Number of distinct length-L words on one track of a labeled presentation
/// over a product alphabet.
std::uint64_t projected_word_count(const SftPresentation& s, std::size_t track, int L);

/// phi x phi maps graph_subshift(F) onto graph_subshift(G) bijectively;
/// equivalently phi is a strong conjugacy from F to G.
bool check_phi_times_phi(const LocalRule& F, const LocalRule& G, const BlockMap& phi);

struct TraceSftApprox {
  SftPresentation sft;
  /// Every (m+1)-word of the approximation is a trace word at depth m+1.
  bool exact = false;
};
/// One-sided SFT over A^k whose allowed m-blocks are the depth-m trace words,
/// m = max(L, 2).
TraceSftApprox trace_sft_approx(const LocalRule& r, int k, int L);

enum class Tristate { Yes, No, Unknown };
/// Compares the trace SFT approximations of two rules with Williams'
/// procedure when both are certified at depth L; Unknown otherwise.
Tristate trace_conjugacy(const LocalRule& F, const LocalRule& G, int k, int L);

// Matrix text format: first line n, then n rows of n integers.
std::string format_matrix(const Matrix& m);
Matrix parse_matrix(std::string_view text);

}  // namespace cadyn
