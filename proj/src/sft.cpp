#include "cadyn/sft.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "cadyn/reduction.hpp"
#include "cadyn/trace.hpp"

namespace cadyn {

std::size_t SftPresentation::label_length() const {
  if (!state_words || state_words->empty()) return 0;
  return state_words->front().size();
}

namespace {

std::uint64_t mul_checked(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw BudgetError("word-count", double(a) * double(b), 1.8446744e19);
  return r;
}

std::uint64_t add_checked(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw BudgetError("word-count", double(a) + double(b), 1.8446744e19);
  return r;
}

/// v <- A v
std::vector<std::uint64_t> times(const Matrix& a, const std::vector<std::uint64_t>& v) {
  std::vector<std::uint64_t> out(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) out[i] = add_checked(out[i], mul_checked(a[i][j], v[j]));
  }
  return out;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix c(n, std::vector<std::uint64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (!a[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] = add_checked(c[i][j], mul_checked(a[i][k], b[k][j]));
    }
  }
  return c;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.size(), std::vector<std::uint64_t>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) t[j][i] = m[i][j];
  }
  return t;
}

void check_square(const Matrix& m) {
  for (const auto& row : m) {
    if (row.size() != m.size()) throw std::invalid_argument("matrix must be square");
  }
}

bool has_factor(std::span<const State> w, const std::set<Word>& forbidden) {
  for (const auto& f : forbidden) {
    if (f.size() <= w.size() &&
        std::search(w.begin(), w.end(), f.begin(), f.end()) != w.end())
      return true;
  }
  return false;
}

/// Builds the labeled presentation on (m-1)-words from the accepted m-blocks.
SftPresentation from_blocks(const Alphabet& a, std::size_t m, Sidedness sides,
                            const std::function<bool(std::span<const State>)>& allowed) {
  const std::uint32_t n = a.size();
  const auto states_total = checked_pow(n, static_cast<unsigned>(m - 1));
  const auto blocks_total = checked_pow(n, static_cast<unsigned>(m));
  if (!blocks_total || *blocks_total > 10'000'000)
    throw BudgetError("sft-blocks", std::pow(double(n), double(m)), 1e7);
  SftPresentation s;
  s.sides = sides;
  s.alphabet = a;
  s.adjacency.assign(*states_total, std::vector<std::uint64_t>(*states_total, 0));
  s.state_words.emplace();
  for (std::uint64_t i = 0; i < *states_total; ++i)
    s.state_words->push_back(index_word(i, n, static_cast<unsigned>(m - 1)));
  for (std::uint64_t b = 0; b < *blocks_total; ++b) {
    const Word w = index_word(b, n, static_cast<unsigned>(m));
    if (!allowed(w)) continue;
    s.adjacency[b / n][b % *states_total] = 1;
  }
  return trim(std::move(s), sides == Sidedness::TwoSided);
}

}  // namespace

SftPresentation trim(SftPresentation s, bool both_ends) {
  check_square(s.adjacency);
  bool changed = true;
  while (changed && !s.adjacency.empty()) {
    changed = false;
    const std::size_t n = s.adjacency.size();
    std::vector<bool> keep(n, true);
    for (std::size_t i = 0; i < n; ++i) {
      bool out = false, in = false;
      for (std::size_t j = 0; j < n; ++j) {
        out |= s.adjacency[i][j] != 0;
        in |= s.adjacency[j][i] != 0;
      }
      if (!out || (both_ends && !in)) {
        keep[i] = false;
        changed = true;
      }
    }
    if (!changed) break;
    Matrix next;
    std::vector<Word> words;
    for (std::size_t i = 0; i < n; ++i) {
      if (!keep[i]) continue;
      std::vector<std::uint64_t> row;
      for (std::size_t j = 0; j < n; ++j) {
        if (keep[j]) row.push_back(s.adjacency[i][j]);
      }
      next.push_back(std::move(row));
      if (s.state_words) words.push_back((*s.state_words)[i]);
    }
    s.adjacency = std::move(next);
    if (s.state_words) s.state_words = std::move(words);
  }
  return s;
}

SftPresentation sft_from_forbidden(const Alphabet& a, const std::set<Word>& forbidden,
                                   Sidedness sides, std::size_t min_window) {
  std::size_t m = std::max<std::size_t>(2, min_window);
  for (const auto& f : forbidden) {
    if (f.empty()) throw std::invalid_argument("forbidden words must be nonempty");
    for (State s : f) {
      if (!a.contains(s)) throw std::invalid_argument("forbidden word outside alphabet");
    }
    m = std::max(m, f.size());
  }
  return from_blocks(a, m, sides,
                     [&](std::span<const State> w) { return !has_factor(w, forbidden); });
}

SftPresentation sft_from_allowed(const Alphabet& a, const std::set<Word>& allowed,
                                 Sidedness sides) {
  if (allowed.empty()) {
    SftPresentation s;
    s.sides = sides;
    s.alphabet = a;
    s.state_words.emplace();
    return s;
  }
  const std::size_t m = allowed.begin()->size();
  for (const auto& w : allowed) {
    if (w.size() != m || m == 0) throw std::invalid_argument("allowed blocks must share a positive length");
  }
  if (m == 1) {
    return from_blocks(a, 2, sides, [&](std::span<const State> w) {
      return allowed.count(Word{w[0]}) && allowed.count(Word{w[1]});
    });
  }
  return from_blocks(a, m, sides, [&](std::span<const State> w) {
    return allowed.count(Word(w.begin(), w.end())) > 0;
  });
}

SftPresentation sft_from_matrix(Matrix m, Sidedness sides) {
  check_square(m);
  SftPresentation s;
  s.sides = sides;
  s.adjacency = std::move(m);
  return trim(std::move(s), true);
}

std::set<Word> words(const SftPresentation& s, int L) {
  if (!s.labeled()) throw std::invalid_argument("words: presentation is unlabeled");
  if (L < 1) throw std::invalid_argument("L must be >= 1");
  const auto len = static_cast<std::size_t>(L);
  const std::size_t lab = s.label_length();
  std::set<Word> out;
  const auto& sw = *s.state_words;
  if (len <= lab) {
    for (const auto& w : sw) out.emplace(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(len));
    return out;
  }
  // depth-first over vertex paths, appending the last label symbol per step
  std::function<void(std::size_t, Word&)> walk = [&](std::size_t v, Word& cur) {
    if (cur.size() == len) {
      out.insert(cur);
      return;
    }
    for (std::size_t t = 0; t < s.states(); ++t) {
      if (!s.adjacency[v][t]) continue;
      cur.push_back(sw[t].back());
      walk(t, cur);
      cur.pop_back();
    }
  };
  for (std::size_t v = 0; v < s.states(); ++v) {
    Word cur = sw[v];
    walk(v, cur);
  }
  return out;
}

std::uint64_t word_count(const SftPresentation& s, int L) {
  if (L < 1) throw std::invalid_argument("L must be >= 1");
  if (s.empty()) return 0;
  std::size_t steps = static_cast<std::size_t>(L);
  if (s.labeled()) {
    const std::size_t lab = s.label_length();
    if (steps < lab) return words(s, L).size();
    steps -= lab;
  }
  std::vector<std::uint64_t> v(s.states(), 1);
  for (std::size_t i = 0; i < steps; ++i) v = times(s.adjacency, v);
  std::uint64_t total = 0;
  for (auto x : v) total = add_checked(total, x);
  return total;
}

std::uint64_t periodic_count(const SftPresentation& s, int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (s.empty()) return 0;
  Matrix p = s.adjacency;
  for (int i = 1; i < n; ++i) p = multiply(p, s.adjacency);
  std::uint64_t tr = 0;
  for (std::size_t i = 0; i < p.size(); ++i) tr = add_checked(tr, p[i][i]);
  return tr;
}

// ---------------------------------------------------------------- amalgamation

namespace {

bool rows_mergeable(const Matrix& m, std::size_t i, std::size_t j) { return m[i] == m[j]; }

Matrix merge_rows(const Matrix& m, std::size_t i, std::size_t j) {
  const std::size_t n = m.size();
  std::vector<std::size_t> keep;
  for (std::size_t x = 0; x < n; ++x) {
    if (x != j) keep.push_back(x);
  }
  Matrix out(n - 1, std::vector<std::uint64_t>(n - 1, 0));
  for (std::size_t r = 0; r < keep.size(); ++r) {
    for (std::size_t c = 0; c < keep.size(); ++c) {
      const std::size_t src = keep[r], dst = keep[c];
      // row of the merged state is row i; columns of i and j add up
      out[r][c] = m[src][dst] + (dst == i ? m[src][j] : 0);
    }
  }
  return out;
}

std::vector<std::size_t> bfs_order(const Matrix& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> order;
  std::vector<bool> seen(n, false);
  for (std::size_t root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::deque<std::size_t> q{root};
    seen[root] = true;
    while (!q.empty()) {
      const auto v = q.front();
      q.pop_front();
      order.push_back(v);
      for (std::size_t t = 0; t < n; ++t) {
        if (m[v][t] && !seen[t]) {
          seen[t] = true;
          q.push_back(t);
        }
      }
    }
  }
  return order;
}

}  // namespace

bool mergeable(const Matrix& m, std::size_t i, std::size_t j, AmalgamationConvention conv) {
  if (i == j) return false;
  return conv == AmalgamationConvention::OutgoingRows ? rows_mergeable(m, i, j)
                                                      : rows_mergeable(transpose(m), i, j);
}

Matrix merge_states(const Matrix& m, std::size_t i, std::size_t j, AmalgamationConvention conv) {
  if (!(i < j && j < m.size())) throw std::invalid_argument("merge_states: need i < j < n");
  if (!mergeable(m, i, j, conv)) throw std::invalid_argument("merge_states: states not mergeable");
  if (conv == AmalgamationConvention::OutgoingRows) return merge_rows(m, i, j);
  return transpose(merge_rows(transpose(m), i, j));
}

std::pair<SftPresentation, AmalgamationTrace> total_amalgamation(const SftPresentation& s,
                                                                 AmalgamationConvention conv) {
  if (s.sides != Sidedness::OneSided) throw std::invalid_argument("total_amalgamation: one-sided only");
  AmalgamationTrace trace;
  Matrix m = s.adjacency;
  check_square(m);
  for (bool merged = true; merged;) {
    merged = false;
    for (std::size_t i = 0; i < m.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < m.size() && !merged; ++j) {
        if (mergeable(m, i, j, conv)) {
          m = merge_states(m, i, j, conv);
          trace.merges.emplace_back(i, j);
          merged = true;
        }
      }
    }
  }
  const auto order = bfs_order(m);
  Matrix canon(m.size(), std::vector<std::uint64_t>(m.size()));
  for (std::size_t a = 0; a < order.size(); ++a) {
    for (std::size_t b = 0; b < order.size(); ++b) canon[a][b] = m[order[a]][order[b]];
  }
  trace.result = canon;
  SftPresentation out;
  out.sides = s.sides;
  out.adjacency = std::move(canon);
  return {out, trace};
}

Matrix replay(const Matrix& m, const AmalgamationTrace& t, AmalgamationConvention conv) {
  Matrix cur = m;
  for (auto [i, j] : t.merges) cur = merge_states(cur, i, j, conv);
  const auto order = bfs_order(cur);
  Matrix canon(cur.size(), std::vector<std::uint64_t>(cur.size()));
  for (std::size_t a = 0; a < order.size(); ++a) {
    for (std::size_t b = 0; b < order.size(); ++b) canon[a][b] = cur[order[a]][order[b]];
  }
  return canon;
}

std::optional<std::vector<std::size_t>> find_isomorphism(const Matrix& a, const Matrix& b,
                                                         std::size_t max_states) {
  check_square(a);
  check_square(b);
  const std::size_t n = a.size();
  if (n != b.size()) return std::nullopt;
  if (n > max_states) throw BudgetError("isomorphism states", double(n), double(max_states));

  using Signature = std::tuple<std::vector<std::uint64_t>, std::vector<std::uint64_t>, std::uint64_t>;
  auto signature = [](const Matrix& m, std::size_t v) {
    std::vector<std::uint64_t> row = m[v], col;
    for (const auto& r : m) col.push_back(r[v]);
    std::sort(row.begin(), row.end());
    std::sort(col.begin(), col.end());
    return Signature{row, col, m[v][v]};
  };
  std::vector<Signature> sa, sb;
  for (std::size_t v = 0; v < n; ++v) {
    sa.push_back(signature(a, v));
    sb.push_back(signature(b, v));
  }
  {
    auto x = sa, y = sb;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    if (x != y) return std::nullopt;
  }

  std::vector<std::size_t> p(n, 0);
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> assign = [&](std::size_t i) -> bool {
    if (i == n) return true;
    for (std::size_t c = 0; c < n; ++c) {
      if (used[c] || sa[i] != sb[c]) continue;
      bool ok = a[i][i] == b[c][c];
      for (std::size_t j = 0; j < i && ok; ++j)
        ok = a[i][j] == b[c][p[j]] && a[j][i] == b[p[j]][c];
      if (!ok) continue;
      p[i] = c;
      used[c] = true;
      if (assign(i + 1)) return true;
      used[c] = false;
    }
    return false;
  };
  if (assign(0)) return p;
  return std::nullopt;
}

bool one_sided_conjugate(const SftPresentation& x, const SftPresentation& y,
                         AmalgamationConvention conv) {
  if (x.sides != Sidedness::OneSided || y.sides != Sidedness::OneSided)
    throw std::invalid_argument("one_sided_conjugate: one-sided presentations required");
  SftPresentation tx = trim(x), ty = trim(y);
  tx.state_words.reset();
  ty.state_words.reset();
  const auto ax = total_amalgamation(tx, conv).first;
  const auto ay = total_amalgamation(ty, conv).first;
  return find_isomorphism(ax.adjacency, ay.adjacency).has_value();
}

// ---------------------------------------------------------------- graph subshift

SftPresentation graph_subshift(const LocalRule& F) {
  const Neighborhood nb = F.neighborhood();
  if (nb.lo < 0 || nb.hi > 1)
    throw std::invalid_argument("graph_subshift: neighborhood must lie in [0,1]; recode first");
  const LocalRule f = pad(F, {0, 1});
  const std::uint32_t n = F.alphabet().size();
  SftPresentation s;
  s.sides = F.sides();
  s.alphabet = Alphabet::product(Alphabet(n), Alphabet(n));
  const std::size_t states = std::size_t(n) * n;
  s.adjacency.assign(states, std::vector<std::uint64_t>(states, 0));
  s.state_words.emplace();
  for (State a0 = 0; a0 < n; ++a0) {
    for (State b0 = 0; b0 < n; ++b0) {
      s.state_words->push_back(Word{a0 * n + b0});
      for (State a1 = 0; a1 < n; ++a1) {
        if (f(std::array{a0, a1}) != b0) continue;
        for (State b1 = 0; b1 < n; ++b1) s.adjacency[a0 * n + b0][a1 * n + b1] = 1;
      }
    }
  }
  return trim(std::move(s), F.sides() == Sidedness::TwoSided);
}

std::uint64_t projected_word_count(const SftPresentation& s, std::size_t track, int L) {
  std::set<Word> proj;
  for (const auto& w : words(s, L)) {
    Word p;
    for (State x : w) p.push_back(s.alphabet.track_value(x, track));
    proj.insert(std::move(p));
  }
  return proj.size();
}

bool check_phi_times_phi(const LocalRule& F, const LocalRule& G, const BlockMap& phi) {
  if (phi.source().size() != F.alphabet().size() || phi.target().size() != G.alphabet().size())
    throw std::invalid_argument("check_phi_times_phi: alphabet mismatch");
  return verify_certificate(phi, F, G).valid();
}

// ---------------------------------------------------------------- trace approximations

namespace {

/// Column words of depth L as words over the alphabet A^k.
std::set<Word> column_blocks(const TraceTable& t) {
  const std::uint32_t n = t.alphabet_size();
  std::set<Word> out;
  for (auto code : t.codes()) {
    const Word flat = t.decode(code);
    Word col;
    for (int step = 0; step < t.depth(); ++step) {
      State sym = 0;
      for (int j = 0; j < t.k(); ++j) sym = sym * n + flat[static_cast<std::size_t>(step * t.k() + j)];
      col.push_back(sym);
    }
    out.insert(std::move(col));
  }
  return out;
}

}  // namespace

TraceSftApprox trace_sft_approx(const LocalRule& r, int k, int L) {
  const auto sym = checked_pow(r.alphabet().size(), static_cast<unsigned>(k));
  if (!sym || *sym > 0xffffffffull) throw BudgetError("trace symbol alphabet", 1e10, 4.29e9);
  const Alphabet ak(static_cast<std::uint32_t>(*sym));
  if (L < 1) throw std::invalid_argument("L must be >= 1");
  // depth-1 columns carry no adjacency information, so blocks are at least 2 long
  const int m = std::max(L, 2);
  TraceSftApprox out;
  out.sft = sft_from_allowed(ak, column_blocks(trace_words(r, k, m)), Sidedness::OneSided);
  const auto next = column_blocks(trace_words(r, k, m + 1));
  const auto have = words(out.sft, m + 1);
  out.exact = std::includes(next.begin(), next.end(), have.begin(), have.end());
  return out;
}

Tristate trace_conjugacy(const LocalRule& F, const LocalRule& G, int k, int L) {
  const auto a = trace_sft_approx(F, k, L), b = trace_sft_approx(G, k, L);
  if (!a.exact || !b.exact) return Tristate::Unknown;
  return one_sided_conjugate(a.sft, b.sft) ? Tristate::Yes : Tristate::No;
}

// ---------------------------------------------------------------- text format

std::string format_matrix(const Matrix& m) {
  std::ostringstream os;
  os << m.size() << '\n';
  for (const auto& row : m) {
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << row[j];
    os << '\n';
  }
  return os.str();
}

Matrix parse_matrix(std::string_view text) {
  struct Token {
    std::size_t line;
    std::string_view text;
  };
  std::vector<Token> tokens;
  std::size_t line = 1;
  for (std::size_t i = 0; i < text.size();) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
    } else {
      const std::size_t b = i;
      while (i < text.size() && text[i] != ' ' && text[i] != '\t' && text[i] != '\n' &&
             text[i] != '\r' && text[i] != '#')
        ++i;
      tokens.push_back({line, text.substr(b, i - b)});
    }
  }
  auto number = [](const Token& t) {
    std::uint64_t v;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size())
      throw ParseError(t.line, "expected a nonnegative integer, got '" + std::string(t.text) + "'");
    return v;
  };
  if (tokens.empty()) throw ParseError(1, "empty matrix file");
  const std::uint64_t n = number(tokens[0]);
  if (n > 4096) throw ParseError(tokens[0].line, "matrix too large");
  if (tokens.size() != 1 + n * n)
    throw ParseError(tokens.back().line, "expected " + std::to_string(n * n) + " entries, got " +
                                             std::to_string(tokens.size() - 1));
  Matrix m(n, std::vector<std::uint64_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = number(tokens[1 + i * n + j]);
  }
  return m;
}

}  // namespace cadyn
