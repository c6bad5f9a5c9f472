#include "cadyn/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace cadyn {

TraceTable::TraceTable(std::uint32_t alphabet_size, int k, int L,
                       std::vector<std::uint64_t> codes)
    : n_(alphabet_size), k_(k), L_(L), codes_(std::move(codes)) {
  std::sort(codes_.begin(), codes_.end());
  codes_.erase(std::unique(codes_.begin(), codes_.end()), codes_.end());
}

Word TraceTable::decode(std::uint64_t code) const {
  return index_word(code, n_, static_cast<unsigned>(k_ * L_));
}

std::uint64_t TraceTable::encode(std::span<const State> column) const {
  if (column.size() != static_cast<std::size_t>(k_ * L_))
    throw std::invalid_argument("column length mismatch");
  return word_index(column, n_);
}

bool TraceTable::contains(std::span<const State> column) const {
  return std::binary_search(codes_.begin(), codes_.end(), encode(column));
}

std::set<Word> TraceTable::words() const {
  std::set<Word> out;
  for (auto c : codes_) out.insert(decode(c));
  return out;
}

int dependence_window(const LocalRule& r, int k, int L) {
  return k + (L - 1) * (hull(r.neighborhood(), {0, 0}).width() - 1);
}

namespace {

void check_args(int k, int L) {
  if (k < 1 || L < 1) throw std::invalid_argument("k and L must be >= 1");
}

void check_code_fits(std::uint32_t n, int k, int L) {
  if (!checked_pow(n, static_cast<unsigned>(k * L)))
    throw BudgetError("column-code", std::pow(double(n), double(k * L)), 1.8446744e19);
}

TraceTable trace_direct(const LocalRule& rule, int k, int L, std::uint64_t budget) {
  // offsets below assume lo <= 0 <= hi
  const LocalRule r = pad(rule, hull(rule.neighborhood(), {0, 0}));
  const std::uint32_t n = r.alphabet().size();
  check_code_fits(n, k, L);
  const int W = dependence_window(r, k, L);
  const auto total = checked_pow(n, static_cast<unsigned>(W));
  if (!total || *total > budget)
    throw BudgetError("trace window (width " + std::to_string(W) + ")",
                      std::pow(double(n), double(W)), double(budget));
  const int lo = r.neighborhood().lo;
  const auto w = static_cast<std::size_t>(r.width());

  std::unordered_set<std::uint64_t> seen;
  Word window(static_cast<std::size_t>(W), 0);
  Word row, next;
  for (std::uint64_t i = 0; i < *total; ++i) {
    row = window;
    std::uint64_t code = 0;
    for (int t = 0; t < L; ++t) {
      const auto off = static_cast<std::size_t>(-(L - 1 - t) * lo);
      for (int j = 0; j < k; ++j) code = code * n + row[off + static_cast<std::size_t>(j)];
      if (t + 1 < L) {
        next.resize(row.size() - w + 1);
        for (std::size_t p = 0; p < next.size(); ++p)
          next[p] = r(std::span<const State>(row).subspan(p, w));
        row.swap(next);
      }
    }
    seen.insert(code);
    for (std::size_t p = window.size(); p-- > 0;) {
      if (++window[p] < n) break;
      window[p] = 0;
    }
  }
  return TraceTable(n, k, L, std::vector<std::uint64_t>(seen.begin(), seen.end()));
}

/// One-sided column extension: each depth-d column of width m comes from an
/// initial word on [0,m) and a depth-(d-1) column of [m,m+r).
TraceTable trace_extend(const LocalRule& rule, int k, int L, std::uint64_t budget) {
  const std::uint32_t n = rule.alphabet().size();
  check_code_fits(n, k, L);
  const int r = rule.neighborhood().hi;
  const LocalRule f = pad(rule, {0, r});
  if (r > 0) check_code_fits(n, r, L);
  const auto ru = static_cast<std::size_t>(r);

  // columns of width m at depth d+1 from those of width r at depth d
  auto extend = [&](int m, int d, const std::vector<std::uint64_t>& right) {
    const auto mu = static_cast<std::size_t>(m);
    const auto starts = *checked_pow(n, static_cast<unsigned>(m));
    const double work = double(starts) * double(right.size());
    if (work > double(budget))
      throw BudgetError("trace column extension (width " + std::to_string(m) + ", depth " +
                            std::to_string(d + 1) + ")",
                        work, double(budget));
    std::unordered_set<std::uint64_t> seen;
    Word row(mu + ru), next(mu + ru);
    for (std::uint64_t a = 0; a < starts; ++a) {
      const Word init = index_word(a, n, static_cast<unsigned>(m));
      for (std::uint64_t c : right) {
        const Word col = index_word(c, n, static_cast<unsigned>(r * d));
        std::copy(init.begin(), init.end(), row.begin());
        std::uint64_t code = 0;
        for (int t = 0;; ++t) {
          for (std::size_t j = 0; j < mu; ++j) code = code * n + row[j];
          if (t == d) break;
          std::copy(col.begin() + static_cast<std::ptrdiff_t>(ru * static_cast<std::size_t>(t)),
                    col.begin() + static_cast<std::ptrdiff_t>(ru * static_cast<std::size_t>(t + 1)),
                    row.begin() + static_cast<std::ptrdiff_t>(mu));
          for (std::size_t j = 0; j < mu; ++j) next[j] = f(std::span<const State>(row).subspan(j, ru + 1));
          std::copy(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(mu), row.begin());
        }
        seen.insert(code);
      }
    }
    std::vector<std::uint64_t> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end());
    return out;
  };

  // depth-1 columns of width r: every word
  std::vector<std::uint64_t> right;
  if (r == 0) {
    right = {0};
  } else {
    right.resize(*checked_pow(n, static_cast<unsigned>(r)));
    std::iota(right.begin(), right.end(), std::uint64_t{0});
  }
  if (L == 1) {
    std::vector<std::uint64_t> all(*checked_pow(n, static_cast<unsigned>(k)));
    std::iota(all.begin(), all.end(), std::uint64_t{0});
    return TraceTable(n, k, 1, std::move(all));
  }
  for (int d = 1; d + 1 < L; ++d) {
    if (r > 0) right = extend(r, d, right);
  }
  // r == 0 keeps the single empty column at every depth
  return TraceTable(n, k, L, extend(k, L - 1, right));
}

TraceTable trace_single(const LocalRule& r, int k, int L, const TraceOptions& opt) {
  if (r.sides() == Sidedness::OneSided && !opt.force_window_enumeration)
    return trace_extend(r, k, L, opt.window_budget);
  return trace_direct(r, k, L, opt.window_budget);
}

/// Joins per-group trace tables into the trace of the full product rule.
TraceTable combine(const LocalRule& r, const std::vector<std::vector<std::size_t>>& groups,
                   const std::vector<TraceTable>& parts, int k, int L, std::uint64_t budget) {
  const Alphabet& a = r.alphabet();
  double total = 1;
  for (const auto& p : parts) total *= double(p.count());
  if (total > double(budget)) throw BudgetError("trace product", total, double(budget));
  check_code_fits(a.size(), k, L);

  std::vector<Alphabet> galph;
  for (const auto& g : groups) {
    std::vector<std::uint32_t> f;
    for (auto t : g) f.push_back(a.factors()[t]);
    galph.push_back(f.size() == 1 ? Alphabet(f[0]) : Alphabet::product_of(f));
  }
  std::vector<Word> decoded(parts.size());
  std::vector<std::size_t> pick(parts.size(), 0);
  std::vector<std::uint64_t> codes;
  codes.reserve(static_cast<std::size_t>(total));
  const auto len = static_cast<std::size_t>(k * L);
  std::vector<State> digits(a.tracks());
  while (true) {
    for (std::size_t g = 0; g < parts.size(); ++g) decoded[g] = parts[g].decode(parts[g].codes()[pick[g]]);
    std::uint64_t code = 0;
    for (std::size_t pos = 0; pos < len; ++pos) {
      for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto gd = galph[g].split(decoded[g][pos]);
        for (std::size_t i = 0; i < groups[g].size(); ++i) digits[groups[g][i]] = gd[i];
      }
      code = code * a.size() + a.join(digits);
    }
    codes.push_back(code);
    std::size_t g = parts.size();
    while (g-- > 0) {
      if (++pick[g] < parts[g].count()) break;
      pick[g] = 0;
    }
    if (g == std::size_t(-1)) break;
  }
  return TraceTable(a.size(), k, L, std::move(codes));
}

}  // namespace

TraceTable trace_words(const LocalRule& r, int k, int L, const TraceOptions& opt) {
  check_args(k, L);
  if (opt.use_factorization && r.alphabet().is_product()) {
    const auto groups = independent_track_groups(r);
    if (groups.size() > 1) {
      std::vector<TraceTable> parts;
      for (const auto& g : groups) parts.push_back(trace_single(project(r, g), k, L, opt));
      return combine(r, groups, parts, k, L, opt.window_budget);
    }
  }
  return trace_single(r, k, L, opt);
}

std::uint64_t subword_complexity(const LocalRule& r, int k, int L, const TraceOptions& opt) {
  check_args(k, L);
  if (opt.use_factorization && r.alphabet().is_product()) {
    const auto groups = independent_track_groups(r);
    if (groups.size() > 1) {
      std::uint64_t p = 1;
      for (const auto& g : groups) p *= trace_single(project(r, g), k, L, opt).count();
      return p;
    }
  }
  return trace_single(r, k, L, opt).count();
}

EntropyReport entropy_upper(const LocalRule& r, int k, int L_max, const TraceOptions& opt) {
  EntropyReport rep;
  for (int L = 1; L <= L_max; ++L) {
    const auto p = subword_complexity(r, k, L, opt);
    rep.rows.push_back({L, p, std::log2(double(p)) / L});
  }
  return rep;
}

std::string format_entropy_tsv(const EntropyReport& rep) {
  std::ostringstream os;
  char buf[64];
  for (const auto& row : rep.rows) {
    std::snprintf(buf, sizeof buf, "%.12g", row.bound);
    os << row.L << '\t' << row.p << '\t' << buf << '\n';
  }
  return os.str();
}

std::set<Word> block_shift_words(const std::set<Word>& blocks, int L) {
  if (blocks.empty()) throw std::invalid_argument("no blocks");
  const std::size_t m = blocks.begin()->size();
  for (const auto& b : blocks) {
    if (b.size() != m || m == 0) throw std::invalid_argument("blocks must share a positive length");
  }
  const std::vector<Word> list(blocks.begin(), blocks.end());
  std::set<Word> out;
  const auto len = static_cast<std::size_t>(L);
  for (std::size_t phase = 0; phase < m; ++phase) {
    const std::size_t nb = (phase + len + m - 1) / m;
    std::vector<std::size_t> pick(nb, 0);
    while (true) {
      Word cat;
      for (auto i : pick) cat.insert(cat.end(), list[i].begin(), list[i].end());
      out.emplace(cat.begin() + static_cast<std::ptrdiff_t>(phase),
                  cat.begin() + static_cast<std::ptrdiff_t>(phase + len));
      std::size_t p = nb;
      while (p-- > 0) {
        if (++pick[p] < list.size()) break;
        pick[p] = 0;
      }
      if (p == std::size_t(-1)) break;
    }
  }
  return out;
}

std::optional<std::uint64_t> restricted_trace_count(const LocalRule& r, std::size_t track,
                                                    State value, int k, int L,
                                                    const TraceOptions& opt) {
  auto sub = restrict_track(r, track, value);
  if (!sub) return std::nullopt;
  return subword_complexity(*sub, k, L, opt);
}

}  // namespace cadyn
