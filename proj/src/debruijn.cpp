#include "cadyn/debruijn.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cadyn/rule_io.hpp"
#include "scc.hpp"

namespace cadyn {

namespace {

// One-sided maps are normalised to a neighborhood starting at 0 so that the
// first node of a path holds cells 0..w-2 of the configuration.
BlockMap normalised(const BlockMap& m) {
  if (m.sides() == Sidedness::OneSided && m.neighborhood().lo > 0)
    return pad(m, {0, m.neighborhood().hi});
  return m;
}

class PairGraph {
 public:
  PairGraph(const BlockMap& m, std::uint64_t budget) : m_(m) {
    n_ = m_.source().size();
    nodes_ = *checked_pow(n_, static_cast<unsigned>(m_.width() - 1));
    const double pairs = double(nodes_) * double(nodes_);
    if (pairs > double(budget) || pairs > 4e9)
      throw BudgetError("pair-graph", pairs, double(budget));
    pair_count_ = nodes_ * nodes_;
  }

  std::uint64_t size() const { return pair_count_; }
  std::uint64_t dbnodes() const { return nodes_; }
  std::uint32_t symbols() const { return n_; }

  std::uint64_t left(std::uint64_t p) const { return p / nodes_; }
  std::uint64_t right(std::uint64_t p) const { return p % nodes_; }
  bool diagonal_node(std::uint64_t p) const { return left(p) == right(p); }

  /// Cursor enumerates (a, b) = (cursor / n, cursor % n).
  bool next(std::uint64_t p, std::uint64_t& cursor, std::uint64_t& target) const {
    const std::uint64_t u = left(p), v = right(p);
    const std::uint64_t limit = std::uint64_t(n_) * n_;
    while (cursor < limit) {
      const std::uint64_t a = cursor / n_, b = cursor % n_;
      ++cursor;
      const std::uint64_t wa = u * n_ + a, wb = v * n_ + b;
      if (m_.at(wa) == m_.at(wb)) {
        target = (wa % nodes_) * nodes_ + (wb % nodes_);
        return true;
      }
    }
    return false;
  }

  template <class Fn>
  void for_each_edge(std::uint64_t p, Fn&& fn) const {
    std::uint64_t cursor = 0, target = 0;
    while (next(p, cursor, target)) {
      const std::uint64_t c = cursor - 1;
      fn(static_cast<State>(c / n_), static_cast<State>(c % n_), target);
    }
  }

  bool diagonal_edge(std::uint64_t p, State a, State b) const {
    return diagonal_node(p) && a == b;
  }

  detail::SccResult scc() const {
    return detail::tarjan(pair_count_, [this](std::uint64_t node, std::uint64_t& cursor,
                                              std::uint64_t& target) {
      return next(node, cursor, target);
    });
  }

  Word node_word(std::uint64_t dbnode) const {
    return index_word(dbnode, n_, static_cast<unsigned>(m_.width() - 1));
  }

 private:
  const BlockMap& m_;
  std::uint32_t n_ = 0;
  std::uint64_t nodes_ = 0;
  std::uint64_t pair_count_ = 0;
};

struct Step {
  State a, b;
  std::uint64_t to;
};

/// Shortest path from `from` to `to` using only nodes accepted by `allow`.
template <class Allow>
std::vector<Step> bfs_path(const PairGraph& g, std::uint64_t from, std::uint64_t to,
                           Allow&& allow) {
  std::map<std::uint64_t, std::pair<std::uint64_t, Step>> parent;
  std::deque<std::uint64_t> queue{from};
  parent.emplace(from, std::pair<std::uint64_t, Step>{from, {0, 0, from}});
  bool found = from == to;
  while (!queue.empty() && !found) {
    const auto p = queue.front();
    queue.pop_front();
    g.for_each_edge(p, [&](State a, State b, std::uint64_t t) {
      if (found || !allow(t) || parent.count(t)) return;
      parent.emplace(t, std::pair<std::uint64_t, Step>{p, {a, b, t}});
      if (t == to) found = true;
      queue.push_back(t);
    });
  }
  if (!found) throw std::logic_error("pair graph path not found");
  std::vector<Step> path;
  for (auto cur = to; cur != from;) {
    const auto& [prev, step] = parent.at(cur);
    path.push_back(step);
    cur = prev;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<std::vector<std::uint64_t>> members(const detail::SccResult& s) {
  std::vector<std::vector<std::uint64_t>> out(s.count);
  for (std::uint64_t v = 0; v < s.comp.size(); ++v) out[s.comp[v]].push_back(v);
  return out;
}

/// Component has at least one internal edge.
std::vector<bool> nontrivial(const PairGraph& g, const detail::SccResult& s,
                             const std::vector<std::vector<std::uint64_t>>& mem) {
  std::vector<bool> nt(s.count, false);
  for (std::uint32_t c = 0; c < s.count; ++c) {
    if (mem[c].size() > 1) {
      nt[c] = true;
      continue;
    }
    const auto v = mem[c][0];
    g.for_each_edge(v, [&](State, State, std::uint64_t t) {
      if (t == v) nt[c] = true;
    });
  }
  return nt;
}

/// Closed walk from `start` inside its own component.
std::vector<Step> cycle_through(const PairGraph& g, const detail::SccResult& s,
                                std::uint64_t start) {
  const auto c = s.comp[start];
  // first step to any in-component successor, then back to start
  std::optional<Step> first;
  g.for_each_edge(start, [&](State a, State b, std::uint64_t t) {
    if (!first && s.comp[t] == c) first = Step{a, b, t};
  });
  if (!first) throw std::logic_error("trivial component has no cycle");
  std::vector<Step> cyc{*first};
  if (first->to != start) {
    auto back = bfs_path(g, first->to, start, [&](std::uint64_t t) { return s.comp[t] == c; });
    cyc.insert(cyc.end(), back.begin(), back.end());
  }
  return cyc;
}

DecisionWitness injective_two_sided(const BlockMap& m, std::uint64_t budget) {
  PairGraph g(m, budget);
  const auto s = g.scc();
  for (std::uint64_t p = 0; p < g.size(); ++p) {
    std::optional<Step> bad;
    g.for_each_edge(p, [&](State a, State b, std::uint64_t t) {
      if (!bad && s.comp[t] == s.comp[p] && !g.diagonal_edge(p, a, b)) bad = Step{a, b, t};
    });
    if (!bad) continue;
    std::vector<Step> cyc{*bad};
    if (bad->to != p) {
      auto back = bfs_path(g, bad->to, p, [&](std::uint64_t t) { return s.comp[t] == s.comp[p]; });
      cyc.insert(cyc.end(), back.begin(), back.end());
    }
    CollisionWitness w;
    for (const auto& st : cyc) {
      w.cycle_a.push_back(st.a);
      w.cycle_b.push_back(st.b);
    }
    return {false, w, std::nullopt};
  }
  return {true, std::nullopt, std::nullopt};
}

DecisionWitness injective_one_sided(const BlockMap& m, std::uint64_t budget) {
  PairGraph g(m, budget);
  const auto s = g.scc();
  const auto mem = members(s);
  const auto nt = nontrivial(g, s, mem);
  // alive: an infinite forward path starts here
  std::vector<bool> alive(s.count, false);
  for (std::uint32_t c = 0; c < s.count; ++c) {
    alive[c] = nt[c];
    for (std::size_t i = 0; i < mem[c].size() && !alive[c]; ++i) {
      g.for_each_edge(mem[c][i], [&](State, State, std::uint64_t t) {
        if (s.comp[t] != c && alive[s.comp[t]]) alive[c] = true;
      });
    }
  }
  for (std::uint64_t p = 0; p < g.size(); ++p) {
    std::optional<Step> bad;
    g.for_each_edge(p, [&](State a, State b, std::uint64_t t) {
      if (!bad && alive[s.comp[t]] && !g.diagonal_edge(p, a, b)) bad = Step{a, b, t};
    });
    if (!bad) continue;

    // walk from the edge target to a node on a cycle
    std::uint64_t z = bad->to;
    std::vector<Step> path;
    if (!nt[s.comp[z]]) {
      std::optional<std::uint64_t> goal;
      std::map<std::uint64_t, std::pair<std::uint64_t, Step>> parent;
      std::deque<std::uint64_t> queue{z};
      parent.emplace(z, std::pair<std::uint64_t, Step>{z, {0, 0, z}});
      while (!queue.empty() && !goal) {
        const auto q = queue.front();
        queue.pop_front();
        g.for_each_edge(q, [&](State a, State b, std::uint64_t t) {
          if (goal || !alive[s.comp[t]] || parent.count(t)) return;
          parent.emplace(t, std::pair<std::uint64_t, Step>{q, {a, b, t}});
          if (nt[s.comp[t]]) goal = t;
          queue.push_back(t);
        });
      }
      for (auto cur = *goal; cur != z;) {
        const auto& [prev, st] = parent.at(cur);
        path.push_back(st);
        cur = prev;
      }
      std::reverse(path.begin(), path.end());
      z = *goal;
    }
    const auto cyc = cycle_through(g, s, z);

    CollisionWitness w;
    w.prefix_a = g.node_word(g.left(p));
    w.prefix_b = g.node_word(g.right(p));
    w.prefix_a.push_back(bad->a);
    w.prefix_b.push_back(bad->b);
    for (const auto& st : path) {
      w.prefix_a.push_back(st.a);
      w.prefix_b.push_back(st.b);
    }
    for (const auto& st : cyc) {
      w.cycle_a.push_back(st.a);
      w.cycle_b.push_back(st.b);
    }
    return {false, w, std::nullopt};
  }
  return {true, std::nullopt, std::nullopt};
}

/// Pre-injectivity test: no pair-graph path diagonal -> non-diagonal edge ->
/// diagonal.
bool diamond_free(const BlockMap& m, std::uint64_t budget) {
  PairGraph g(m, budget);
  const auto s = g.scc();
  const auto mem = members(s);
  std::vector<bool> reaches_diag(s.count, false);
  for (std::uint32_t c = 0; c < s.count; ++c) {
    for (auto v : mem[c]) {
      if (g.diagonal_node(v)) reaches_diag[c] = true;
    }
    for (std::size_t i = 0; i < mem[c].size() && !reaches_diag[c]; ++i) {
      g.for_each_edge(mem[c][i], [&](State, State, std::uint64_t t) {
        if (reaches_diag[s.comp[t]]) reaches_diag[c] = true;
      });
    }
  }
  std::vector<bool> seen(g.size(), false);
  std::deque<std::uint64_t> queue;
  for (std::uint64_t u = 0; u < g.dbnodes(); ++u) {
    const auto p = u * g.dbnodes() + u;
    seen[p] = true;
    queue.push_back(p);
  }
  while (!queue.empty()) {
    const auto p = queue.front();
    queue.pop_front();
    bool diamond = false;
    g.for_each_edge(p, [&](State a, State b, std::uint64_t t) {
      if (!g.diagonal_edge(p, a, b) && reaches_diag[s.comp[t]]) diamond = true;
      if (!seen[t]) {
        seen[t] = true;
        queue.push_back(t);
      }
    });
    if (diamond) return false;
  }
  return true;
}

/// Shortest word over the target alphabet with no preimage, if any.
std::optional<Word> find_orphan(const BlockMap& m, std::uint64_t budget) {
  const std::uint32_t n = m.source().size();
  const std::uint32_t nt = m.target().size();
  const std::uint64_t nodes = *checked_pow(n, static_cast<unsigned>(m.width() - 1));
  using Set = std::vector<std::uint32_t>;
  Set all(nodes);
  for (std::uint64_t i = 0; i < nodes; ++i) all[i] = static_cast<std::uint32_t>(i);
  std::map<Set, std::size_t> id;
  std::vector<Set> sets{all};
  std::vector<std::pair<std::size_t, State>> parent{{0, 0}};
  id.emplace(all, 0);
  for (std::size_t head = 0; head < sets.size(); ++head) {
    for (State o = 0; o < nt; ++o) {
      std::vector<bool> mark(nodes, false);
      for (auto u : sets[head]) {
        for (State a = 0; a < n; ++a) {
          const std::uint64_t w = std::uint64_t(u) * n + a;
          if (m.at(w) == o) mark[w % nodes] = true;
        }
      }
      Set next;
      for (std::uint64_t i = 0; i < nodes; ++i) {
        if (mark[i]) next.push_back(static_cast<std::uint32_t>(i));
      }
      if (next.empty()) {
        Word orphan{o};
        for (std::size_t cur = head; cur != 0; cur = parent[cur].first)
          orphan.push_back(parent[cur].second);
        std::reverse(orphan.begin(), orphan.end());
        return orphan;
      }
      if (id.emplace(next, sets.size()).second) {
        if (sets.size() >= budget) throw BudgetError("subset-construction", double(sets.size() + 1), double(budget));
        sets.push_back(std::move(next));
        parent.emplace_back(head, o);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

DecisionWitness is_injective(const BlockMap& m, std::uint64_t budget) {
  const BlockMap mm = normalised(m);
  DecisionWitness d = mm.sides() == Sidedness::TwoSided ? injective_two_sided(mm, budget)
                                                        : injective_one_sided(mm, budget);
  if (!d.verdict && !verify_collision(mm, *d.collision))
    throw std::logic_error("injectivity witness failed re-simulation");
  return d;
}

DecisionWitness is_injective(const LocalRule& r, std::uint64_t budget) {
  return is_injective(r.map(), budget);
}

DecisionWitness is_surjective(const BlockMap& m, std::uint64_t budget) {
  const BlockMap mm = normalised(m);
  if (mm.source().size() == mm.target().size() && diamond_free(mm, budget))
    return {true, std::nullopt, std::nullopt};
  auto orphan = find_orphan(mm, budget);
  if (!orphan) return {true, std::nullopt, std::nullopt};
  if (!verify_orphan(mm, *orphan)) throw std::logic_error("orphan failed re-verification");
  return {false, std::nullopt, orphan};
}

DecisionWitness is_surjective(const LocalRule& r, std::uint64_t budget) {
  return is_surjective(r.map(), budget);
}

bool verify_collision(const BlockMap& m, const CollisionWitness& w) {
  if (w.cycle_a.empty() || w.cycle_a.size() != w.cycle_b.size() ||
      w.prefix_a.size() != w.prefix_b.size())
    return false;
  if (w.prefix_a.empty()) {
    const CyclicConfig x{w.cycle_a}, y{w.cycle_b};
    return x != y && apply_cyclic(m, x) == apply_cyclic(m, y);
  }
  const std::size_t c = w.cycle_a.size();
  const std::size_t reps = 2 + (static_cast<std::size_t>(m.width()) + c - 1) / c;
  Word x = w.prefix_a, y = w.prefix_b;
  for (std::size_t i = 0; i < reps; ++i) {
    x.insert(x.end(), w.cycle_a.begin(), w.cycle_a.end());
    y.insert(y.end(), w.cycle_b.begin(), w.cycle_b.end());
  }
  const std::size_t span = w.prefix_a.size() + c;
  if (std::equal(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(span), y.begin()))
    return false;
  // past the prefix both images are periodic with period c
  const BlockMap mm = normalised(m);
  return apply_word(mm, x) == apply_word(mm, y);
}

bool verify_orphan(const BlockMap& m, const Word& orphan) {
  const BlockMap mm = normalised(m);
  const auto n = mm.source().size();
  const auto len = static_cast<unsigned>(orphan.size() + mm.width() - 1);
  const auto space = checked_pow(n, len);
  if (space && *space <= (1u << 24)) {
    for (std::uint64_t i = 0; i < *space; ++i) {
      if (apply_word(mm, index_word(i, n, len)) == orphan) return false;
    }
    return true;
  }
  // sweep the set of de Bruijn nodes that can end a preimage of each prefix
  const std::uint64_t nodes = *checked_pow(n, static_cast<unsigned>(mm.width() - 1));
  std::vector<bool> cur(nodes, true);
  for (State o : orphan) {
    std::vector<bool> nxt(nodes, false);
    for (std::uint64_t u = 0; u < nodes; ++u) {
      if (!cur[u]) continue;
      for (State a = 0; a < n; ++a) {
        if (mm.at(u * n + a) == o) nxt[(u * n + a) % nodes] = true;
      }
    }
    cur = std::move(nxt);
  }
  return std::none_of(cur.begin(), cur.end(), [](bool b) { return b; });
}

std::string format_collision(const CollisionWitness& w, std::uint32_t n) {
  std::ostringstream os;
  if (w.prefix_a.empty()) {
    os << "witness: periodic " << format_word(w.cycle_a, n) << '\n';
    os << "witness: periodic " << format_word(w.cycle_b, n) << '\n';
  } else {
    os << "witness: eventually-periodic " << format_word(w.prefix_a, n) << '('
       << format_word(w.cycle_a, n) << ")\n";
    os << "witness: eventually-periodic " << format_word(w.prefix_b, n) << '('
       << format_word(w.cycle_b, n) << ")\n";
  }
  return os.str();
}

// ---------------------------------------------------------------- inverse

std::optional<LocalRule> inverse_rule(const LocalRule& r, int max_width) {
  const Alphabet& a = r.alphabet();
  const std::uint32_t n = a.size();
  const Neighborhood f = r.neighborhood();
  const LocalRule id = identity_rule(a, r.sides());
  for (int w = 1; w <= max_width; ++w) {
    int c_lo = -(w - 1) - f.hi, c_hi = -f.lo;
    if (r.sides() == Sidedness::OneSided) c_lo = c_hi = 0;
    if (r.sides() == Sidedness::OneSided && f.lo > 0) return std::nullopt;
    for (int c = c_lo; c <= c_hi; ++c) {
      const int window = w + r.width() - 1;
      const int target = -(c + f.lo);
      if (target < 0 || target >= window) continue;
      const auto total = checked_pow(n, static_cast<unsigned>(window));
      if (!total || *total > kDefaultTableBudget)
        throw BudgetError("inverse-search", std::pow(double(n), double(window)),
                          double(kDefaultTableBudget));
      const std::uint64_t entries = *checked_pow(n, static_cast<unsigned>(w));
      std::vector<State> table(entries, 0);
      std::vector<bool> fixed(entries, false);
      bool ok = true;
      for (std::uint64_t i = 0; i < *total && ok; ++i) {
        const Word x = index_word(i, n, static_cast<unsigned>(window));
        const auto y = word_index(apply_word(r, x), n);
        const State want = x[static_cast<std::size_t>(target)];
        if (fixed[y] && table[y] != want) ok = false;
        table[y] = want;
        fixed[y] = true;
      }
      if (!ok) continue;
      LocalRule inv(a, r.sides(), {c, c + w - 1}, std::move(table));
      if (equal_rules(compose(inv, r), id) && equal_rules(compose(r, inv), id)) return inv;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- bounded dynamics

std::optional<unsigned> nilpotency_within(const LocalRule& r, State q, unsigned n_max,
                                          std::uint64_t budget) {
  if (!classify_state(r, q).quiescent)
    throw std::invalid_argument("state " + std::to_string(q) + " is not quiescent");
  LocalRule p = identity_rule(r.alphabet(), r.sides());
  for (unsigned n = 1; n <= n_max; ++n) {
    p = compose(r, p, budget);
    if (std::all_of(p.table().begin(), p.table().end(), [q](State s) { return s == q; }))
      return n;
  }
  return std::nullopt;
}

std::optional<Periodicity> periodicity_within(const LocalRule& r, unsigned n_max,
                                              std::uint64_t budget) {
  std::vector<LocalRule> powers{identity_rule(r.alphabet(), r.sides())};
  for (unsigned m = 1; m <= n_max; ++m) {
    powers.push_back(compose(r, powers.back(), budget));
    for (unsigned n = 0; n < m; ++n) {
      if (equal_rules(powers[m], powers[n])) return Periodicity{n, m - n};
    }
  }
  return std::nullopt;
}

std::optional<Word> avoiding_configuration(const LocalRule& r, State s,
                                           unsigned max_period) {
  if (!classify_state(r, s).spreading)
    throw std::invalid_argument("state " + std::to_string(s) + " is not spreading");
  const std::uint32_t n = r.alphabet().size();
  for (unsigned p = 1; p <= max_period; ++p) {
    const auto total = checked_pow(n, p);
    if (!total || *total > kDefaultTableBudget)
      throw BudgetError("period-search", std::pow(double(n), double(p)),
                        double(kDefaultTableBudget));
    for (std::uint64_t i = 0; i < *total; ++i) {
      CyclicConfig c{index_word(i, n, p)};
      std::set<Word> seen;
      bool hit = false;
      while (seen.insert(c.word).second) {
        if (std::find(c.word.begin(), c.word.end(), s) != c.word.end()) {
          hit = true;
          break;
        }
        c = apply_cyclic(r, c);
      }
      if (!hit) return index_word(i, n, p);
    }
  }
  return std::nullopt;
}

}  // namespace cadyn
