#include "cadyn/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace cadyn {

std::string BudgetError::format_size(double v) {
  char buf[64];
  if (v < 1e15 && v == std::floor(v)) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.3g", v);
  }
  return buf;
}

const char* to_string(Sidedness s) {
  return s == Sidedness::OneSided ? "one" : "two";
}

// ---------------------------------------------------------------- Alphabet

Alphabet::Alphabet(std::uint32_t size) : size_(size), factors_{size} {
  if (size == 0) throw std::invalid_argument("alphabet size must be >= 1");
}

Alphabet Alphabet::product_of(std::vector<std::uint32_t> factors) {
  if (factors.empty()) throw std::invalid_argument("empty factor list");
  std::uint64_t total = 1;
  for (auto f : factors) {
    if (f == 0) throw std::invalid_argument("factor size must be >= 1");
    total *= f;
    if (total > 0xffffffffull) throw std::invalid_argument("alphabet too large");
  }
  Alphabet a(static_cast<std::uint32_t>(total));
  a.factors_ = std::move(factors);
  return a;
}

Alphabet Alphabet::product(const Alphabet& a, const Alphabet& b) {
  std::vector<std::uint32_t> f = a.factors();
  f.insert(f.end(), b.factors().begin(), b.factors().end());
  return product_of(std::move(f));
}

std::vector<State> Alphabet::split(State s) const {
  std::vector<State> digits(factors_.size());
  for (std::size_t t = factors_.size(); t-- > 0;) {
    digits[t] = s % factors_[t];
    s /= factors_[t];
  }
  return digits;
}

State Alphabet::join(std::span<const State> digits) const {
  if (digits.size() != factors_.size())
    throw std::invalid_argument("track count mismatch");
  State s = 0;
  for (std::size_t t = 0; t < digits.size(); ++t) {
    if (digits[t] >= factors_[t]) throw std::invalid_argument("track value out of range");
    s = s * factors_[t] + digits[t];
  }
  return s;
}

State Alphabet::track_value(State s, std::size_t track) const {
  for (std::size_t t = factors_.size(); t-- > track + 1;) s /= factors_[t];
  return s % factors_[track];
}

int Neighborhood::radius() const { return std::max(std::abs(lo), std::abs(hi)); }

Neighborhood hull(Neighborhood a, Neighborhood b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

// ---------------------------------------------------------------- words

std::optional<std::uint64_t> checked_pow(std::uint64_t n, unsigned m) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < m; ++i) {
    if (n != 0 && r > UINT64_MAX / n) return std::nullopt;
    r *= n;
  }
  return r;
}

std::uint64_t word_index(std::span<const State> w, std::uint32_t n) {
  std::uint64_t idx = 0;
  for (State s : w) idx = idx * n + s;
  return idx;
}

Word index_word(std::uint64_t index, std::uint32_t n, unsigned m) {
  Word w(m);
  for (unsigned p = m; p-- > 0;) {
    w[p] = static_cast<State>(index % n);
    index /= n;
  }
  return w;
}

// ---------------------------------------------------------------- BlockMap

std::uint64_t BlockMap::table_entries(const Alphabet& source, Neighborhood nb,
                                      std::uint64_t budget) {
  if (nb.width() < 1) throw std::invalid_argument("empty neighborhood");
  auto entries = checked_pow(source.size(), static_cast<unsigned>(nb.width()));
  if (!entries || *entries > budget) {
    throw BudgetError("table",
                      std::pow(double(source.size()), double(nb.width())),
                      double(budget));
  }
  return *entries;
}

BlockMap::BlockMap(Alphabet source, Alphabet target, Sidedness sides,
                   Neighborhood nb, std::vector<State> table)
    : source_(std::move(source)),
      target_(std::move(target)),
      sides_(sides),
      nb_(nb),
      table_(std::move(table)) {
  if (nb_.width() < 1) throw std::invalid_argument("empty neighborhood");
  if (sides_ == Sidedness::OneSided && nb_.lo < 0)
    throw std::invalid_argument("one-sided map needs a neighborhood inside [0, inf)");
  auto entries = checked_pow(source_.size(), static_cast<unsigned>(nb_.width()));
  if (!entries || *entries != table_.size())
    throw std::invalid_argument("table must list every neighborhood word exactly once");
  for (State s : table_) {
    if (!target_.contains(s)) throw std::invalid_argument("table value outside target alphabet");
  }
}

State BlockMap::operator()(std::span<const State> window) const {
  return table_[word_index(window, source_.size())];
}

LocalRule::LocalRule(BlockMap map) : map_(std::move(map)) {
  if (map_.source().size() != map_.target().size())
    throw std::invalid_argument("a local rule maps an alphabet to itself");
}

LocalRule::LocalRule(Alphabet alphabet, Sidedness sides, Neighborhood nb,
                     std::vector<State> table)
    : map_(alphabet, alphabet, sides, nb, std::move(table)) {}

CyclicConfig rotate(const CyclicConfig& c, std::size_t by) {
  CyclicConfig out = c;
  if (!c.word.empty()) {
    std::rotate(out.word.begin(),
                out.word.begin() + static_cast<std::ptrdiff_t>(by % c.word.size()),
                out.word.end());
  }
  return out;
}

// ---------------------------------------------------------------- standard rules

BlockMap identity_map(const Alphabet& a, Sidedness sides) {
  std::vector<State> t(a.size());
  std::iota(t.begin(), t.end(), State{0});
  return BlockMap(a, a, sides, {0, 0}, std::move(t));
}

LocalRule identity_rule(const Alphabet& a, Sidedness sides) {
  return LocalRule(identity_map(a, sides));
}

LocalRule shift_rule(const Alphabet& a, Sidedness sides) {
  return LocalRule::tabulate(a, sides, {0, 1}, [](std::span<const State> x) { return x[1]; });
}

LocalRule constant_rule(const Alphabet& a, State q, Sidedness sides) {
  if (!a.contains(q)) throw std::invalid_argument("state outside alphabet");
  return LocalRule(a, sides, {0, 0}, std::vector<State>(a.size(), q));
}

// ---------------------------------------------------------------- application

Word apply_word(const BlockMap& m, std::span<const State> input) {
  const auto w = static_cast<std::size_t>(m.width());
  if (input.size() < w) throw std::invalid_argument("input too short");
  for (State s : input) {
    if (!m.source().contains(s)) throw std::invalid_argument("symbol outside alphabet");
  }
  Word out(input.size() - w + 1);
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = m(input.subspan(t, w));
  return out;
}

Word apply_word(const LocalRule& r, std::span<const State> input) {
  return apply_word(r.map(), input);
}

CyclicConfig apply_cyclic(const BlockMap& m, const CyclicConfig& c) {
  const std::size_t p = c.period();
  if (p == 0) throw std::invalid_argument("empty configuration");
  const auto w = static_cast<std::size_t>(m.width());
  // offset of the window start modulo p
  const long long lo = m.neighborhood().lo;
  const std::size_t start = static_cast<std::size_t>(((lo % (long long)p) + (long long)p) % (long long)p);
  Word window(w);
  CyclicConfig out{Word(p)};
  for (std::size_t x = 0; x < p; ++x) {
    for (std::size_t t = 0; t < w; ++t) window[t] = c.word[(x + start + t) % p];
    out.word[x] = m(window);
  }
  return out;
}

CyclicConfig apply_cyclic(const LocalRule& r, const CyclicConfig& c) {
  return apply_cyclic(r.map(), c);
}

// ---------------------------------------------------------------- algebra

BlockMap compose(const BlockMap& outer, const BlockMap& inner,
                 std::uint64_t budget) {
  if (inner.target().size() != outer.source().size())
    throw std::invalid_argument("compose: alphabet mismatch");
  if (inner.sides() != outer.sides())
    throw std::invalid_argument("compose: sidedness mismatch");
  const Neighborhood nb{outer.neighborhood().lo + inner.neighborhood().lo,
                        outer.neighborhood().hi + inner.neighborhood().hi};
  const auto wi = static_cast<std::size_t>(inner.width());
  const auto wo = static_cast<std::size_t>(outer.width());
  Word mid(wo);
  return BlockMap::tabulate(
      inner.source(), outer.target(), inner.sides(), nb,
      [&](std::span<const State> x) {
        for (std::size_t j = 0; j < wo; ++j) mid[j] = inner(x.subspan(j, wi));
        return outer(mid);
      },
      budget);
}

LocalRule compose(const LocalRule& outer, const LocalRule& inner,
                  std::uint64_t budget) {
  if (!(outer.alphabet() == inner.alphabet()) &&
      outer.alphabet().size() != inner.alphabet().size())
    throw std::invalid_argument("compose: alphabet mismatch");
  return LocalRule(compose(outer.map(), inner.map(), budget));
}

LocalRule power(const LocalRule& rule, unsigned n, std::uint64_t budget) {
  const double width = 1.0 + double(n) * double(rule.width() - 1);
  const double entries = std::pow(double(rule.alphabet().size()), width);
  if (entries > double(budget)) throw BudgetError("table", entries, double(budget));
  LocalRule acc = identity_rule(rule.alphabet(), rule.sides());
  for (unsigned i = 0; i < n; ++i) acc = compose(rule, acc, budget);
  return acc;
}

BlockMap pad(const BlockMap& m, Neighborhood nb, std::uint64_t budget) {
  const Neighborhood cur = m.neighborhood();
  if (nb.lo > cur.lo || nb.hi < cur.hi)
    throw std::invalid_argument("pad: target neighborhood must contain the current one");
  if (nb == cur) return m;
  const auto off = static_cast<std::size_t>(cur.lo - nb.lo);
  const auto w = static_cast<std::size_t>(cur.width());
  return BlockMap::tabulate(
      m.source(), m.target(), m.sides(), nb,
      [&](std::span<const State> x) { return m(x.subspan(off, w)); }, budget);
}

LocalRule pad(const LocalRule& r, Neighborhood nb, std::uint64_t budget) {
  return LocalRule(pad(r.map(), nb, budget));
}

BlockMap product(const BlockMap& a, const BlockMap& b, std::uint64_t budget) {
  if (a.sides() != b.sides()) throw std::invalid_argument("product: sidedness mismatch");
  const Neighborhood nb = hull(a.neighborhood(), b.neighborhood());
  const BlockMap pa = pad(a, nb, budget);
  const BlockMap pb = pad(b, nb, budget);
  const std::uint32_t nbs = b.source().size();
  const std::uint32_t nbt = b.target().size();
  Word wa(static_cast<std::size_t>(nb.width()));
  Word wb(wa.size());
  return BlockMap::tabulate(
      Alphabet::product(a.source(), b.source()),
      Alphabet::product(a.target(), b.target()), a.sides(), nb,
      [&](std::span<const State> x) {
        for (std::size_t p = 0; p < x.size(); ++p) {
          wa[p] = x[p] / nbs;
          wb[p] = x[p] % nbs;
        }
        return pa(wa) * nbt + pb(wb);
      },
      budget);
}

LocalRule product(const LocalRule& a, const LocalRule& b, std::uint64_t budget) {
  return LocalRule(product(a.map(), b.map(), budget));
}

std::optional<RuleDifference> first_difference(const BlockMap& f,
                                               const BlockMap& g) {
  if (f.source().size() != g.source().size() ||
      f.target().size() != g.target().size())
    throw std::invalid_argument("equal_rules: alphabet mismatch");
  if (f.sides() != g.sides()) throw std::invalid_argument("equal_rules: sidedness mismatch");
  const Neighborhood nb = hull(f.neighborhood(), g.neighborhood());
  const BlockMap pf = pad(f, nb);
  const BlockMap pg = pad(g, nb);
  for (std::uint64_t i = 0; i < pf.table().size(); ++i) {
    if (pf.at(i) != pg.at(i)) {
      return RuleDifference{nb,
                            index_word(i, f.source().size(),
                                       static_cast<unsigned>(nb.width())),
                            pf.at(i), pg.at(i)};
    }
  }
  return std::nullopt;
}

bool equal_maps(const BlockMap& f, const BlockMap& g) {
  return !first_difference(f, g).has_value();
}

bool equal_rules(const LocalRule& f, const LocalRule& g) {
  return equal_maps(f.map(), g.map());
}

// ---------------------------------------------------------------- tracks

namespace {

Alphabet group_alphabet(const Alphabet& a, std::span<const std::size_t> tracks) {
  std::vector<std::uint32_t> f;
  for (auto t : tracks) f.push_back(a.factors().at(t));
  return f.size() == 1 ? Alphabet(f[0]) : Alphabet::product_of(std::move(f));
}

}  // namespace

LocalRule project(const LocalRule& r, std::span<const std::size_t> tracks) {
  const Alphabet& a = r.alphabet();
  for (auto t : tracks) {
    if (t >= a.tracks()) throw std::invalid_argument("project: no such track");
  }
  const Alphabet g = group_alphabet(a, tracks);
  Word full(static_cast<std::size_t>(r.width()));
  std::vector<State> digits(a.tracks());
  return LocalRule::tabulate(g, r.sides(), r.neighborhood(),
                             [&](std::span<const State> x) {
                               for (std::size_t p = 0; p < x.size(); ++p) {
                                 const auto gd = g.split(x[p]);
                                 std::fill(digits.begin(), digits.end(), 0);
                                 for (std::size_t i = 0; i < tracks.size(); ++i)
                                   digits[tracks[i]] = gd[i];
                                 full[p] = a.join(digits);
                               }
                               const auto out = a.split(r(full));
                               std::vector<State> od;
                               for (auto t : tracks) od.push_back(out[t]);
                               return g.join(od);
                             });
}

LocalRule project(const LocalRule& r, std::size_t track) {
  const std::size_t t[1] = {track};
  return project(r, std::span<const std::size_t>(t));
}

std::vector<std::vector<bool>> track_dependencies(const LocalRule& r) {
  const Alphabet& a = r.alphabet();
  const std::size_t nt = a.tracks();
  std::vector<std::vector<bool>> dep(nt, std::vector<bool>(nt, false));
  if (nt == 1) {
    dep[0][0] = true;
    return dep;
  }
  const auto w = static_cast<unsigned>(r.width());
  const std::uint32_t n = a.size();
  // place value of position p within a window index
  std::vector<std::uint64_t> place(w, 1);
  for (unsigned p = w - 1; p-- > 0;) place[p] = place[p + 1] * n;
  // place value of track u within a state
  std::vector<State> tplace(nt, 1);
  for (std::size_t u = nt - 1; u-- > 0;) tplace[u] = tplace[u + 1] * a.factors()[u + 1];

  const auto& table = r.table();
  for (std::uint64_t idx = 0; idx < table.size(); ++idx) {
    const auto out = a.split(table[idx]);
    for (unsigned p = 0; p < w; ++p) {
      const State s = static_cast<State>((idx / place[p]) % n);
      for (std::size_t u = 0; u < nt; ++u) {
        const State cur = (s / tplace[u]) % a.factors()[u];
        for (State v = cur + 1; v < a.factors()[u]; ++v) {
          const State s2 = s + (v - cur) * tplace[u];
          const std::uint64_t idx2 = idx + (std::uint64_t(s2) - s) * place[p];
          const auto out2 = a.split(table[idx2]);
          for (std::size_t t = 0; t < nt; ++t) {
            if (out[t] != out2[t]) dep[t][u] = true;
          }
        }
      }
    }
  }
  return dep;
}

std::vector<std::vector<std::size_t>> independent_track_groups(const LocalRule& r) {
  const auto dep = track_dependencies(r);
  const std::size_t nt = dep.size();
  std::vector<std::size_t> parent(nt);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t t = 0; t < nt; ++t) {
    for (std::size_t u = 0; u < nt; ++u) {
      if (dep[t][u]) parent[find(t)] = find(u);
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<long> slot(nt, -1);
  for (std::size_t t = 0; t < nt; ++t) {
    const std::size_t root = find(t);
    if (slot[root] < 0) {
      slot[root] = static_cast<long>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[root])].push_back(t);
  }
  return groups;
}

std::optional<LocalRule> restrict_track(const LocalRule& r, std::size_t track,
                                        State value) {
  const Alphabet& a = r.alphabet();
  if (a.tracks() < 2 || track >= a.tracks() || value >= a.factors()[track])
    throw std::invalid_argument("restrict_track: bad track or value");
  const auto dep = track_dependencies(r);
  for (std::size_t u = 0; u < a.tracks(); ++u) {
    if (u != track && dep[track][u]) return std::nullopt;
  }
  std::vector<std::size_t> rest;
  for (std::size_t t = 0; t < a.tracks(); ++t) {
    if (t != track) rest.push_back(t);
  }
  // value must persist on its own track
  {
    std::vector<State> digits(a.tracks(), 0);
    digits[track] = value;
    const Word all(static_cast<std::size_t>(r.width()), a.join(digits));
    if (a.track_value(r(all), track) != value) return std::nullopt;
  }
  const Alphabet g = group_alphabet(a, rest);
  Word full(static_cast<std::size_t>(r.width()));
  std::vector<State> digits(a.tracks());
  return LocalRule::tabulate(g, r.sides(), r.neighborhood(),
                             [&](std::span<const State> x) {
                               for (std::size_t p = 0; p < x.size(); ++p) {
                                 const auto gd = g.split(x[p]);
                                 for (std::size_t i = 0; i < rest.size(); ++i)
                                   digits[rest[i]] = gd[i];
                                 digits[track] = value;
                                 full[p] = a.join(digits);
                               }
                               const auto out = a.split(r(full));
                               std::vector<State> od;
                               for (auto t : rest) od.push_back(out[t]);
                               return g.join(od);
                             });
}

LocalRule relabel(const LocalRule& r, std::span<const State> perm) {
  const std::uint32_t n = r.alphabet().size();
  if (perm.size() != n) throw std::invalid_argument("relabel: permutation size mismatch");
  std::vector<State> inv(n, n);
  for (State s = 0; s < n; ++s) {
    if (perm[s] >= n || inv[perm[s]] != n)
      throw std::invalid_argument("relabel: not a permutation");
    inv[perm[s]] = s;
  }
  Word pre(static_cast<std::size_t>(r.width()));
  return LocalRule::tabulate(r.alphabet(), r.sides(), r.neighborhood(),
                             [&](std::span<const State> x) {
                               for (std::size_t p = 0; p < x.size(); ++p) pre[p] = inv[x[p]];
                               return perm[r(pre)];
                             });
}

StateClass classify_state(const LocalRule& r, State s) {
  if (!r.alphabet().contains(s)) throw std::invalid_argument("state outside alphabet");
  StateClass c;
  const Word all(static_cast<std::size_t>(r.width()), s);
  c.quiescent = r(all) == s;
  c.spreading = true;
  const std::uint32_t n = r.alphabet().size();
  const auto w = static_cast<unsigned>(r.width());
  for (std::uint64_t i = 0; i < r.table().size(); ++i) {
    const Word x = index_word(i, n, w);
    if (std::find(x.begin(), x.end(), s) != x.end() && r.table()[i] != s) {
      c.spreading = false;
      break;
    }
  }
  return c;
}

}  // namespace cadyn
