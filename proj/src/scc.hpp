#pragma once

// Iterative Tarjan SCC over an implicit graph.

#include <cstdint>
#include <utility>
#include <vector>

namespace cadyn::detail {

struct SccResult {
  /// Component of each node. Components are numbered in completion order,
  /// so every edge goes from a component to one with an equal or smaller id.
  std::vector<std::uint32_t> comp;
  std::uint32_t count = 0;
};

/// `succ(node, cursor, target)` must set `target` to the next successor at
/// or after `cursor`, advance `cursor` past it and return true, or return
/// false when no successors remain.
template <class Succ>
SccResult tarjan(std::uint64_t n, Succ&& succ) {
  constexpr std::uint32_t kUnvisited = UINT32_MAX;
  SccResult res;
  res.comp.assign(n, kUnvisited);
  std::vector<std::uint32_t> index(n, kUnvisited);
  std::vector<std::uint32_t> low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  struct Frame {
    std::uint32_t node;
    std::uint64_t cursor;
  };
  std::vector<Frame> calls;
  std::uint32_t counter = 0;

  for (std::uint64_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    auto r = static_cast<std::uint32_t>(root);
    index[r] = low[r] = counter++;
    stack.push_back(r);
    on_stack[r] = true;
    calls.push_back({r, 0});
    while (!calls.empty()) {
      Frame& f = calls.back();
      std::uint64_t target = 0;
      if (succ(f.node, f.cursor, target)) {
        auto t = static_cast<std::uint32_t>(target);
        if (index[t] == kUnvisited) {
          index[t] = low[t] = counter++;
          stack.push_back(t);
          on_stack[t] = true;
          calls.push_back({t, 0});
        } else if (on_stack[t]) {
          if (index[t] < low[f.node]) low[f.node] = index[t];
        }
        continue;
      }
      const std::uint32_t v = f.node;
      calls.pop_back();
      if (!calls.empty() && low[v] < low[calls.back().node]) low[calls.back().node] = low[v];
      if (low[v] == index[v]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          res.comp[w] = res.count;
        } while (w != v);
        ++res.count;
      }
    }
  }
  return res;
}

}  // namespace cadyn::detail
