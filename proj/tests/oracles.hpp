#pragma once

// Naive reference implementations used only by tests. They work on
// std::set / std::vector and never call into the selection or sim code.

#include <algorithm>
#include <cstdint>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

namespace oracle {

using Held = std::vector<std::set<int>>;
using Adjacency = std::vector<std::vector<int>>;

inline Adjacency adjacency(int n, const std::vector<std::pair<int, int>>& edges) {
  Adjacency adj(static_cast<std::size_t>(n));
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return adj;
}

/// Number of neighbors of n that lack exactly one block of `chosen`.
inline int beta(int n, const std::vector<int>& chosen, const Held& held, const Adjacency& adj) {
  int b = 0;
  for (int j : adj[n]) {
    int unknown = 0;
    for (int blk : chosen) unknown += held[j].count(blk) == 0 ? 1 : 0;
    if (unknown == 1) ++b;
  }
  return b;
}

/// Every subset of `items`, each as an ascending vector.
inline std::vector<std::vector<int>> subsets(std::vector<int> items) {
  std::sort(items.begin(), items.end());
  std::vector<std::vector<int>> out;
  const std::size_t k = items.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    std::vector<int> s;
    for (std::size_t i = 0; i < k; ++i)
      if ((mask >> i) & 1U) s.push_back(items[i]);
    out.push_back(std::move(s));
  }
  return out;
}

/// max beta over all subsets of everything node n holds.
inline int best_beta_full(int n, const Held& held, const Adjacency& adj) {
  int best = 0;
  for (const auto& s : subsets({held[n].begin(), held[n].end()})) best = std::max(best, beta(n, s, held, adj));
  return best;
}

inline std::vector<int> pool(int n, const Held& held, const Adjacency& adj) {
  std::set<int> p;
  for (int j : adj[n])
    for (int blk : held[n])
      if (held[j].count(blk) == 0) p.insert(blk);
  return {p.begin(), p.end()};
}

struct Choice {
  std::vector<int> chosen;
  int beta = 0;
};

/// Max beta, then fewer blocks, then lexicographically smallest.
inline Choice select(int n, const Held& held, const Adjacency& adj, bool singletons_only) {
  Choice best;
  bool have = false;
  for (const auto& s : subsets(pool(n, held, adj))) {
    if (s.empty() || (singletons_only && s.size() != 1)) continue;
    const int b = beta(n, s, held, adj);
    const auto key = std::make_tuple(-b, s.size(), s);
    if (!have || key < std::make_tuple(-best.beta, best.chosen.size(), best.chosen)) {
      best = {s, b};
      have = true;
    }
  }
  return best;
}

inline bool synced(const Held& held) {
  for (const auto& h : held)
    if (h.size() != held.size()) return false;
  return true;
}

inline void deliver(int tx, const std::vector<int>& chosen, Held& held, const Adjacency& adj) {
  for (int j : adj[tx]) {
    std::vector<int> unknown;
    for (int blk : chosen)
      if (held[j].count(blk) == 0) unknown.push_back(blk);
    if (unknown.size() == 1) held[j].insert(unknown.front());
  }
}

struct Slot {
  int tx;
  std::vector<int> chosen;
};

/// Loss-free reference run. scheme: 0 uncoded cyclic, 1 coded cyclic, 2 node selection.
inline std::vector<Slot> reference_run(int n, const Adjacency& adj, int scheme, int max_slots = 100000) {
  Held held(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) held[v].insert(v);
  std::vector<Slot> slots;
  int cursor = 0;
  while (!synced(held) && static_cast<int>(slots.size()) < max_slots) {
    if (scheme == 2) {
      int best_node = -1;
      Choice best;
      for (int i = 0; i < n; ++i) {
        const Choice c = select(i, held, adj, false);
        const int m = static_cast<int>(adj[i].size());
        if (best_node < 0) {
          best_node = i;
          best = c;
          continue;
        }
        const int mb = static_cast<int>(adj[best_node].size());
        // compare c.beta/m with best.beta/mb
        const long lhs = static_cast<long>(c.beta) * mb;
        const long rhs = static_cast<long>(best.beta) * m;
        if (lhs > rhs || (lhs == rhs && c.beta > best.beta)) {
          best_node = i;
          best = c;
        }
      }
      deliver(best_node, best.chosen, held, adj);
      slots.push_back({best_node, best.chosen});
    } else {
      const int tx = cursor;
      cursor = (cursor + 1) % n;
      const Choice c = select(tx, held, adj, scheme == 0);
      if (c.beta == 0) continue;
      deliver(tx, c.chosen, held, adj);
      slots.push_back({tx, c.chosen});
    }
  }
  return slots;
}

}  // namespace oracle
