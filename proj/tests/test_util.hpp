#pragma once

#include <set>
#include <vector>

#include "ncsync/nc_core.hpp"
#include "ncsync/rng.hpp"
#include "ncsync/topology.hpp"
#include "oracles.hpp"

namespace testutil {

/// Each node holds its own block plus each other block with probability p.
inline std::vector<ncsync::KnowledgeSet> random_knowledge(int n, double p, ncsync::Rng& rng) {
  std::vector<ncsync::KnowledgeSet> out;
  for (int v = 0; v < n; ++v) {
    ncsync::BlockSet held = ncsync::BlockSet::single(v);
    for (int b = 0; b < n; ++b)
      if (ncsync::uniform01(rng) < p) held.insert(b);
    out.emplace_back(v, n, held);
  }
  return out;
}

inline oracle::Held to_held(const std::vector<ncsync::KnowledgeSet>& k) {
  oracle::Held h;
  for (const auto& ks : k) {
    const auto v = ks.held().to_vector();
    h.emplace_back(v.begin(), v.end());
  }
  return h;
}

inline oracle::Adjacency to_adj(const ncsync::Topology& t) { return oracle::adjacency(t.size(), t.edges()); }

/// Connected geometric topology with a random size in [lo, hi].
inline ncsync::Topology random_topology(int lo, int hi, ncsync::Rng& rng) {
  const int n = lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  const double radius = 0.3 + 0.9 * ncsync::uniform01(rng);
  return ncsync::sample_connected_geometric(n, radius, rng);
}

}  // namespace testutil
