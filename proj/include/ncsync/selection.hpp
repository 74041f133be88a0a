#pragma once

#include <span>
#include <vector>

#include "ncsync/block_set.hpp"
#include "ncsync/nc_core.hpp"
#include "ncsync/topology.hpp"

namespace ncsync {

/// Outcome of data block selection at one transmitter.
struct DbsResult {
  BlockSet chosen;  ///< blocks to XOR together
  int beta = 0;     ///< number of neighbors that decode something new
  BlockSet helped;  ///< those neighbors

  bool operator==(const DbsResult&) const = default;
};

struct NodeScore {
  DbsResult dbs;
  Rational score;  ///< beta / degree
};

struct NsResult {
  NodeId chosen_node = 0;
  Rational score;
  std::vector<NodeScore> per_node;
};

/// Subsets up to this pool size are searched exhaustively; larger pools fall
/// back to greedy growth.
inline constexpr int kDefaultSearchCap = 20;

/// Union over neighbors of (blocks n holds that the neighbor lacks).
BlockSet candidate_pool(NodeId n, std::span<const KnowledgeSet> knowledge, const Topology& t,
                        OpCounter* counter = nullptr);

/// Neighbors of n missing exactly one block of `chosen`.
DbsResult evaluate_benefit(NodeId n, BlockSet chosen, std::span<const KnowledgeSet> knowledge,
                           const Topology& t, OpCounter* counter = nullptr);

/// Best block subset for n to XOR. Ties prefer fewer blocks, then the
/// lexicographically smallest ascending id sequence.
DbsResult dbs(NodeId n, std::span<const KnowledgeSet> knowledge, const Topology& t,
              OpCounter* counter = nullptr, int search_cap = kDefaultSearchCap);

/// dbs restricted to single blocks (uncoded store-and-forward).
DbsResult dbs_single(NodeId n, std::span<const KnowledgeSet> knowledge, const Topology& t,
                     OpCounter* counter = nullptr);

/// Picks the node maximizing beta / degree. Ties prefer larger beta, then the
/// smaller node id.
NsResult ns(std::span<const KnowledgeSet> knowledge, const Topology& t, OpCounter* counter = nullptr,
            int search_cap = kDefaultSearchCap);

}  // namespace ncsync
