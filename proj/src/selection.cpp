#include "ncsync/selection.hpp"

#include <array>
#include <bit>
#include <cstdint>

namespace ncsync {
namespace {

void check_inputs(NodeId n, std::span<const KnowledgeSet> knowledge, const Topology& t) {
  if (static_cast<int>(knowledge.size()) != t.size()) {
    throw std::invalid_argument("selection: one knowledge set per node required");
  }
  if (n < 0 || n >= t.size()) throw std::out_of_range("selection: node out of range");
}

// Per-neighbor view of what the pool can still teach each receiver.
struct Receivers {
  std::array<std::uint64_t, kMaxNodes> lack{};
  std::array<NodeId, kMaxNodes> id{};
  int count = 0;

  Receivers(NodeId n, BlockSet pool, std::span<const KnowledgeSet> knowledge, const Topology& t) {
    t.neighbors(n).for_each([&](NodeId j) {
      lack[static_cast<std::size_t>(count)] = (pool - knowledge[static_cast<std::size_t>(j)].held()).bits();
      id[static_cast<std::size_t>(count)] = j;
      ++count;
    });
  }

  int beta(std::uint64_t subset) const {
    int b = 0;
    for (int k = 0; k < count; ++k) b += std::popcount(subset & lack[static_cast<std::size_t>(k)]) == 1;
    return b;
  }

  BlockSet helped(std::uint64_t subset) const {
    BlockSet h;
    for (int k = 0; k < count; ++k) {
      if (std::popcount(subset & lack[static_cast<std::size_t>(k)]) == 1) h.insert(id[static_cast<std::size_t>(k)]);
    }
    return h;
  }
};

bool better(int beta, BlockSet s, int best_beta, BlockSet best) {
  if (beta != best_beta) return beta > best_beta;
  if (s.size() != best.size()) return s.size() < best.size();
  return lex_less(s, best);
}

DbsResult finish(BlockSet chosen, const Receivers& rx) {
  const BlockSet helped = rx.helped(chosen.bits());
  return DbsResult{chosen, helped.size(), helped};
}

DbsResult exhaustive(BlockSet pool, const Receivers& rx, OpCounter* counter) {
  const std::uint64_t m = static_cast<std::uint64_t>(rx.count);
  BlockSet best;
  int best_beta = -1;
  for (std::uint64_t s = pool.bits(); s != 0; s = (s - 1) & pool.bits()) {
    const BlockSet subset(s);
    charge(counter, static_cast<std::uint64_t>(subset.size()) * m);
    const int b = rx.beta(s);
    if (best_beta < 0 || better(b, subset, best_beta, best)) {
      best = subset;
      best_beta = b;
    }
  }
  return finish(best, rx);
}

// Grows the chosen set one block at a time while the benefit strictly rises.
DbsResult greedy(BlockSet pool, const Receivers& rx, OpCounter* counter) {
  const std::uint64_t m = static_cast<std::uint64_t>(rx.count);
  BlockSet chosen;
  int current = 0;
  for (;;) {
    int best_gain_beta = current;
    int best_block = -1;
    (pool - chosen).for_each([&](BlockId b) {
      const BlockSet trial = chosen | BlockSet::single(b);
      charge(counter, static_cast<std::uint64_t>(trial.size()) * m);
      const int beta = rx.beta(trial.bits());
      if (beta > best_gain_beta) {
        best_gain_beta = beta;
        best_block = b;
      }
    });
    if (best_block < 0) break;
    chosen.insert(best_block);
    current = best_gain_beta;
  }
  return finish(chosen, rx);
}

}  // namespace

BlockSet candidate_pool(NodeId n, std::span<const KnowledgeSet> knowledge, const Topology& t,
                        OpCounter* counter) {
  check_inputs(n, knowledge, t);
  const BlockSet own = knowledge[static_cast<std::size_t>(n)].held();
  charge(counter, static_cast<std::uint64_t>(t.degree(n)) * static_cast<std::uint64_t>(own.size()));
  BlockSet pool;
  t.neighbors(n).for_each([&](NodeId j) { pool |= own - knowledge[static_cast<std::size_t>(j)].held(); });
  return pool;
}

DbsResult evaluate_benefit(NodeId n, BlockSet chosen, std::span<const KnowledgeSet> knowledge,
                           const Topology& t, OpCounter* counter) {
  check_inputs(n, knowledge, t);
  charge(counter, static_cast<std::uint64_t>(chosen.size()) * static_cast<std::uint64_t>(t.degree(n)));
  return finish(chosen, Receivers(n, chosen, knowledge, t));
}

DbsResult dbs(NodeId n, std::span<const KnowledgeSet> knowledge, const Topology& t, OpCounter* counter,
              int search_cap) {
  const BlockSet pool = candidate_pool(n, knowledge, t, counter);
  if (pool.empty()) return {};
  const Receivers rx(n, pool, knowledge, t);
  return pool.size() <= search_cap ? exhaustive(pool, rx, counter) : greedy(pool, rx, counter);
}

DbsResult dbs_single(NodeId n, std::span<const KnowledgeSet> knowledge, const Topology& t,
                     OpCounter* counter) {
  const BlockSet pool = candidate_pool(n, knowledge, t, counter);
  if (pool.empty()) return {};
  const Receivers rx(n, pool, knowledge, t);
  BlockSet best;
  int best_beta = -1;
  pool.for_each([&](BlockId b) {
    charge(counter, static_cast<std::uint64_t>(rx.count));
    const int beta = rx.beta(BlockSet::single(b).bits());
    if (beta > best_beta) {
      best_beta = beta;
      best = BlockSet::single(b);
    }
  });
  return finish(best, rx);
}

NsResult ns(std::span<const KnowledgeSet> knowledge, const Topology& t, OpCounter* counter, int search_cap) {
  if (t.size() < 1) throw std::invalid_argument("ns: empty topology");
  NsResult out;
  out.per_node.reserve(static_cast<std::size_t>(t.size()));
  for (NodeId i = 0; i < t.size(); ++i) {
    DbsResult r = dbs(i, knowledge, t, counter, search_cap);
    const int m = t.degree(i);
    const Rational score = m == 0 ? Rational{} : Rational::make(r.beta, m);
    out.per_node.push_back({std::move(r), score});
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < out.per_node.size(); ++i) {
    const auto& c = out.per_node[i];
    const auto& b = out.per_node[best];
    const std::int64_t lhs = c.score.num * b.score.den;
    const std::int64_t rhs = b.score.num * c.score.den;
    if (lhs > rhs || (lhs == rhs && c.dbs.beta > b.dbs.beta)) best = i;
  }
  out.chosen_node = static_cast<NodeId>(best);
  out.score = out.per_node[best].score;
  return out;
}

}  // namespace ncsync
