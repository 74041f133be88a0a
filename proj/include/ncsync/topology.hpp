#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ncsync/block_set.hpp"
#include "ncsync/rng.hpp"

namespace ncsync {

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

using Edge = std::pair<NodeId, NodeId>;

/// Exact non-negative fraction, always stored in lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

/// Thrown when rejection sampling cannot find a connected instance.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undirected simple graph over nodes 0..n-1. Immutable once built.
class Topology {
 public:
  /// Builds the exact (deduplicated, symmetrized) adjacency of `edges`.
  /// Connectivity is recorded, not enforced.
  static Topology from_edges(int n, const std::vector<Edge>& edges,
                             std::vector<Point> positions = {});

  int size() const { return static_cast<int>(adjacency_.size()); }
  BlockSet neighbors(NodeId v) const { return adjacency_.at(static_cast<std::size_t>(v)); }
  int degree(NodeId v) const { return neighbors(v).size(); }
  bool adjacent(NodeId u, NodeId v) const { return neighbors(u).contains(v); }
  int edge_count() const { return edge_count_; }
  bool connected() const { return connected_; }
  /// Edges with u < v, ascending.
  std::vector<Edge> edges() const;
  /// Empty unless the topology was generated from coordinates.
  const std::vector<Point>& positions() const { return positions_; }

  bool operator==(const Topology&) const = default;

 private:
  Topology() = default;

  std::vector<BlockSet> adjacency_;
  std::vector<Point> positions_;
  int edge_count_ = 0;
  bool connected_ = false;
};

/// 2|E| / N.
Rational average_degree(const Topology& t);
double average_degree_value(const Topology& t);

/// Breadth-first reachability from node 0.
bool is_connected(const Topology& t);

/// Disk graph over the given points: edge iff Euclidean distance <= radius.
Topology geometric_from_positions(std::vector<Point> positions, double radius);

/// Draws n uniform positions in the unit square and connects pairs within
/// `radius`. Returns nullopt when the graph is disconnected.
std::optional<Topology> generate_geometric(int n, double radius, Rng& rng);

/// Repeats generate_geometric until a connected instance appears.
/// Throws GenerationError after `max_rejections` disconnected draws.
Topology sample_connected_geometric(int n, double radius, Rng& rng, int max_rejections = 10'000);

namespace fixtures {
Topology path(int n);
Topology complete(int n);
/// Node 0 is the hub.
Topology star(int n);
}  // namespace fixtures

/// {"n": .., "edges": [[u,v],..], "positions": [[x,y],..]}
std::string to_json(const Topology& t);
Topology topology_from_json(std::string_view text);
Topology load_topology(const std::filesystem::path& path);
void save_topology(const Topology& t, const std::filesystem::path& path);

}  // namespace ncsync
