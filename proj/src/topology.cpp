#include "ncsync/topology.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace ncsync {

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw std::invalid_argument("Rational: denominator must be positive");
  const std::int64_t g = std::gcd(num, den);
  return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
}

Topology Topology::from_edges(int n, const std::vector<Edge>& edges, std::vector<Point> positions) {
  if (n < 1 || n > kMaxNodes) {
    throw std::invalid_argument("node count must be in [1, " + std::to_string(kMaxNodes) + "], got " +
                                std::to_string(n));
  }
  if (!positions.empty() && static_cast<int>(positions.size()) != n) {
    throw std::invalid_argument("positions must be empty or have one entry per node");
  }
  Topology t;
  t.adjacency_.assign(static_cast<std::size_t>(n), BlockSet{});
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n) {
      throw std::invalid_argument("edge (" + std::to_string(u) + "," + std::to_string(v) +
                                  ") has an endpoint outside [0, " + std::to_string(n) + ")");
    }
    if (u == v) throw std::invalid_argument("self-loop at node " + std::to_string(u));
    t.adjacency_[static_cast<std::size_t>(u)].insert(v);
    t.adjacency_[static_cast<std::size_t>(v)].insert(u);
  }
  int degree_sum = 0;
  for (const auto& a : t.adjacency_) degree_sum += a.size();
  t.edge_count_ = degree_sum / 2;
  t.positions_ = std::move(positions);
  t.connected_ = is_connected(t);
  return t;
}

std::vector<Edge> Topology::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(edge_count_));
  for (int u = 0; u < size(); ++u) {
    neighbors(u).for_each([&](int v) {
      if (u < v) out.emplace_back(u, v);
    });
  }
  return out;
}

Rational average_degree(const Topology& t) { return Rational::make(2 * t.edge_count(), t.size()); }

double average_degree_value(const Topology& t) {
  return 2.0 * static_cast<double>(t.edge_count()) / static_cast<double>(t.size());
}

bool is_connected(const Topology& t) {
  const int n = t.size();
  if (n == 0) return false;
  BlockSet seen = BlockSet::single(0);
  BlockSet frontier = seen;
  while (!frontier.empty()) {
    BlockSet next;
    frontier.for_each([&](int v) { next |= t.neighbors(v); });
    frontier = next - seen;
    seen |= frontier;
  }
  return seen == BlockSet::first(n);
}

Topology geometric_from_positions(std::vector<Point> positions, double radius) {
  const int n = static_cast<int>(positions.size());
  std::vector<Edge> edges;
  const double r2 = radius * radius;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const double dx = positions[u].x - positions[v].x;
      const double dy = positions[u].y - positions[v].y;
      if (dx * dx + dy * dy <= r2) edges.emplace_back(u, v);
    }
  }
  return Topology::from_edges(n, edges, std::move(positions));
}

std::optional<Topology> generate_geometric(int n, double radius, Rng& rng) {
  if (n < 2 || n > kMaxNodes) {
    throw std::invalid_argument("generate_geometric: n must be in [2, 64], got " + std::to_string(n));
  }
  if (!(radius > 0.0) || radius > std::sqrt(2.0) + 1e-12) {
    throw std::invalid_argument("generate_geometric: radius must be in (0, sqrt(2)]");
  }
  std::vector<Point> positions(static_cast<std::size_t>(n));
  for (auto& p : positions) {
    p.x = uniform01(rng);
    p.y = uniform01(rng);
  }
  Topology t = geometric_from_positions(std::move(positions), radius);
  if (!t.connected()) return std::nullopt;
  return t;
}

Topology sample_connected_geometric(int n, double radius, Rng& rng, int max_rejections) {
  for (int attempt = 0; attempt <= max_rejections; ++attempt) {
    if (auto t = generate_geometric(n, radius, rng)) return *std::move(t);
  }
  std::ostringstream msg;
  msg << "no connected topology for n=" << n << " radius=" << radius << " after " << max_rejections
      << " rejections";
  throw GenerationError(msg.str());
}

namespace fixtures {

Topology path(int n) {
  std::vector<Edge> edges;
  for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return Topology::from_edges(n, edges);
}

Topology complete(int n) {
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Topology::from_edges(n, edges);
}

Topology star(int n) {
  std::vector<Edge> edges;
  for (int v = 1; v < n; ++v) edges.emplace_back(0, v);
  return Topology::from_edges(n, edges);
}

}  // namespace fixtures

std::string to_json(const Topology& t) {
  nlohmann::ordered_json j;
  j["n"] = t.size();
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& [u, v] : t.edges()) j["edges"].push_back({u, v});
  j["positions"] = nlohmann::ordered_json::array();
  for (const auto& p : t.positions()) j["positions"].push_back({p.x, p.y});
  return j.dump();
}

Topology topology_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("topology JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("edges")) {
    throw std::invalid_argument("topology JSON: expected object with fields \"n\" and \"edges\"");
  }
  try {
    const int n = j.at("n").get<int>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw std::invalid_argument("topology JSON: edge must be [u, v]");
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    std::vector<Point> positions;
    if (j.contains("positions")) {
      for (const auto& p : j.at("positions")) {
        if (!p.is_array() || p.size() != 2) {
          throw std::invalid_argument("topology JSON: position must be [x, y]");
        }
        positions.push_back({p[0].get<double>(), p[1].get<double>()});
      }
    }
    return Topology::from_edges(n, edges, std::move(positions));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("topology JSON: ") + e.what());
  }
}

Topology load_topology(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read topology file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return topology_from_json(buf.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

void save_topology(const Topology& t, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write topology file " + path.string());
  out << to_json(t) << '\n';
}

}  // namespace ncsync
