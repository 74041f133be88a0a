#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ncsync/nc_core.hpp"
#include "ncsync/rng.hpp"
#include "ncsync/selection.hpp"
#include "ncsync/topology.hpp"

namespace ncsync {

enum class Scheme {
  UDbs,    ///< uncoded, cyclic TDMA, single-block selection
  CDbs,    ///< XOR-coded, cyclic TDMA, subset selection
  CDbsNs,  ///< XOR-coded, node selection every slot
};

inline constexpr Scheme kAllSchemes[] = {Scheme::UDbs, Scheme::CDbs, Scheme::CDbsNs};

/// "U_DBS", "C_DBS", "C_DBS_NS"
std::string_view scheme_name(Scheme s);
/// "u-dbs", "c-dbs", "c-dbs-ns"
std::string_view scheme_flag(Scheme s);
/// Accepts either spelling, case-insensitive.
std::optional<Scheme> parse_scheme(std::string_view text);

struct SimConfig {
  Scheme scheme = Scheme::CDbs;
  double pe = 0.0;  ///< per-receiver loss probability
  std::size_t payload_len = BlockStore::kDefaultPayloadLen;
  int max_slots = 0;  ///< 0 means 10 * N^2
  std::uint64_t seed = 0;
  bool record_events = true;
  int search_cap = kDefaultSearchCap;
};

enum class Outcome { Lost, AlreadyKnown, Decoded, Undecodable };

std::string_view outcome_name(Outcome o);

struct ReceiverOutcome {
  NodeId rx = 0;
  Outcome result = Outcome::Lost;
  BlockId block = -1;  ///< set for Decoded only

  bool operator==(const ReceiverOutcome&) const = default;
};

struct SlotEvent {
  int slot = 0;  ///< 1-based
  NodeId tx = 0;
  BlockSet components;
  std::vector<ReceiverOutcome> outcomes;

  bool operator==(const SlotEvent&) const = default;
};

struct SimResult {
  int slots = 0;
  bool converged = false;
  std::vector<SlotEvent> events;
  std::uint64_t op_count = 0;
  std::vector<KnowledgeSet> final_knowledge;
  /// Cyclic turns skipped because the node had nothing to offer. They cost no
  /// slot; slots + idle_turns is the count under a fixed TDMA frame.
  int idle_turns = 0;
};

/// Mutable state of one synchronization run. Single-threaded.
class Simulation {
 public:
  /// Seeds node n with block n. Throws if the topology is disconnected or
  /// the store does not hold exactly one block per node.
  Simulation(const Topology& t, const BlockStore& store, const SimConfig& cfg);

  bool synchronized() const;
  int slots() const { return slots_; }
  int idle_turns() const { return idle_turns_; }
  int max_slots() const { return max_slots_; }
  const std::vector<KnowledgeSet>& knowledge() const { return knowledge_; }
  const std::vector<SlotEvent>& events() const { return events_; }
  std::uint64_t op_count() const { return counter_.count(); }
  /// Next node in the cyclic TDMA order.
  NodeId cursor() const { return cursor_; }

  /// One TDMA turn. Returns nullopt (and consumes no slot) when the current
  /// node has nothing innovative for any neighbor.
  std::optional<SlotEvent> step_cyclic();

  /// Broadcast from the node-selection winner. Requires an unsynchronized state.
  SlotEvent step_ns();

  /// Delivers `packet` to every neighbor of tx, each lost independently with
  /// probability pe, and updates the receivers' knowledge.
  std::vector<ReceiverOutcome> apply_broadcast(NodeId tx, const Packet& packet);

  /// Runs the scheme until synchronized or out of slots.
  void run_to_completion();

  SimResult result() const;

 private:
  SlotEvent transmit(NodeId tx, BlockSet chosen);

  Topology topology_;
  BlockStore store_;
  SimConfig cfg_;
  std::vector<KnowledgeSet> knowledge_;
  Rng rng_;
  OpCounter counter_;
  std::vector<SlotEvent> events_;
  NodeId cursor_ = 0;
  int slots_ = 0;
  int idle_turns_ = 0;
  int max_slots_ = 0;
};

SimResult run(const Topology& t, const SimConfig& cfg, const BlockStore& store);

/// Draws a random payload store from cfg.seed, then runs.
SimResult run(const Topology& t, const SimConfig& cfg);

/// {"slot":..,"tx":..,"components":[..],"outcomes":[{"rx":..,"result":..},..]}
std::string to_json_line(const SlotEvent& e);
void write_trace(const std::vector<SlotEvent>& events, const std::filesystem::path& path);
std::vector<SlotEvent> read_trace(const std::filesystem::path& path);

}  // namespace ncsync
