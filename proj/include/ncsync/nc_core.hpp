#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

#include "ncsync/block_set.hpp"
#include "ncsync/rng.hpp"

namespace ncsync {

using Payload = std::vector<std::uint8_t>;

/// Raised when an operation is called outside its precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Complexity proxy shared by the codec, selection and simulator.
///
/// Accounting rules:
///   - one unit per payload byte XORed while encoding or decoding
///   - one unit per set-membership test (classify, candidate pool, benefit)
///   - |subset| * m_n units per subset evaluated by block selection
class OpCounter {
 public:
  void add(std::uint64_t n) { count_ += n; }
  std::uint64_t count() const { return count_; }

 private:
  std::uint64_t count_ = 0;
};

inline void charge(OpCounter* counter, std::uint64_t n) {
  if (counter != nullptr) counter->add(n);
}

/// Original payloads of every block; all of equal length.
class BlockStore {
 public:
  static constexpr std::size_t kDefaultPayloadLen = 32;

  explicit BlockStore(std::vector<Payload> payloads);
  static BlockStore random(int blocks, std::size_t payload_len, Rng& rng);

  int size() const { return static_cast<int>(payloads_.size()); }
  std::size_t payload_len() const { return payload_len_; }
  bool contains(BlockId id) const { return id >= 0 && id < size(); }
  /// Throws std::out_of_range for an unknown id.
  const Payload& payload(BlockId id) const;

 private:
  std::vector<Payload> payloads_;
  std::size_t payload_len_ = 0;
};

/// Blocks held by one node. Grows monotonically.
class KnowledgeSet {
 public:
  /// Seeds the owner's own block.
  KnowledgeSet(NodeId owner, int universe);
  KnowledgeSet(NodeId owner, int universe, BlockSet initial);

  NodeId owner() const { return owner_; }
  BlockSet held() const { return held_; }
  BlockSet missing() const { return BlockSet::first(universe_) - held_; }
  int size() const { return held_.size(); }
  int universe() const { return universe_; }
  bool complete() const { return held_.size() == universe_; }
  bool contains(BlockId id) const { return held_.contains(id); }
  /// Returns true when the block was new.
  bool insert(BlockId id);

  bool operator==(const KnowledgeSet&) const = default;

 private:
  NodeId owner_;
  int universe_;
  BlockSet held_;
};

/// XOR of the component payloads, tagged with the component ids.
struct Packet {
  BlockSet components;
  Payload payload;
};

Packet encode(BlockSet blocks, const BlockStore& store, OpCounter* counter = nullptr);

struct AlreadyKnown {
  bool operator==(const AlreadyKnown&) const = default;
};
struct Decodable {
  BlockId missing;
  bool operator==(const Decodable&) const = default;
};
struct Undecodable {
  int unknown_count;
  bool operator==(const Undecodable&) const = default;
};
using Classification = std::variant<AlreadyKnown, Decodable, Undecodable>;

/// A packet is useful to a receiver iff exactly one component is unknown to it.
Classification classify(const Packet& packet, const KnowledgeSet& k, OpCounter* counter = nullptr);

struct Decoded {
  BlockId block;
  Payload payload;
};

/// Peels every known component off the packet payload.
/// Throws ContractViolation unless classify(packet, k) is Decodable.
Decoded decode(const Packet& packet, const KnowledgeSet& k, const BlockStore& store,
               OpCounter* counter = nullptr);

void xor_into(Payload& acc, const Payload& other);

}  // namespace ncsync
