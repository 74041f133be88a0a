#include "ncsync/nc_core.hpp"

#include <string>

namespace ncsync {

BlockStore::BlockStore(std::vector<Payload> payloads) : payloads_(std::move(payloads)) {
  if (payloads_.empty()) throw std::invalid_argument("BlockStore: at least one block required");
  if (static_cast<int>(payloads_.size()) > kMaxNodes) {
    throw std::invalid_argument("BlockStore: at most 64 blocks");
  }
  payload_len_ = payloads_.front().size();
  for (const auto& p : payloads_) {
    if (p.size() != payload_len_) throw std::invalid_argument("BlockStore: payload lengths differ");
  }
}

BlockStore BlockStore::random(int blocks, std::size_t payload_len, Rng& rng) {
  std::vector<Payload> payloads(static_cast<std::size_t>(blocks), Payload(payload_len));
  for (auto& p : payloads) {
    for (auto& byte : p) byte = static_cast<std::uint8_t>(rng() >> 56);
  }
  return BlockStore(std::move(payloads));
}

const Payload& BlockStore::payload(BlockId id) const {
  if (!contains(id)) throw std::out_of_range("BlockStore: unknown block " + std::to_string(id));
  return payloads_[static_cast<std::size_t>(id)];
}

KnowledgeSet::KnowledgeSet(NodeId owner, int universe)
    : KnowledgeSet(owner, universe, BlockSet::single(owner)) {}

KnowledgeSet::KnowledgeSet(NodeId owner, int universe, BlockSet initial)
    : owner_(owner), universe_(universe), held_(initial) {
  if (universe < 1 || universe > kMaxNodes) throw std::invalid_argument("KnowledgeSet: bad universe");
  if (owner < 0 || owner >= universe) throw std::invalid_argument("KnowledgeSet: owner out of range");
  if (!initial.contains(owner)) throw std::invalid_argument("KnowledgeSet: owner block must be held");
  if (!initial.subset_of(BlockSet::first(universe))) {
    throw std::invalid_argument("KnowledgeSet: block outside universe");
  }
}

bool KnowledgeSet::insert(BlockId id) {
  if (id < 0 || id >= universe_) throw std::out_of_range("KnowledgeSet: block out of range");
  const bool fresh = !held_.contains(id);
  held_.insert(id);
  return fresh;
}

void xor_into(Payload& acc, const Payload& other) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] ^= other[i];
}

Packet encode(BlockSet blocks, const BlockStore& store, OpCounter* counter) {
  if (blocks.empty()) throw std::invalid_argument("encode: empty component set");
  Packet packet{blocks, Payload(store.payload_len(), 0)};
  bool first = true;
  blocks.for_each([&](BlockId id) {
    const Payload& p = store.payload(id);
    if (first) {
      packet.payload = p;
      first = false;
    } else {
      xor_into(packet.payload, p);
      charge(counter, p.size());
    }
  });
  return packet;
}

Classification classify(const Packet& packet, const KnowledgeSet& k, OpCounter* counter) {
  charge(counter, static_cast<std::uint64_t>(packet.components.size()));
  const BlockSet unknown = packet.components - k.held();
  switch (unknown.size()) {
    case 0:
      return AlreadyKnown{};
    case 1:
      return Decodable{unknown.front()};
    default:
      return Undecodable{unknown.size()};
  }
}

Decoded decode(const Packet& packet, const KnowledgeSet& k, const BlockStore& store, OpCounter* counter) {
  const BlockSet unknown = packet.components - k.held();
  if (unknown.size() != 1) {
    throw ContractViolation("decode: packet has " + std::to_string(unknown.size()) +
                            " unknown components, need exactly 1");
  }
  Decoded out{unknown.front(), packet.payload};
  (packet.components & k.held()).for_each([&](BlockId id) {
    xor_into(out.payload, store.payload(id));
    charge(counter, out.payload.size());
  });
  return out;
}

}  // namespace ncsync
