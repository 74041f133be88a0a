#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace ncsync {

/// Upper bound on nodes (and therefore blocks) per network.
inline constexpr int kMaxNodes = 64;

using NodeId = int;
using BlockId = int;

/// Fixed-width set of block or node indices in [0, kMaxNodes).
class BlockSet {
 public:
  constexpr BlockSet() = default;
  constexpr explicit BlockSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr BlockSet single(int id) { return BlockSet(std::uint64_t{1} << id); }
  /// {0, 1, ..., n-1}
  static constexpr BlockSet first(int n) {
    return BlockSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }
  static BlockSet of(const std::vector<int>& ids) {
    BlockSet s;
    for (int id : ids) s.insert(id);
    return s;
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool contains(int id) const { return (bits_ >> id) & 1U; }
  constexpr void insert(int id) { bits_ |= std::uint64_t{1} << id; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  /// Smallest member; undefined on the empty set.
  constexpr int front() const { return std::countr_zero(bits_); }

  constexpr BlockSet operator&(BlockSet o) const { return BlockSet(bits_ & o.bits_); }
  constexpr BlockSet operator|(BlockSet o) const { return BlockSet(bits_ | o.bits_); }
  constexpr BlockSet operator^(BlockSet o) const { return BlockSet(bits_ ^ o.bits_); }
  /// Set difference.
  constexpr BlockSet operator-(BlockSet o) const { return BlockSet(bits_ & ~o.bits_); }
  constexpr BlockSet& operator|=(BlockSet o) { bits_ |= o.bits_; return *this; }
  constexpr bool operator==(const BlockSet&) const = default;

  constexpr bool subset_of(BlockSet o) const { return (bits_ & ~o.bits_) == 0; }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  template <typename Fn>
  constexpr void for_each(Fn&& fn) const {
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) fn(std::countr_zero(b));
  }

 private:
  std::uint64_t bits_ = 0;
};

/// Lexicographic order of the ascending id sequences of two equal-sized sets.
constexpr bool lex_less(BlockSet a, BlockSet b) {
  const std::uint64_t diff = a.bits() ^ b.bits();
  if (diff == 0) return false;
  return (a.bits() & (diff & (~diff + 1))) != 0;
}

}  // namespace ncsync
