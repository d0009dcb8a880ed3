#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>

#include "signquest/core/sign_vector.hpp"

namespace signquest {

/// Node (depth, index) of the binary partition of the Gray-ordered hypercube.
///
/// A node owns the contiguous rank interval [first, last]. Its representative
/// is the lower median rank of that interval. Children split the interval in
/// two contiguous halves; on odd sizes the left child gets the extra rank.
struct PartitionNode {
  std::size_t depth = 0;
  std::uint64_t index = 0;
  std::uint64_t first = 0;
  std::uint64_t last = 0;

  std::uint64_t size() const noexcept { return last - first + 1; }
  std::uint64_t representative_rank() const noexcept { return first + (size() - 1) / 2; }
  bool is_singleton() const noexcept { return first == last; }
  bool contains(std::uint64_t rank) const noexcept { return rank >= first && rank <= last; }

  /// Largest rank distance from the representative to any member of the cell.
  std::uint64_t radius() const noexcept;

  friend bool operator==(const PartitionNode&, const PartitionNode&) = default;
};

/// Root of the tree over all 2^n ranks.
PartitionNode partition_root(std::size_t n);

/// Representative code of `node` in dimension n.
SignVector representative(const PartitionNode& node, std::size_t n);

/// Splits a node into its two children. Throws std::invalid_argument on a
/// singleton cell.
std::pair<PartitionNode, PartitionNode> expand_node(const PartitionNode& node);

}  // namespace signquest
