#include "signquest/core/partition_tree.hpp"

#include <algorithm>
#include <stdexcept>

#include "signquest/core/gray_code.hpp"

namespace signquest {

std::uint64_t PartitionNode::radius() const noexcept {
  const std::uint64_t rep = representative_rank();
  return std::max(rep - first, last - rep);
}

PartitionNode partition_root(std::size_t n) {
  if (n == 0 || n > kMaxGrayDimension) throw std::invalid_argument("unsupported dimension");
  return PartitionNode{0, 0, 0, (std::uint64_t{1} << n) - 1};
}

SignVector representative(const PartitionNode& node, std::size_t n) {
  return gray_code_at(n, node.representative_rank());
}

std::pair<PartitionNode, PartitionNode> expand_node(const PartitionNode& node) {
  if (node.is_singleton()) throw std::invalid_argument("cannot expand a singleton cell");
  const std::uint64_t left_size = (node.size() + 1) / 2;
  PartitionNode left{node.depth + 1, 2 * node.index, node.first, node.first + left_size - 1};
  PartitionNode right{node.depth + 1, 2 * node.index + 1, node.first + left_size, node.last};
  return {left, right};
}

}  // namespace signquest
