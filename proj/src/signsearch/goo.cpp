#include "signquest/signsearch/goo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "signquest/core/gray_code.hpp"
#include "signquest/core/partition_tree.hpp"

namespace signquest {

DepthSchedule default_depth_schedule(std::size_t n) {
  return [n](std::uint64_t t) {
    const auto root = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(t))));
    return std::min(root, n);
  };
}

namespace {

class GooSearch {
 public:
  GooSearch(const SignObjective& g, std::size_t n, std::uint64_t budget, const SignVector* truth)
      : n_(n), budget_(budget), traced_(g, truth), best_code_(n, -1) {}

  /// Value of the code at `rank`, querying it if unseen. nullopt once the
  /// budget is spent.
  std::optional<double> value(std::uint64_t rank) {
    if (auto it = values_.find(rank); it != values_.end()) return it->second;
    if (traced_.queries() >= budget_) return std::nullopt;
    SignVector code = gray_code_at(n_, rank);
    const double v = traced_(code);
    values_.emplace(rank, v);
    if (v > best_value_) {
      best_value_ = v;
      best_code_ = std::move(code);
    }
    return v;
  }

  SearchResult finish() {
    return {best_code_, best_value_, traced_.queries(), traced_.take_trace(), false};
  }

 private:
  std::size_t n_;
  std::uint64_t budget_;
  TracedObjective traced_;
  std::unordered_map<std::uint64_t, double> values_;
  SignVector best_code_;
  double best_value_ = -std::numeric_limits<double>::infinity();
};

}  // namespace

SearchResult goo_run(const SignObjective& g, std::size_t n, std::uint64_t budget,
                     DepthSchedule h_max, const SignVector* truth, GooStats* stats) {
  if (n == 0 || n > kMaxGrayDimension) throw std::invalid_argument("GOO dimension out of range");
  if (!h_max) h_max = default_depth_schedule(n);
  GooStats local;
  GooStats& st = stats != nullptr ? *stats : local;
  st = {};

  GooSearch search(g, n, budget, truth);
  // The all -1 code sits at rank 0; it is queried before the tree is grown.
  if (!search.value(0)) return search.finish();
  const PartitionNode root = partition_root(n);
  if (!search.value(root.representative_rank())) return search.finish();

  struct Leaf {
    PartitionNode node;
    double value;
  };
  std::vector<std::vector<Leaf>> leaves(1);
  leaves[0].push_back({root, *search.value(root.representative_rank())});
  std::size_t tree_depth = 0;
  std::uint64_t t = 1;
  std::size_t open = 1;

  while (open > 0) {
    bool expanded = false;
    for (int attempt = 0; attempt < 2 && !expanded; ++attempt) {
      const std::size_t cap = attempt == 0 ? std::min(tree_depth, h_max(t)) : tree_depth;
      double v_max = -std::numeric_limits<double>::infinity();
      for (std::size_t h = 0; h <= cap && h < leaves.size(); ++h) {
        auto& row = leaves[h];
        if (row.empty()) continue;
        auto pick = std::max_element(row.begin(), row.end(), [](const Leaf& a, const Leaf& b) {
          return a.value < b.value || (a.value == b.value && a.node.index > b.node.index);
        });
        if (pick->value < v_max) continue;
        const Leaf chosen = *pick;
        row.erase(pick);
        --open;
        v_max = chosen.value;
        ++t;
        ++st.expansions;
        expanded = true;
        const auto [left, right] = expand_node(chosen.node);
        for (const PartitionNode& child : {left, right}) {
          const auto v = search.value(child.representative_rank());
          if (!v) return search.finish();
          tree_depth = std::max(tree_depth, child.depth);
          st.max_depth = tree_depth;
          if (child.is_singleton()) continue;
          if (leaves.size() <= child.depth) leaves.resize(child.depth + 1);
          leaves[child.depth].push_back({child, *v});
          ++open;
        }
      }
    }
  }
  st.exhausted = true;
  return search.finish();
}

}  // namespace signquest
