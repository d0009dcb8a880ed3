#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "signquest/signsearch/search_result.hpp"

namespace signquest {

/// Depth cap as a function of the expansion counter t.
using DepthSchedule = std::function<std::size_t(std::uint64_t t)>;

/// ceil(sqrt(t)), capped at n.
DepthSchedule default_depth_schedule(std::size_t n);

struct GooStats {
  std::uint64_t expansions = 0;
  std::size_t max_depth = 0;
  /// True when every non-singleton node has been expanded.
  bool exhausted = false;
};

/// Optimistic tree search over the Gray-ordered partition of {-1,+1}^n.
///
/// The all -1 code is evaluated first, then the root representative. Each
/// sweep visits depths 0..min(tree depth, h_max(t)) and expands the best
/// expandable leaf of a depth whenever it is at least as good as the best
/// leaf expanded earlier in the same sweep. Representatives are evaluated
/// once each; a code shared by a parent and child is not queried again.
SearchResult goo_run(const SignObjective& g, std::size_t n, std::uint64_t budget,
                     DepthSchedule h_max = {}, const SignVector* truth = nullptr,
                     GooStats* stats = nullptr);

}  // namespace signquest
