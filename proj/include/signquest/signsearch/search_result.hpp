#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "signquest/core/sign_vector.hpp"

namespace signquest {

/// Black-box objective over the hypercube, to be maximised.
using SignObjective = std::function<double(const SignVector&)>;

struct TracePoint {
  std::uint64_t query_index = 0;  // 1-based
  std::optional<std::size_t> hamming_to_truth;
  double value = 0.0;
};

struct SearchResult {
  SignVector estimate{1};
  /// Best objective value seen; for Hamming searches, the smallest response.
  double best_value = 0.0;
  std::uint64_t queries = 0;
  std::vector<TracePoint> trace;
  /// Set by ELIM when noisy responses emptied the candidate set.
  bool flagged = false;
};

/// Wraps an objective so every call is counted and traced against an
/// optional known truth.
class TracedObjective {
 public:
  TracedObjective(const SignObjective& g, const SignVector* truth) : g_(&g), truth_(truth) {}

  double operator()(const SignVector& q) {
    const double v = (*g_)(q);
    TracePoint p{++queries_, std::nullopt, v};
    if (truth_ != nullptr) p.hamming_to_truth = hamming_distance(q, *truth_);
    trace_.push_back(p);
    return v;
  }

  std::uint64_t queries() const noexcept { return queries_; }
  std::vector<TracePoint> take_trace() { return std::move(trace_); }

 private:
  const SignObjective* g_;
  const SignVector* truth_;
  std::uint64_t queries_ = 0;
  std::vector<TracePoint> trace_;
};

}  // namespace signquest
