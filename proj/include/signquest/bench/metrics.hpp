#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "signquest/attacks/attack.hpp"

namespace signquest {

struct SimilarityTraces {
  std::vector<double> hamming;
  std::vector<double> cosine;
};

/// Per-query similarity of the record's estimates to the true gradient.
/// When `length` exceeds the number of recorded estimates, the last values
/// are repeated up to `length`.
SimilarityTraces similarity_traces(const AttackRecord& record, std::span<const double> true_gradient,
                                   std::size_t length = 0);

/// Element-wise mean of traces of unequal length; shorter traces are padded
/// with their final value. Empty traces are skipped.
std::vector<double> padded_mean(const std::vector<const std::vector<double>*>& traces,
                                std::size_t length = 0);

/// Fraction of `attempted` inputs broken within k queries, at each distinct
/// success query count k. Non-decreasing and bounded by the success rate.
std::vector<std::pair<std::uint64_t, double>> success_curve(std::vector<std::uint64_t> success_queries,
                                                            std::size_t attempted);

/// (1 - failure_rate) * avg_queries + failure_rate * budget; the first term
/// is dropped when no attack succeeded.
double expected_spend(double failure_rate, std::optional<double> avg_queries, std::uint64_t budget);

}  // namespace signquest
