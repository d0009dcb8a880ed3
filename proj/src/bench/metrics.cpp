#include "signquest/bench/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace signquest {

SimilarityTraces similarity_traces(const AttackRecord& record, std::span<const double> true_gradient,
                                   std::size_t length) {
  SimilarityTraces out;
  const auto& est = record.estimate_trace;
  out.hamming.reserve(std::max(length, est.size()));
  out.cosine.reserve(std::max(length, est.size()));
  for (const auto& e : est) {
    out.hamming.push_back(hamming_similarity(e, true_gradient));
    out.cosine.push_back(cosine_similarity(e, true_gradient));
  }
  if (!est.empty()) {
    out.hamming.resize(std::max(length, est.size()), out.hamming.back());
    out.cosine.resize(std::max(length, est.size()), out.cosine.back());
  }
  return out;
}

std::vector<double> padded_mean(const std::vector<const std::vector<double>*>& traces,
                                std::size_t length) {
  for (const auto* t : traces) length = std::max(length, t->size());
  std::vector<double> sum(length, 0.0);
  std::size_t count = 0;
  for (const auto* t : traces) {
    if (t->empty()) continue;
    ++count;
    for (std::size_t k = 0; k < length; ++k) sum[k] += k < t->size() ? (*t)[k] : t->back();
  }
  if (count == 0) return {};
  for (double& v : sum) v /= static_cast<double>(count);
  return sum;
}

std::vector<std::pair<std::uint64_t, double>> success_curve(std::vector<std::uint64_t> success_queries,
                                                            std::size_t attempted) {
  std::vector<std::pair<std::uint64_t, double>> curve;
  if (attempted == 0) return curve;
  if (success_queries.size() > attempted) throw std::invalid_argument("more successes than attempts");
  std::sort(success_queries.begin(), success_queries.end());
  for (std::size_t k = 0; k < success_queries.size(); ++k) {
    const double rate = static_cast<double>(k + 1) / static_cast<double>(attempted);
    if (!curve.empty() && curve.back().first == success_queries[k]) {
      curve.back().second = rate;
    } else {
      curve.emplace_back(success_queries[k], rate);
    }
  }
  return curve;
}

double expected_spend(double failure_rate, std::optional<double> avg_queries, std::uint64_t budget) {
  const double fail_term = failure_rate * static_cast<double>(budget);
  return avg_queries ? (1.0 - failure_rate) * *avg_queries + fail_term : fail_term;
}

}  // namespace signquest
