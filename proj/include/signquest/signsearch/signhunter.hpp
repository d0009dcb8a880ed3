#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>

#include "signquest/core/sign_vector.hpp"
#include "signquest/signsearch/search_result.hpp"

namespace signquest {

/// Divide-and-conquer sign search.
///
/// At depth h the code is cut into 2^h chunks of length ceil(n / 2^h). Each
/// step flips the next chunk and keeps the flip iff the objective does not
/// drop below the best value seen so far. The search is done once depth
/// ceil(log2 n) + 1 is reached.
///
/// A step can be driven in one call with step(g), or split into propose()
/// and observe(value) when the caller evaluates the candidate itself.
/// Chunks that start past the end of the code (possible when n is not a
/// power of two) are passed over without a query but still count as steps.
class SignHunter {
 public:
  explicit SignHunter(SignVector init);

  /// Flips the current chunk and returns the candidate code.
  const SignVector& propose();
  /// Keeps or reverts the proposed flip given its objective value.
  void observe(double value);
  double step(const SignObjective& g);

  /// Replaces the best value with the objective at the current estimate, so
  /// the next flip must beat it. Used before the first step (evaluating the
  /// initial code) or whenever the objective itself has changed.
  void anchor(double current_value);

  bool is_done() const noexcept { return done_; }
  const SignVector& estimate() const noexcept { return s_; }
  double best_value() const noexcept { return best_; }
  std::size_t depth() const noexcept { return h_; }
  std::uint64_t chunk_index() const noexcept { return i_; }
  std::size_t chunk_length() const noexcept;
  std::uint64_t steps_taken() const noexcept { return steps_; }

  /// ceil(log2 n) + 1, the depth at which the search terminates.
  static std::size_t final_depth(std::size_t n);
  /// 2^(ceil(log2 n) + 1) - 1.
  static std::uint64_t total_steps(std::size_t n);
  /// Steps whose chunk is non-empty, i.e. objective evaluations for a full
  /// schedule.
  static std::uint64_t total_queries(std::size_t n);

 private:
  void advance();
  void skip_empty();
  std::size_t chunk_begin() const noexcept;

  SignVector s_;
  double best_ = -std::numeric_limits<double>::infinity();
  std::size_t h_ = 0;
  std::uint64_t i_ = 0;
  std::uint64_t steps_ = 0;
  bool done_ = false;
  bool pending_ = false;
};

/// Runs SignHunter on g from `init` (uniform random code from `seed` when
/// absent) until the schedule completes or `budget` evaluations are spent.
/// `truth`, when given, fills the Hamming column of the trace. With
/// `anchored`, the initial code is evaluated first (one extra query) and
/// serves as the starting best value.
SearchResult signhunter_run(const SignObjective& g, std::size_t n, std::uint64_t budget,
                            std::uint64_t seed, const SignVector* truth = nullptr,
                            std::optional<SignVector> init = std::nullopt, bool anchored = false);

/// Evaluates the base code then flips one coordinate at a time, keeping a
/// flip iff it does not lower the objective. Always n + 1 evaluations.
SearchResult sequential_flip(const SignObjective& g, std::size_t n,
                             const SignVector* truth = nullptr,
                             std::optional<SignVector> init = std::nullopt);

/// Uniform random code.
SignVector random_sign_vector(std::size_t n, std::uint64_t seed);

}  // namespace signquest
