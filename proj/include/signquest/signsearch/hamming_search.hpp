#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "signquest/oracles/hamming_oracle.hpp"
#include "signquest/signsearch/search_result.hpp"

namespace signquest {

/// Largest dimension ELIM accepts (it keeps a table of all 2^n codes).
inline constexpr std::size_t kMaxElimDimension = 20;

struct ElimOptions {
  std::uint64_t budget = std::numeric_limits<std::uint64_t>::max();
  /// Seeds the random part of the query pool when n is too large to score
  /// every code as a query.
  std::uint64_t seed = 1;
  const SignVector* truth = nullptr;
};

/// Elimination search. Each response r removes every candidate whose
/// distance to the query differs from r (noisy responses are rounded to the
/// nearest integer first). Queries are chosen to minimise the largest
/// surviving class. Stops when one candidate remains, a query hits r = 0, or
/// the budget ends.
///
/// Queries in the result are the oracle's own count delta, so a noisy
/// oracle's sampling cost is included when sampling happens inside the run.
/// If noisy responses empty the candidate set, the code from the last
/// non-empty set with the smallest total response mismatch is returned and
/// the result is flagged.
SearchResult elim_run(HammingOracle& oracle, std::size_t n, const ElimOptions& options = {});

/// Recovers the hidden code with exactly n queries by solving the linear
/// system relating responses to inner products. Query rows are 2e_i - 1,
/// except n = 2 which uses [+1, -1] and [+1, +1].
SignVector linear_system_retrieve(HammingOracle& oracle, std::size_t n);

/// The query matrix used by linear_system_retrieve, one code per row.
std::vector<SignVector> linear_system_queries(std::size_t n);

enum class HammingStrategy { elim, linear_system };

std::string to_string(HammingStrategy s);

struct QueryRatioRow {
  std::size_t n = 0;
  double mean_ratio = 0.0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double lower_bound = 0.0;  // 1 / log2(n + 1)
  std::size_t trials = 0;
  std::size_t failures = 0;  // runs that did not recover the hidden code
};

/// Mean query ratio m / n over random hidden codes for each n in
/// [n_min, n_max], paired with a noiseless oracle.
std::vector<QueryRatioRow> query_ratio_bench(HammingStrategy strategy, std::size_t n_min,
                                             std::size_t n_max, std::size_t trials,
                                             std::uint64_t seed);

}  // namespace signquest
