#include "signquest/signsearch/hamming_search.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "signquest/signsearch/signhunter.hpp"
#include "signquest/util/rng.hpp"

namespace signquest {

namespace {

using Mask = std::uint32_t;

SignVector from_mask(Mask m, std::size_t n) {
  SignVector s(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if ((m >> i) & 1U) s.flip(i);
  }
  return s;
}

int distance(Mask a, Mask b) { return std::popcount(a ^ b); }

struct Response {
  Mask query;
  double raw;
};

double mismatch(Mask code, const std::vector<Response>& history) {
  double total = 0.0;
  for (const auto& r : history) total += std::abs(distance(code, r.query) - r.raw);
  return total;
}

Mask best_scoring(const std::vector<Mask>& candidates, const std::vector<Response>& history) {
  Mask best = candidates.front();
  double best_score = mismatch(best, history);
  for (Mask c : candidates) {
    const double s = mismatch(c, history);
    if (s < best_score || (s == best_score && c < best)) {
      best = c;
      best_score = s;
    }
  }
  return best;
}

/// Query minimising the largest response class, then the sum of squared
/// class sizes, then the code itself.
Mask choose_query(const std::vector<Mask>& candidates, std::size_t n, Rng& rng) {
  constexpr std::uint64_t kScoringCap = std::uint64_t{1} << 24;
  const std::uint64_t space = std::uint64_t{1} << n;
  std::vector<Mask> pool;
  if (space * candidates.size() <= kScoringCap) {
    pool.resize(space);
    for (std::uint64_t c = 0; c < space; ++c) pool[c] = static_cast<Mask>(c);
  } else {
    const std::size_t size = std::max<std::uint64_t>(2, kScoringCap / candidates.size());
    std::uniform_int_distribution<std::size_t> pick_candidate(0, candidates.size() - 1);
    std::uniform_int_distribution<std::uint64_t> pick_code(0, space - 1);
    for (std::size_t k = 0; k < size; ++k) {
      pool.push_back(k % 2 == 0 ? candidates[pick_candidate(rng)]
                                : static_cast<Mask>(pick_code(rng)));
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  }

  std::vector<std::uint64_t> classes(n + 1);
  Mask best = pool.front();
  std::uint64_t best_max = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t best_sq = best_max;
  for (Mask q : pool) {
    std::fill(classes.begin(), classes.end(), 0);
    for (Mask c : candidates) ++classes[static_cast<std::size_t>(distance(q, c))];
    std::uint64_t worst = 0, sq = 0;
    for (std::uint64_t k : classes) {
      worst = std::max(worst, k);
      sq += k * k;
    }
    if (worst < best_max || (worst == best_max && sq < best_sq)) {
      best = q;
      best_max = worst;
      best_sq = sq;
    }
  }
  return best;
}

}  // namespace

SearchResult elim_run(HammingOracle& oracle, std::size_t n, const ElimOptions& options) {
  if (n == 0 || n > kMaxElimDimension) {
    throw std::invalid_argument("ELIM supports 1 <= n <= " + std::to_string(kMaxElimDimension));
  }
  if (oracle.dimension() != n) throw std::invalid_argument("oracle dimension mismatch");
  Rng rng(options.seed);
  const std::uint64_t start = oracle.query_count();

  std::vector<Mask> candidates(std::size_t{1} << n);
  for (std::size_t c = 0; c < candidates.size(); ++c) candidates[c] = static_cast<Mask>(c);
  std::vector<Response> history;
  std::vector<TracePoint> trace;
  SearchResult result;
  result.best_value = std::numeric_limits<double>::infinity();

  std::optional<Mask> answer;
  while (!answer) {
    if (candidates.size() == 1) {
      answer = candidates.front();
      break;
    }
    if (oracle.query_count() - start >= options.budget) break;

    const Mask q = choose_query(candidates, n, rng);
    const SignVector code = from_mask(q, n);
    const double raw = oracle.respond(code);
    history.push_back({q, raw});
    result.best_value = std::min(result.best_value, raw);
    TracePoint p{oracle.query_count() - start, std::nullopt, raw};
    if (options.truth != nullptr) p.hamming_to_truth = hamming_distance(code, *options.truth);
    trace.push_back(p);

    const auto r = static_cast<int>(std::clamp<long>(std::lround(raw), 0, static_cast<long>(n)));
    if (r == 0) {
      answer = q;
      break;
    }
    std::vector<Mask> kept;
    for (Mask c : candidates) {
      if (distance(q, c) == r) kept.push_back(c);
    }
    if (kept.empty()) {
      result.flagged = true;
      answer = best_scoring(candidates, history);
      break;
    }
    candidates = std::move(kept);
  }
  if (!answer) answer = best_scoring(candidates, history);

  result.estimate = from_mask(*answer, n);
  result.queries = oracle.query_count() - start;
  result.trace = std::move(trace);
  return result;
}

std::vector<SignVector> linear_system_queries(std::size_t n) {
  if (n == 0) throw std::invalid_argument("dimension must be positive");
  if (n == 2) return {SignVector{+1, -1}, SignVector{+1, +1}};
  std::vector<SignVector> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SignVector row(n, -1);
    row.flip(i);
    rows.push_back(std::move(row));
  }
  return rows;
}

SignVector linear_system_retrieve(HammingOracle& oracle, std::size_t n) {
  if (oracle.dimension() != n) throw std::invalid_argument("oracle dimension mismatch");
  const auto rows = linear_system_queries(n);
  Eigen::MatrixXd q(n, n);
  Eigen::VectorXd rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) q(i, j) = rows[i][j];
    // q_i . q* = n - 2 r_i
    rhs(i) = static_cast<double>(n) - 2.0 * oracle.respond(rows[i]);
  }
  const Eigen::VectorXd x = q.partialPivLu().solve(rhs);
  std::vector<int> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mag = std::abs(x(i));
    if (!(mag >= 0.99 && mag <= 1.01)) {
      throw std::runtime_error("linear-system solution entry " + std::to_string(i) +
                               " is not +-1; responses are inconsistent");
    }
    values[i] = x(i) > 0 ? 1 : -1;
  }
  return SignVector::from_values(values);
}

std::string to_string(HammingStrategy s) {
  switch (s) {
    case HammingStrategy::elim: return "elim";
    case HammingStrategy::linear_system: return "linear_system";
  }
  return "unknown";
}

std::vector<QueryRatioRow> query_ratio_bench(HammingStrategy strategy, std::size_t n_min,
                                             std::size_t n_max, std::size_t trials,
                                             std::uint64_t seed) {
  if (n_min == 0 || n_min > n_max) throw std::invalid_argument("invalid dimension range");
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  std::vector<QueryRatioRow> rows;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    QueryRatioRow row;
    row.n = n;
    row.trials = trials;
    row.lower_bound = 1.0 / std::log2(static_cast<double>(n) + 1.0);
    row.min_ratio = std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
      const SignVector hidden = random_sign_vector(n, derive_seed(seed, {n, trial}));
      NoiselessHammingOracle oracle(hidden);
      SignVector found(n);
      if (strategy == HammingStrategy::elim) {
        ElimOptions opts;
        opts.seed = derive_seed(seed, {n, trial, 1});
        found = elim_run(oracle, n, opts).estimate;
      } else {
        found = linear_system_retrieve(oracle, n);
      }
      if (found != hidden) ++row.failures;
      const double ratio = static_cast<double>(oracle.query_count()) / static_cast<double>(n);
      total += ratio;
      row.min_ratio = std::min(row.min_ratio, ratio);
      row.max_ratio = std::max(row.max_ratio, ratio);
    }
    row.mean_ratio = total / static_cast<double>(trials);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace signquest
