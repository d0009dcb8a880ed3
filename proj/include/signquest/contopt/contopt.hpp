#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace signquest {

/// Black-box minimisation problem.
struct ContOptProblem {
  std::function<double(std::span<const double>)> objective;
  std::size_t n = 0;
  std::vector<double> optimum;
  std::vector<double> start;

  /// f(x) = ||x - x*||^2 with x* ~ U[0, 1]^n and x0 = 1_n.
  static ContOptProblem quadratic(std::size_t n, std::uint64_t seed);
  /// Same family with explicit optimum and start.
  static ContOptProblem quadratic(std::vector<double> optimum, std::vector<double> start);
};

struct ContOptConfig {
  double step_size = 0.01;
  double fd_probe = 0.001;
  std::uint64_t eval_budget = 3000;
  std::uint64_t seed = 1;
  /// Antithetic pairs per NES / ZOSignSGD step.
  std::size_t samples = 10;
};

struct ContOptTrace {
  std::string method;
  /// Best objective value among the first k + 1 evaluations.
  std::vector<double> best;
  /// Objective value returned by each evaluation.
  std::vector<double> value;
  std::uint64_t evaluations = 0;
  double final_best() const { return best.empty() ? 0.0 : best.back(); }
};

/// SignHunter as a descent method. Codes are scored by the finite difference
/// -(f(x + probe q) - f(x)) / probe at the current x. Every step re-scores the
/// retained code at the current x, scores the flipped candidate, keeps the
/// better one and moves x by step_size along it: two evaluations per step.
/// A finished search restarts from the all +1 code.
ContOptTrace signhunter_minimize(const ContOptProblem& problem, const ContOptConfig& config);

enum class Baseline { nes, zosignsgd };

std::string to_string(Baseline b);
Baseline parse_baseline(std::string_view text);

/// NES: x <- x - step * g_hat; ZOSignSGD: x <- x - step * sgn(g_hat), with
/// g_hat the antithetic Gaussian estimate. An incomplete final step is
/// dropped after its evaluations are spent.
ContOptTrace baseline_minimize(const ContOptProblem& problem, Baseline algorithm,
                               const ContOptConfig& config);

}  // namespace signquest
