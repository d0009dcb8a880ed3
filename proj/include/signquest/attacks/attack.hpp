#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "signquest/attacks/projection.hpp"
#include "signquest/core/sign_vector.hpp"
#include "signquest/oracles/loss_oracle.hpp"

namespace signquest {

enum class AttackStatus { success, failure, misclassified_at_start };

std::string to_string(AttackStatus status);

struct AttackConfig {
  Norm norm = Norm::linf;
  double epsilon = 0.3;
  std::uint64_t budget = 10000;
  /// NES / ZOSignSGD finite-difference probe, learning rate and number of
  /// antithetic pairs per step.
  double fd_probe = 0.1;
  double learning_rate = 0.1;
  std::size_t samples = 10;
  std::uint64_t seed = 1;
  /// SignHunter starting code; all +1 when absent.
  std::optional<SignVector> init;
  /// Keep the gradient estimate held after every query (needed for the
  /// similarity traces; costs n doubles per query).
  bool record_estimates = false;

  /// Defaults for a norm: epsilon 0.3 / 3, NES and ZOSignSGD settings for
  /// pixel data in [0, 1].
  static AttackConfig defaults(Norm norm);
};

struct AttackRecord {
  AttackStatus status = AttackStatus::failure;
  bool success = false;
  /// Loss queries spent, including base-loss evaluations.
  std::uint64_t queries = 0;
  /// Base-loss evaluations among `queries` (one per SignHunter restart).
  std::uint64_t base_queries = 0;
  /// Loss returned by each query, in order.
  std::vector<double> loss_trace;
  /// Gradient estimate held after each query (when recorded).
  std::vector<std::vector<double>> estimate_trace;
  /// Filled by similarity_traces().
  std::vector<double> hamming_similarity;
  std::vector<double> cosine_similarity;
  std::vector<double> final_input;
  double final_loss = 0.0;
};

/// Black-box attack driven by SignHunter. The sign search runs on
///   g(q) = (L(P(x_o + delta q), y) - L(x_o, y)) / delta
/// with delta the vertex step of the ball. After every query the current
/// iterate P(x_o + delta s) is checked for misclassification. When a search
/// completes, x_o moves to the iterate and the search restarts.
AttackRecord signhunter_attack(ModelLossOracle& oracle, std::span<const double> x_init, int label,
                               const AttackConfig& config);

/// Antithetic Gaussian estimator with sign (l_inf) or normalised (l_2) steps.
AttackRecord nes_attack(ModelLossOracle& oracle, std::span<const double> x_init, int label,
                        const AttackConfig& config);

/// Same estimator as NES, always stepping along its coordinate-wise sign.
AttackRecord zosignsgd_attack(ModelLossOracle& oracle, std::span<const double> x_init, int label,
                              const AttackConfig& config);

/// Antithetic Gaussian gradient estimate from q pairs; `values` holds
/// f(x + sigma u_j), f(x - sigma u_j) interleaved.
std::vector<double> antithetic_estimate(std::span<const std::vector<double>> directions,
                                        std::span<const double> values, double sigma);

// White-box references.

/// x + step * sgn(grad L) clipped to the data range, step as vertex_step().
std::vector<double> fgsm(const ToyModel& model, std::span<const double> x, int label,
                         double epsilon, Norm norm);

enum class KeepMode { top, random };

std::string to_string(KeepMode mode);
KeepMode parse_keep_mode(std::string_view text);

/// FGSM with only k percent of the signs taken from the true gradient
/// (largest-magnitude or random coordinates); the rest are random.
std::vector<double> noisy_fgsm(const ToyModel& model, std::span<const double> x, int label,
                               double epsilon, Norm norm, double k_percent, KeepMode mode,
                               std::uint64_t seed);

/// Sign-gradient ascent with projection. Restart 0 starts at x; later
/// restarts start at a random point of the ball. Returns the first
/// misclassified result, otherwise the one with the highest loss.
std::vector<double> pgd_whitebox(const ToyModel& model, std::span<const double> x, int label,
                                 double epsilon, Norm norm, std::size_t steps, double step_size,
                                 std::size_t restarts, std::uint64_t seed);

/// 1 - hamming(sgn(estimate), sgn(truth)) / n.
double hamming_similarity(std::span<const double> estimate, std::span<const double> truth);
/// Normalised dot product; 0 when either vector vanishes.
double cosine_similarity(std::span<const double> estimate, std::span<const double> truth);

}  // namespace signquest
