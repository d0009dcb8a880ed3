#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "signquest/attacks/attack.hpp"
#include "signquest/contopt/contopt.hpp"
#include "signquest/models/dataset.hpp"

namespace signquest {

// Noisy Hamming oracle quality on a linear loss c^T x.

struct HammingEstimateQuality {
  std::size_t n = 0;
  std::size_t levels = 0;  // m, the number of distinct |c_i| values drawn from
  std::size_t sample_size = 0;
  double max_abs_error = 0.0;
  double mean_abs_error = 0.0;
  std::vector<double> errors;  // estimate - truth for every code, by Gray rank
};

/// Magnitude levels: m evenly spaced values in [0.1, m / n].
std::vector<double> magnitude_levels(std::size_t n, std::size_t m);

/// Draws c_i uniformly from the m levels, samples |D| coordinates
/// (default floor(n/4), at least one) and compares the noisy estimate with
/// the true Hamming distance for all 2^n codes.
HammingEstimateQuality hamming_estimate_quality(std::size_t n, std::size_t m, std::uint64_t seed,
                                                std::size_t sample_size = 0);

// Noisy FGSM keep-k curve.

/// Misclassification rate of noisy_fgsm over the rows of `inputs` for each
/// k (percent). Rows the model already misclassifies are skipped.
std::vector<double> noisy_fgsm_rates(const ToyModel& model, const Dataset& inputs, double epsilon,
                                     Norm norm, const std::vector<double>& ks, KeepMode mode,
                                     std::uint64_t seed);

/// Upper-tail binomial p-value P(X >= hits) for X ~ Bin(trials, 1/2).
double sign_test_p_value(std::size_t hits, std::size_t trials);

/// True when `after` is significantly lower than `before` across paired
/// samples: a one-sided sign test on the non-zero differences at level alpha.
bool significant_decrease(const std::vector<double>& before, const std::vector<double>& after,
                          double alpha = 0.05);

// Continuous optimisation study.

struct ContOptStudy {
  std::size_t n = 0;
  std::size_t trials = 0;
  /// traces[method][trial]; methods are signhunter, nes, zosignsgd.
  std::vector<std::vector<ContOptTrace>> traces;
  std::vector<double> mean_final;  // per method
};

ContOptStudy contopt_study(std::size_t n, std::size_t trials, const ContOptConfig& config,
                           std::size_t jobs);

/// CSV rows (method, n, trial, eval_index, best_loss); eval_index is 1-based.
void write_contopt_csv(const ContOptStudy& study, const std::filesystem::path& path);

}  // namespace signquest
