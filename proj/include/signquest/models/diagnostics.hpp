#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "signquest/models/dataset.hpp"
#include "signquest/models/toy_model.hpp"

namespace signquest {

/// Central-difference gradient of the model loss with step h.
std::vector<double> numerical_gradient(const ToyModel& model, std::span<const double> x, int label,
                                       double h = 1e-5);

/// max_i |analytic_i - numeric_i| / max(|analytic|_inf, |numeric|_inf, 1e-6).
/// Zero when both gradients agree exactly.
double gradient_check_error(const ToyModel& model, std::span<const double> x, int label,
                            double h = 1e-5);

/// True iff gradient_check_error(...) < tolerance, or the analytic and
/// numeric gradients agree exactly.
bool gradient_check(const ToyModel& model, std::span<const double> x, int label, double tolerance);

struct MagnitudeHistogram {
  std::size_t image_id = 0;
  std::vector<double> bin_edges;  // bins + 1 edges over [0, max magnitude]
  std::vector<std::size_t> counts;
  double median = 0.0;
  double iqr = 0.0;
  /// iqr / median; 0 when both vanish, +inf when only the median does.
  double concentration = 0.0;
};

struct HistogramConfig {
  std::size_t num_images = 10;
  bool perturbed = false;
  double epsilon = 0.0;
  std::size_t bins = 20;
  std::uint64_t seed = 1;
};

/// Histogram of |dL/dx_i| per image, optionally at a point drawn uniformly
/// from the l_inf ball of radius epsilon around the image (clipped to range).
std::vector<MagnitudeHistogram> magnitude_histogram(const ToyModel& model, const Dataset& data,
                                                    const HistogramConfig& config);

}  // namespace signquest
