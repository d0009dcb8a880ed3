#include "signquest/models/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "signquest/util/rng.hpp"

namespace signquest {

namespace {
constexpr double kGradientScaleFloor = 1e-6;
}  // namespace

std::vector<double> numerical_gradient(const ToyModel& model, std::span<const double> x, int label,
                                       double h) {
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = model.loss(probe, label);
    probe[i] = x[i] - h;
    const double down = model.loss(probe, label);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

double gradient_check_error(const ToyModel& model, std::span<const double> x, int label, double h) {
  const auto analytic = model.gradient(x, label);
  const auto numeric = numerical_gradient(model, x, label, h);
  double scale = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    scale = std::max({scale, std::abs(analytic[i]), std::abs(numeric[i])});
    worst = std::max(worst, std::abs(analytic[i] - numeric[i]));
  }
  if (worst == 0.0) return 0.0;
  // The floor keeps rounding noise from dominating near stationary points.
  return worst / std::max(scale, kGradientScaleFloor);
}

bool gradient_check(const ToyModel& model, std::span<const double> x, int label, double tolerance) {
  const double err = gradient_check_error(model, x, label);
  return err == 0.0 || err < tolerance;
}

namespace {

double quantile(std::vector<double> sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::vector<MagnitudeHistogram> magnitude_histogram(const ToyModel& model, const Dataset& data,
                                                    const HistogramConfig& config) {
  if (config.bins == 0) throw std::invalid_argument("histogram needs at least one bin");
  const std::size_t count = std::min(config.num_images, data.size());
  const InputRange range = model.input_range();
  std::vector<MagnitudeHistogram> out;
  out.reserve(count);
  for (std::size_t img = 0; img < count; ++img) {
    std::vector<double> x(data.row(img).begin(), data.row(img).end());
    if (config.perturbed && config.epsilon > 0.0) {
      Rng rng(derive_seed(config.seed, {img}));
      std::uniform_real_distribution<double> u(-config.epsilon, config.epsilon);
      for (double& v : x) v = std::clamp(v + u(rng), range.lo, range.hi);
    }
    auto g = model.gradient(x, data.labels[img]);
    for (double& v : g) v = std::abs(v);
    std::sort(g.begin(), g.end());

    MagnitudeHistogram hist;
    hist.image_id = img;
    const double top = g.back();
    hist.bin_edges.resize(config.bins + 1);
    for (std::size_t b = 0; b <= config.bins; ++b) {
      hist.bin_edges[b] = top * static_cast<double>(b) / static_cast<double>(config.bins);
    }
    hist.counts.assign(config.bins, 0);
    for (double v : g) {
      std::size_t b = top > 0.0 ? static_cast<std::size_t>(v / top * static_cast<double>(config.bins)) : 0;
      hist.counts[std::min(b, config.bins - 1)]++;
    }
    hist.median = quantile(g, 0.5);
    hist.iqr = quantile(g, 0.75) - quantile(g, 0.25);
    if (hist.median > 0.0) {
      hist.concentration = hist.iqr / hist.median;
    } else {
      hist.concentration = hist.iqr == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    out.push_back(std::move(hist));
  }
  return out;
}

}  // namespace signquest
