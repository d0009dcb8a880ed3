#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "signquest/models/toy_model.hpp"
#include "signquest/util/rng.hpp"

namespace signquest {

void ToyModel::check_input(std::span<const double> x) const {
  if (x.size() != input_dim()) {
    throw std::invalid_argument(name() + ": expected input of dimension " +
                                std::to_string(input_dim()) + ", got " + std::to_string(x.size()));
  }
}

LinearModel::LinearModel(std::vector<double> coefficients, InputRange range)
    : c_(std::move(coefficients)), range_(range) {
  if (c_.empty()) throw std::invalid_argument("linear model needs at least one coefficient");
}

double LinearModel::loss(std::span<const double> x, int) const {
  check_input(x);
  double acc = 0.0;
  for (std::size_t i = 0; i < c_.size(); ++i) acc += c_[i] * x[i];
  return acc;
}

std::vector<double> LinearModel::gradient(std::span<const double> x, int) const {
  check_input(x);
  return c_;
}

LinearBinaryClassifier::LinearBinaryClassifier(std::vector<double> weights, double bias,
                                               InputRange range)
    : w_(std::move(weights)), b_(bias), range_(range) {
  if (w_.empty()) throw std::invalid_argument("linear classifier needs at least one weight");
}

double LinearBinaryClassifier::logit(std::span<const double> x) const {
  check_input(x);
  double z = b_;
  for (std::size_t i = 0; i < w_.size(); ++i) z += w_[i] * x[i];
  return z;
}

double LinearBinaryClassifier::loss(std::span<const double> x, int label) const {
  const double z = logit(x);
  return label == 1 ? -z : z;
}

std::vector<double> LinearBinaryClassifier::gradient(std::span<const double> x, int label) const {
  check_input(x);
  std::vector<double> g = w_;
  if (label == 1) {
    for (double& v : g) v = -v;
  }
  return g;
}

int LinearBinaryClassifier::predict(std::span<const double> x) const {
  return logit(x) >= 0.0 ? 1 : 0;
}

QuadraticModel::QuadraticModel(std::size_t n, std::vector<double> q, InputRange range)
    : n_(n), q_(std::move(q)), range_(range) {
  if (n_ == 0 || q_.size() != n_ * n_) throw std::invalid_argument("Q must be a non-empty n x n matrix");
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (q_[i * n_ + j] != q_[j * n_ + i]) throw std::invalid_argument("Q must be symmetric");
    }
  }
}

double QuadraticModel::loss(std::span<const double> x, int) const {
  check_input(x);
  double acc = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n_; ++j) row += q_[i * n_ + j] * x[j];
    acc += x[i] * row;
  }
  return acc;
}

std::vector<double> QuadraticModel::gradient(std::span<const double> x, int) const {
  check_input(x);
  std::vector<double> g(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) g[i] += 2.0 * q_[i * n_ + j] * x[j];
  }
  return g;
}

SyntheticConcaveLoss::SyntheticConcaveLoss(std::size_t n, InputRange range) : n_(n), range_(range) {
  if (n_ == 0) throw std::invalid_argument("dimension must be positive");
}

std::vector<double> SyntheticConcaveLoss::optimum() const {
  return std::vector<double>(n_, 0.5 * (range_.lo + range_.hi));
}

double SyntheticConcaveLoss::loss(std::span<const double> x, int) const {
  check_input(x);
  const double centre = 0.5 * (range_.lo + range_.hi);
  double acc = 0.0;
  for (double v : x) acc += (v - centre) * (v - centre);
  return -acc;
}

std::vector<double> SyntheticConcaveLoss::gradient(std::span<const double> x, int) const {
  check_input(x);
  const double centre = 0.5 * (range_.lo + range_.hi);
  std::vector<double> g(n_);
  for (std::size_t i = 0; i < n_; ++i) g[i] = -2.0 * (x[i] - centre);
  return g;
}

}  // namespace signquest

namespace signquest {

QuadraticToy make_quadratic_toy(std::size_t n, std::uint64_t seed, double min_abs_gradient) {
  if (n == 0) throw std::invalid_argument("dimension must be positive");
  Rng rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    std::vector<double> q(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) q[i * n + j] = q[j * n + i] = u(rng);
    }
    std::vector<double> x(n);
    for (double& v : x) v = u(rng);
    QuadraticModel model(n, std::move(q));
    const auto g = model.gradient(x, 0);
    if (std::all_of(g.begin(), g.end(), [&](double v) { return std::abs(v) >= min_abs_gradient; })) {
      return {std::move(model), std::move(x)};
    }
  }
}

QuadraticToy make_diagonal_quadratic_toy(std::size_t n, const std::vector<double>& magnitudes,
                                         std::uint64_t seed) {
  if (n == 0 || magnitudes.empty()) throw std::invalid_argument("need n > 0 and magnitudes");
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, magnitudes.size() - 1);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> q(n * n, 0.0);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    q[i * n + i] = (coin(rng) ? 1.0 : -1.0) * magnitudes[pick(rng)];
    x[i] = coin(rng) ? 0.5 : -0.5;
  }
  return {QuadraticModel(n, std::move(q)), std::move(x)};
}

}  // namespace signquest
