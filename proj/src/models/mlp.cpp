#include "signquest/models/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "signquest/util/rng.hpp"

namespace signquest {

MlpClassifier::MlpClassifier(std::size_t input_dim, std::size_t hidden, std::size_t classes,
                             std::uint64_t seed, InputRange range)
    : in_(input_dim),
      hidden_(hidden),
      out_(classes),
      w1_(hidden * input_dim),
      b1_(hidden, 0.0),
      w2_(classes * hidden, 0.0),
      b2_(classes, 0.0),
      range_(range) {
  if (in_ == 0 || hidden_ == 0 || out_ < 2) throw std::invalid_argument("invalid MLP shape");
  Rng rng(seed);
  const double limit = std::sqrt(6.0 / static_cast<double>(in_));
  std::uniform_real_distribution<double> init(-limit, limit);
  for (double& w : w1_) w = init(rng);
}

MlpClassifier::Activations MlpClassifier::forward(std::span<const double> x) const {
  check_input(x);
  Activations a{std::vector<double>(hidden_), std::vector<double>(hidden_), std::vector<double>(out_)};
  for (std::size_t h = 0; h < hidden_; ++h) {
    double z = b1_[h];
    const double* row = &w1_[h * in_];
    for (std::size_t i = 0; i < in_; ++i) z += row[i] * x[i];
    a.pre[h] = z;
    a.hidden[h] = z > 0.0 ? z : 0.0;
  }
  double max_logit = -INFINITY;
  for (std::size_t k = 0; k < out_; ++k) {
    double z = b2_[k];
    const double* row = &w2_[k * hidden_];
    for (std::size_t h = 0; h < hidden_; ++h) z += row[h] * a.hidden[h];
    a.probs[k] = z;
    max_logit = std::max(max_logit, z);
  }
  double total = 0.0;
  for (double& p : a.probs) {
    p = std::exp(p - max_logit);
    total += p;
  }
  for (double& p : a.probs) p /= total;
  return a;
}

std::vector<double> MlpClassifier::probabilities(std::span<const double> x) const {
  return forward(x).probs;
}

double MlpClassifier::loss(std::span<const double> x, int label) const {
  const auto a = forward(x);
  // Clamp keeps the loss finite when a probability underflows.
  return -std::log(std::max(a.probs.at(static_cast<std::size_t>(label)), 1e-300));
}

int MlpClassifier::predict(std::span<const double> x) const {
  const auto a = forward(x);
  return static_cast<int>(std::max_element(a.probs.begin(), a.probs.end()) - a.probs.begin());
}

std::vector<double> MlpClassifier::gradient(std::span<const double> x, int label) const {
  const auto a = forward(x);
  std::vector<double> dlogits = a.probs;
  dlogits.at(static_cast<std::size_t>(label)) -= 1.0;

  std::vector<double> dpre(hidden_, 0.0);
  for (std::size_t h = 0; h < hidden_; ++h) {
    if (a.pre[h] <= 0.0) continue;
    double acc = 0.0;
    for (std::size_t k = 0; k < out_; ++k) acc += w2_[k * hidden_ + h] * dlogits[k];
    dpre[h] = acc;
  }
  std::vector<double> dx(in_, 0.0);
  for (std::size_t h = 0; h < hidden_; ++h) {
    if (dpre[h] == 0.0) continue;
    const double* row = &w1_[h * in_];
    for (std::size_t i = 0; i < in_; ++i) dx[i] += row[i] * dpre[h];
  }
  return dx;
}

void MlpClassifier::sgd_step(const Dataset& data, std::span<const std::size_t> batch,
                             double learning_rate) {
  std::vector<double> gw1(w1_.size(), 0.0), gb1(b1_.size(), 0.0);
  std::vector<double> gw2(w2_.size(), 0.0), gb2(b2_.size(), 0.0);
  for (std::size_t idx : batch) {
    const auto x = data.row(idx);
    const auto a = forward(x);
    std::vector<double> dlogits = a.probs;
    dlogits[static_cast<std::size_t>(data.labels[idx])] -= 1.0;
    for (std::size_t k = 0; k < out_; ++k) {
      gb2[k] += dlogits[k];
      for (std::size_t h = 0; h < hidden_; ++h) gw2[k * hidden_ + h] += dlogits[k] * a.hidden[h];
    }
    for (std::size_t h = 0; h < hidden_; ++h) {
      if (a.pre[h] <= 0.0) continue;
      double dpre = 0.0;
      for (std::size_t k = 0; k < out_; ++k) dpre += w2_[k * hidden_ + h] * dlogits[k];
      gb1[h] += dpre;
      for (std::size_t i = 0; i < in_; ++i) gw1[h * in_ + i] += dpre * x[i];
    }
  }
  const double scale = learning_rate / static_cast<double>(batch.size());
  for (std::size_t i = 0; i < w1_.size(); ++i) w1_[i] -= scale * gw1[i];
  for (std::size_t i = 0; i < b1_.size(); ++i) b1_[i] -= scale * gb1[i];
  for (std::size_t i = 0; i < w2_.size(); ++i) w2_[i] -= scale * gw2[i];
  for (std::size_t i = 0; i < b2_.size(); ++i) b2_[i] -= scale * gb2[i];
}

std::vector<double> MlpClassifier::parameters() const {
  std::vector<double> p;
  p.reserve(w1_.size() + b1_.size() + w2_.size() + b2_.size());
  p.insert(p.end(), w1_.begin(), w1_.end());
  p.insert(p.end(), b1_.begin(), b1_.end());
  p.insert(p.end(), w2_.begin(), w2_.end());
  p.insert(p.end(), b2_.begin(), b2_.end());
  return p;
}

TrainedMlp train_mlp(const Dataset& data, const TrainConfig& config) {
  if (data.empty()) throw std::invalid_argument("cannot train on an empty dataset");
  if (config.batch_size == 0) throw std::invalid_argument("batch size must be positive");
  const std::size_t classes = std::max<std::size_t>(data.num_classes, 2);
  MlpClassifier model(data.dim, config.hidden, classes, derive_seed(config.seed, {0}), data.range);

  Rng rng(derive_seed(config.seed, {1}));
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t len = std::min(config.batch_size, order.size() - start);
      model.sgd_step(data, std::span<const std::size_t>(order).subspan(start, len),
                     config.learning_rate);
    }
  }
  const double acc = accuracy(model, data);
  return {std::move(model), acc};
}

double accuracy(const ToyModel& model, const Dataset& data) {
  if (data.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) correct += model.predict(data.row(i)) == data.labels[i];
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace signquest
