#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "signquest/models/dataset.hpp"
#include "signquest/models/toy_model.hpp"

namespace signquest {

/// input -> hidden (ReLU) -> classes, softmax cross-entropy on the true label.
class MlpClassifier final : public ToyModel {
 public:
  /// Hidden weights are drawn He-uniform from `seed`; the output layer starts
  /// at zero, so an untrained net predicts class 0 everywhere.
  MlpClassifier(std::size_t input_dim, std::size_t hidden, std::size_t classes,
                std::uint64_t seed, InputRange range = {});

  std::size_t input_dim() const override { return in_; }
  std::size_t num_classes() const override { return out_; }
  std::size_t hidden_dim() const noexcept { return hidden_; }
  double loss(std::span<const double> x, int label) const override;
  std::vector<double> gradient(std::span<const double> x, int label) const override;
  int predict(std::span<const double> x) const override;
  InputRange input_range() const override { return range_; }
  std::string name() const override { return "mlp"; }

  std::vector<double> probabilities(std::span<const double> x) const;

  /// One SGD step on a mini-batch of row indices.
  void sgd_step(const Dataset& data, std::span<const std::size_t> batch, double learning_rate);

  /// Flattened parameters (w1, b1, w2, b2), for determinism checks.
  std::vector<double> parameters() const;

 private:
  struct Activations {
    std::vector<double> pre;     // hidden pre-activations
    std::vector<double> hidden;  // ReLU outputs
    std::vector<double> probs;   // softmax outputs
  };
  Activations forward(std::span<const double> x) const;

  std::size_t in_, hidden_, out_;
  std::vector<double> w1_, b1_, w2_, b2_;  // w1: hidden x in, w2: out x hidden
  InputRange range_;
};

struct TrainConfig {
  std::size_t hidden = 32;
  std::size_t epochs = 100;
  double learning_rate = 0.1;
  std::size_t batch_size = 32;
  std::uint64_t seed = 1;
};

struct TrainedMlp {
  MlpClassifier model;
  double train_accuracy;
};

/// Deterministic mini-batch SGD. Throws std::invalid_argument on an empty dataset.
TrainedMlp train_mlp(const Dataset& data, const TrainConfig& config);

double accuracy(const ToyModel& model, const Dataset& data);

}  // namespace signquest
