#include <cmath>
#include <random>
#include <stdexcept>

#include "signquest/attacks/attack.hpp"
#include "signquest/models/toy_model.hpp"
#include "signquest/util/rng.hpp"

namespace signquest {

std::vector<double> antithetic_estimate(std::span<const std::vector<double>> directions,
                                        std::span<const double> values, double sigma) {
  if (directions.empty()) throw std::invalid_argument("no sampling directions");
  if (values.size() != 2 * directions.size()) {
    throw std::invalid_argument("need two values per direction");
  }
  const std::size_t n = directions.front().size();
  std::vector<double> g(n, 0.0);
  const double scale = 1.0 / (2.0 * static_cast<double>(directions.size()) * sigma);
  for (std::size_t j = 0; j < directions.size(); ++j) {
    const double w = (values[2 * j] - values[2 * j + 1]) * scale;
    for (std::size_t i = 0; i < n; ++i) g[i] += w * directions[j][i];
  }
  return g;
}

namespace {

enum class StepRule { nes, zo };

AttackRecord estimator_attack(ModelLossOracle& oracle, std::span<const double> x_init, int label,
                              const AttackConfig& config, StepRule rule) {
  const ToyModel& model = oracle.model();
  const std::size_t n = x_init.size();
  if (n != model.input_dim()) throw std::invalid_argument("input dimension mismatch");
  if (config.samples == 0) throw std::invalid_argument("need at least one sample pair");
  if (config.fd_probe <= 0.0) throw std::invalid_argument("finite-difference probe must be positive");

  AttackRecord rec;
  std::vector<double> x(x_init.begin(), x_init.end());
  auto finish = [&](AttackStatus status) {
    rec.status = status;
    rec.success = status == AttackStatus::success;
    rec.final_loss = model.loss(x, label);
    rec.final_input = std::move(x);
    return std::move(rec);
  };
  if (model.predict(x_init) != label) return finish(AttackStatus::misclassified_at_start);

  const PerturbationBall ball{config.norm, {x_init.begin(), x_init.end()}, config.epsilon,
                              model.input_range()};
  const std::uint64_t start = oracle.query_count();
  auto spent = [&] { return oracle.query_count() - start; };
  Rng rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<double> estimate(n, 0.0);
  std::vector<std::vector<double>> dirs(config.samples, std::vector<double>(n));
  std::vector<double> values(2 * config.samples);
  std::vector<double> probe(n);
  for (;;) {
    for (std::size_t j = 0; j < config.samples; ++j) {
      for (double& u : dirs[j]) u = normal(rng);
      for (int side = 0; side < 2; ++side) {
        // A partially sampled step is dropped; its queries stay spent.
        if (spent() >= config.budget) {
          rec.queries = spent();
          return finish(AttackStatus::failure);
        }
        const double sign = side == 0 ? 1.0 : -1.0;
        for (std::size_t i = 0; i < n; ++i) probe[i] = x[i] + sign * config.fd_probe * dirs[j][i];
        ball.project(probe);
        values[2 * j + side] = oracle.evaluate(probe, label);
        rec.loss_trace.push_back(values[2 * j + side]);
        if (config.record_estimates) rec.estimate_trace.push_back(estimate);
      }
    }
    estimate = antithetic_estimate(dirs, values, config.fd_probe);

    if (rule == StepRule::nes && config.norm == Norm::l2) {
      double norm = 0.0;
      for (double v : estimate) norm += v * v;
      norm = std::sqrt(norm);
      if (norm > 0.0) {
        for (std::size_t i = 0; i < n; ++i) x[i] += config.learning_rate * estimate[i] / norm;
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += config.learning_rate * (estimate[i] >= 0.0 ? 1.0 : -1.0);
      }
    }
    ball.project(x);
    if (config.record_estimates && !rec.estimate_trace.empty()) rec.estimate_trace.back() = estimate;
    if (model.predict(x) != label) {
      rec.queries = spent();
      return finish(AttackStatus::success);
    }
  }
}

}  // namespace

AttackRecord nes_attack(ModelLossOracle& oracle, std::span<const double> x_init, int label,
                        const AttackConfig& config) {
  return estimator_attack(oracle, x_init, label, config, StepRule::nes);
}

AttackRecord zosignsgd_attack(ModelLossOracle& oracle, std::span<const double> x_init, int label,
                              const AttackConfig& config) {
  return estimator_attack(oracle, x_init, label, config, StepRule::zo);
}

}  // namespace signquest
