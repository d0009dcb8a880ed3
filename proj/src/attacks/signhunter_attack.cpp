#include <stdexcept>

#include "signquest/attacks/attack.hpp"
#include "signquest/models/toy_model.hpp"
#include "signquest/oracles/directional_derivative.hpp"
#include "signquest/signsearch/signhunter.hpp"

namespace signquest {

std::string to_string(AttackStatus status) {
  switch (status) {
    case AttackStatus::success: return "success";
    case AttackStatus::failure: return "failure";
    case AttackStatus::misclassified_at_start: return "misclassified_at_start";
  }
  return "unknown";
}

AttackConfig AttackConfig::defaults(Norm norm) {
  AttackConfig c;
  c.norm = norm;
  if (norm == Norm::linf) {
    c.epsilon = 0.3;
    c.fd_probe = 0.1;
    c.learning_rate = 0.1;
    c.samples = 10;
  } else {
    c.epsilon = 3.0;
    c.fd_probe = 0.1;
    c.learning_rate = 1.0;
    c.samples = 20;
  }
  return c;
}

AttackRecord signhunter_attack(ModelLossOracle& oracle, std::span<const double> x_init, int label,
                               const AttackConfig& config) {
  const ToyModel& model = oracle.model();
  const std::size_t n = x_init.size();
  if (n != model.input_dim()) throw std::invalid_argument("input dimension mismatch");
  if (config.init && config.init->size() != n) {
    throw std::invalid_argument("initial code has the wrong dimension");
  }

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
  if (config.epsilon <= 0.0) return finish(AttackStatus::failure);

  const PerturbationBall ball{config.norm, {x_init.begin(), x_init.end()}, config.epsilon,
                              model.input_range()};
  const Projector projector = [&ball](std::span<double> p) { ball.project(p); };
  const double delta = vertex_step(config.norm, config.epsilon, n);
  const SignVector fresh = config.init ? *config.init : SignVector(n);
  const std::uint64_t start = oracle.query_count();
  auto spent = [&] { return oracle.query_count() - start; };
  auto record_estimate = [&](const SignVector& s) {
    if (config.record_estimates) rec.estimate_trace.push_back(s.to_doubles());
  };

  std::vector<double> x_o = x;
  SignVector held = fresh;
  while (spent() < config.budget) {
    DirectionalDerivativeOracle dd(oracle, x_o, label, delta, projector);
    ++rec.base_queries;
    rec.loss_trace.push_back(dd.base_loss());
    record_estimate(held);

    SignHunter hunter(fresh);
    while (!hunter.is_done() && spent() < config.budget) {
      const double g = dd.derivative(hunter.propose());
      rec.loss_trace.push_back(dd.last_loss());
      hunter.observe(g);
      held = hunter.estimate();
      record_estimate(held);
      x = dd.probe_point(held);
      if (model.predict(x) != label) {
        rec.queries = spent();
        return finish(AttackStatus::success);
      }
    }
    x_o = x;
  }
  rec.queries = spent();
  return finish(AttackStatus::failure);
}

}  // namespace signquest
