#pragma once

#include <functional>
#include <span>
#include <vector>

#include "signquest/core/sign_vector.hpp"
#include "signquest/oracles/loss_oracle.hpp"

namespace signquest {

/// In-place map applied to a probe point before it is queried (e.g. a
/// projection onto the feasible perturbation set).
using Projector = std::function<void(std::span<double>)>;

/// Finite-difference directional derivative along sign vectors:
///
///   D_q = (L(P(x + delta * q), y) - L(x, y)) / delta
///
/// The base loss L(x, y) is queried once at construction and cached, so each
/// directional query costs exactly one loss query.
class DirectionalDerivativeOracle {
 public:
  DirectionalDerivativeOracle(LossOracle& inner, std::vector<double> base_point, int label,
                              double delta, Projector projector = {});

  double derivative(const SignVector& q);

  /// Probe point P(x + delta * q) without querying.
  std::vector<double> probe_point(const SignVector& q) const;

  double base_loss() const noexcept { return base_loss_; }
  double delta() const noexcept { return delta_; }
  int label() const noexcept { return label_; }
  std::size_t dimension() const noexcept { return base_.size(); }
  std::span<const double> base_point() const noexcept { return base_; }
  LossOracle& inner() noexcept { return *inner_; }

  /// Loss at the most recent probe.
  double last_loss() const noexcept { return last_loss_; }

 private:
  LossOracle* inner_;
  std::vector<double> base_;
  int label_;
  double delta_;
  Projector projector_;
  double base_loss_;
  double last_loss_;
};

}  // namespace signquest
