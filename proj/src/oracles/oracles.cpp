#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "signquest/models/toy_model.hpp"
#include "signquest/oracles/directional_derivative.hpp"
#include "signquest/oracles/hamming_oracle.hpp"
#include "signquest/oracles/loss_oracle.hpp"

namespace signquest {

double LossOracle::evaluate(std::span<const double> x, int label) {
  if (observer_) observer_(x, label);
  ++queries_;
  return do_evaluate(x, label);
}

double ModelLossOracle::do_evaluate(std::span<const double> x, int label) const {
  return model_->loss(x, label);
}

DirectionalDerivativeOracle::DirectionalDerivativeOracle(LossOracle& inner,
                                                         std::vector<double> base_point, int label,
                                                         double delta, Projector projector)
    : inner_(&inner),
      base_(std::move(base_point)),
      label_(label),
      delta_(delta),
      projector_(std::move(projector)) {
  if (!(delta_ > 0.0)) throw std::invalid_argument("finite-difference probe must be positive");
  if (base_.empty()) throw std::invalid_argument("base point must be non-empty");
  base_loss_ = inner_->evaluate(base_, label_);
  last_loss_ = base_loss_;
}

std::vector<double> DirectionalDerivativeOracle::probe_point(const SignVector& q) const {
  if (q.size() != base_.size()) throw std::invalid_argument("sign vector dimension mismatch");
  std::vector<double> x(base_.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = base_[i] + delta_ * q[i];
  if (projector_) projector_(x);
  return x;
}

double DirectionalDerivativeOracle::derivative(const SignVector& q) {
  const auto x = probe_point(q);
  last_loss_ = inner_->evaluate(x, label_);
  return (last_loss_ - base_loss_) / delta_;
}

std::size_t NoiselessHammingOracle::respond_exact(const SignVector& q) {
  const std::size_t r = hamming_distance(q, hidden_);
  ++queries_;
  return r;
}

NoisyHammingOracle::NoisyHammingOracle(DirectionalDerivativeOracle& dd, SignVector reference)
    : dd_(&dd), reference_(std::move(reference)), sampled_(dd.dimension(), false) {
  if (reference_.size() != dd.dimension()) {
    throw std::invalid_argument("reference code dimension mismatch");
  }
}

double NoisyHammingOracle::query(const SignVector& q) {
  ++queries_;
  return dd_->derivative(q);
}

RecoveredCoordinate NoisyHammingOracle::recover_coordinate(std::size_t i) {
  if (i >= dimension()) throw std::out_of_range("coordinate index out of range");
  if (!reference_derivative_) reference_derivative_ = query(reference_);
  SignVector v = reference_;
  v.flip(i);
  const double du = *reference_derivative_;
  const double dv = query(v);
  // Ties (zero-gradient coordinates) take the second code's bit.
  RecoveredCoordinate rc{i, std::abs(du - dv) / 2.0, du > dv ? reference_[i] : v[i]};
  samples_.push_back(rc);
  sampled_[i] = true;
  return rc;
}

void NoisyHammingOracle::sample_coordinates(std::size_t count, Rng& rng) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < dimension(); ++i) {
    if (!sampled_[i]) pool.push_back(i);
  }
  if (count > pool.size()) throw std::invalid_argument("not enough unsampled coordinates");
  // Partial Fisher-Yates: the first `count` slots become a uniform sample.
  for (std::size_t k = 0; k < count; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, pool.size() - 1);
    std::swap(pool[k], pool[pick(rng)]);
    recover_coordinate(pool[k]);
  }
}

double NoisyHammingOracle::estimate_hamming(const SignVector& q) {
  if (samples_.empty()) {
    throw std::logic_error("noisy Hamming oracle has no recovered coordinates; sample first");
  }
  return estimate_hamming_from_samples(dimension(), query(q), q, samples_);
}

std::size_t NoisyHammingOracle::default_sample_size(std::size_t n) {
  return std::max<std::size_t>(1, n / 4);
}

double estimate_hamming_from_samples(std::size_t n, double derivative, const SignVector& q,
                                     const std::vector<RecoveredCoordinate>& samples) {
  if (samples.empty()) throw std::logic_error("no recovered coordinates");
  double agree_sum = 0.0, disagree_sum = 0.0;
  std::size_t agree = 0, disagree = 0;
  for (const auto& s : samples) {
    if (s.sign == q.at(s.index)) {
      agree_sum += s.magnitude;
      ++agree;
    } else {
      disagree_sum += s.magnitude;
      ++disagree;
    }
  }
  double agree_mean, disagree_mean;
  if (agree == 0 || disagree == 0) {
    agree_mean = disagree_mean = (agree_sum + disagree_sum) / static_cast<double>(samples.size());
  } else {
    agree_mean = agree_sum / static_cast<double>(agree);
    disagree_mean = disagree_sum / static_cast<double>(disagree);
  }
  const double denom = agree_mean + disagree_mean;
  // All sampled magnitudes zero: the derivative carries no distance information.
  if (denom == 0.0) return static_cast<double>(n) / 2.0;
  return (static_cast<double>(n) * agree_mean - derivative) / denom;
}

}  // namespace signquest
