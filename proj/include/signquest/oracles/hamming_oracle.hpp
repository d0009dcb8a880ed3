#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "signquest/core/sign_vector.hpp"
#include "signquest/oracles/directional_derivative.hpp"
#include "signquest/util/rng.hpp"

namespace signquest {

/// Answers "how far is q from the hidden code?". Responses of noisy
/// implementations may be fractional.
class HammingOracle {
 public:
  virtual ~HammingOracle() = default;
  virtual double respond(const SignVector& q) = 0;
  virtual std::size_t dimension() const = 0;
  /// Queries charged to this oracle, in its own unit.
  virtual std::uint64_t query_count() const = 0;
};

/// Exact Hamming distance to a hidden code.
class NoiselessHammingOracle final : public HammingOracle {
 public:
  explicit NoiselessHammingOracle(SignVector hidden) : hidden_(std::move(hidden)) {}

  std::size_t respond_exact(const SignVector& q);
  double respond(const SignVector& q) override { return static_cast<double>(respond_exact(q)); }
  std::size_t dimension() const override { return hidden_.size(); }
  std::uint64_t query_count() const override { return queries_; }
  const SignVector& hidden() const noexcept { return hidden_; }

 private:
  SignVector hidden_;
  std::uint64_t queries_ = 0;
};

/// One recovered gradient coordinate.
struct RecoveredCoordinate {
  std::size_t index = 0;
  double magnitude = 0.0;
  int sign = 1;
};

/// Hamming oracle synthesised from directional derivatives.
///
/// The derivative along q is affine in the Hamming distance to sgn(g*), with
/// coefficients that depend on the mean gradient magnitude over the agreeing
/// and disagreeing coordinates. Those means are estimated from a sampled set
/// of coordinates whose magnitude and sign were recovered from pairs of codes
/// that differ in one bit.
class NoisyHammingOracle final : public HammingOracle {
 public:
  /// `reference` is the code u that every recovery pair shares; the pair for
  /// coordinate i is (u, u with bit i flipped). Its derivative is cached after
  /// the first recovery.
  NoisyHammingOracle(DirectionalDerivativeOracle& dd, SignVector reference);

  RecoveredCoordinate recover_coordinate(std::size_t i);

  /// Recovers `count` distinct coordinates drawn uniformly without
  /// replacement. Costs count + 1 directional queries when the reference
  /// derivative is not cached yet.
  void sample_coordinates(std::size_t count, Rng& rng);

  /// Noisy estimate of the Hamming distance from q to sgn(g*). Throws
  /// std::logic_error while no coordinate has been recovered.
  double estimate_hamming(const SignVector& q);

  double respond(const SignVector& q) override { return estimate_hamming(q); }
  std::size_t dimension() const override { return dd_->dimension(); }
  /// Directional-derivative queries spent (sampling plus estimates).
  std::uint64_t query_count() const override { return queries_; }

  const std::vector<RecoveredCoordinate>& samples() const noexcept { return samples_; }

  /// Default sample-set size: floor(n / 4), at least one.
  static std::size_t default_sample_size(std::size_t n);

 private:
  double query(const SignVector& q);

  DirectionalDerivativeOracle* dd_;
  SignVector reference_;
  std::optional<double> reference_derivative_;
  std::vector<RecoveredCoordinate> samples_;
  std::vector<bool> sampled_;
  std::uint64_t queries_ = 0;
};

/// Hamming-distance estimate from a directional derivative and sampled
/// coordinates. Exposed for direct testing of the estimator.
double estimate_hamming_from_samples(std::size_t n, double derivative, const SignVector& q,
                                     const std::vector<RecoveredCoordinate>& samples);

}  // namespace signquest
