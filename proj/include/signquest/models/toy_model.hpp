#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace signquest {

/// Per-coordinate data range [lo, hi].
struct InputRange {
  double lo = 0.0;
  double hi = 1.0;
};

/// A differentiable target. Black-box attacks only see loss() through a
/// LossOracle; gradient() is white-box access for baselines and metrics.
class ToyModel {
 public:
  virtual ~ToyModel() = default;

  virtual std::size_t input_dim() const = 0;
  virtual std::size_t num_classes() const { return 1; }
  virtual double loss(std::span<const double> x, int label) const = 0;
  virtual std::vector<double> gradient(std::span<const double> x, int label) const = 0;
  virtual int predict(std::span<const double> x) const = 0;
  virtual InputRange input_range() const { return {}; }
  virtual std::string name() const = 0;

 protected:
  void check_input(std::span<const double> x) const;
};

/// loss(x) = c^T x. The label is ignored and predict() is always 0.
class LinearModel final : public ToyModel {
 public:
  explicit LinearModel(std::vector<double> coefficients, InputRange range = {-1.0, 1.0});

  std::size_t input_dim() const override { return c_.size(); }
  double loss(std::span<const double> x, int label) const override;
  std::vector<double> gradient(std::span<const double> x, int label) const override;
  int predict(std::span<const double>) const override { return 0; }
  InputRange input_range() const override { return range_; }
  std::string name() const override { return "linear"; }

  const std::vector<double>& coefficients() const noexcept { return c_; }

 private:
  std::vector<double> c_;
  InputRange range_;
};

/// Two-class linear classifier with logit z = w^T x + b; class 1 iff z >= 0.
///
/// The loss is the true-class margin deficit (-z for class 1, z for class 0),
/// which is affine in x, so finite differences of it are exact.
class LinearBinaryClassifier final : public ToyModel {
 public:
  LinearBinaryClassifier(std::vector<double> weights, double bias, InputRange range = {});

  std::size_t input_dim() const override { return w_.size(); }
  std::size_t num_classes() const override { return 2; }
  double loss(std::span<const double> x, int label) const override;
  std::vector<double> gradient(std::span<const double> x, int label) const override;
  int predict(std::span<const double> x) const override;
  InputRange input_range() const override { return range_; }
  std::string name() const override { return "linear_binary"; }

  double logit(std::span<const double> x) const;
  const std::vector<double>& weights() const noexcept { return w_; }
  double bias() const noexcept { return b_; }

 private:
  std::vector<double> w_;
  double b_;
  InputRange range_;
};

/// loss(x) = x^T Q x for symmetric Q (row-major n x n).
class QuadraticModel final : public ToyModel {
 public:
  QuadraticModel(std::size_t n, std::vector<double> q, InputRange range = {-1.0, 1.0});

  std::size_t input_dim() const override { return n_; }
  double loss(std::span<const double> x, int label) const override;
  std::vector<double> gradient(std::span<const double> x, int label) const override;
  int predict(std::span<const double>) const override { return 0; }
  InputRange input_range() const override { return range_; }
  std::string name() const override { return "quadratic"; }

  double entry(std::size_t i, std::size_t j) const { return q_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<double> q_;
  InputRange range_;
};

/// loss(x) = -(x - x*)^T (x - x*) with x* at the centre of the data range.
/// Used as the tuning testbed for the attacks.
class SyntheticConcaveLoss final : public ToyModel {
 public:
  explicit SyntheticConcaveLoss(std::size_t n, InputRange range = {});

  std::size_t input_dim() const override { return n_; }
  double loss(std::span<const double> x, int label) const override;
  std::vector<double> gradient(std::span<const double> x, int label) const override;
  int predict(std::span<const double>) const override { return 0; }
  InputRange input_range() const override { return range_; }
  std::string name() const override { return "synthetic_concave"; }

  std::vector<double> optimum() const;

 private:
  std::size_t n_;
  InputRange range_;
};

/// A quadratic loss together with the point its gradient is taken at.
struct QuadraticToy {
  QuadraticModel model;
  std::vector<double> point;
};

/// Random symmetric Q with entries in [-1, 1] and x uniform in [-1, 1]^n,
/// redrawn until every |(2Qx)_i| is at least `min_abs_gradient`.
QuadraticToy make_quadratic_toy(std::size_t n, std::uint64_t seed, double min_abs_gradient = 0.05);

/// Diagonal Q with x_i = +-1/2, so |(2Qx)_i| = |Q_ii|; each |Q_ii| is drawn
/// from `magnitudes` and every sign is random.
QuadraticToy make_diagonal_quadratic_toy(std::size_t n, const std::vector<double>& magnitudes,
                                         std::uint64_t seed);

}  // namespace signquest
