#pragma once

#include <cstdint>
#include <functional>
#include <span>

namespace signquest {

class ToyModel;

/// Counted scalar-loss query interface.
///
/// Every call to evaluate() increments query_count() by exactly one. An
/// optional observer sees each queried point before evaluation, which is how
/// campaign runs audit that candidates stay feasible.
class LossOracle {
 public:
  using Observer = std::function<void(std::span<const double> x, int label)>;

  virtual ~LossOracle() = default;

  double evaluate(std::span<const double> x, int label);

  std::uint64_t query_count() const noexcept { return queries_; }
  void set_observer(Observer observer) { observer_ = std::move(observer); }

 protected:
  virtual double do_evaluate(std::span<const double> x, int label) const = 0;

 private:
  std::uint64_t queries_ = 0;
  Observer observer_;
};

/// Loss oracle backed by a model's loss function.
class ModelLossOracle final : public LossOracle {
 public:
  explicit ModelLossOracle(const ToyModel& model) : model_(&model) {}
  const ToyModel& model() const noexcept { return *model_; }

 protected:
  double do_evaluate(std::span<const double> x, int label) const override;

 private:
  const ToyModel* model_;
};

/// Loss oracle over an arbitrary label-independent objective.
class FunctionLossOracle final : public LossOracle {
 public:
  using Function = std::function<double(std::span<const double>)>;
  explicit FunctionLossOracle(Function f) : f_(std::move(f)) {}

 protected:
  double do_evaluate(std::span<const double> x, int) const override { return f_(x); }

 private:
  Function f_;
};

}  // namespace signquest
