#include "signquest/contopt/contopt.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>

#include <boost/random/normal_distribution.hpp>

#include "signquest/signsearch/signhunter.hpp"
#include "signquest/util/rng.hpp"

namespace signquest {

ContOptProblem ContOptProblem::quadratic(std::vector<double> optimum, std::vector<double> start) {
  if (optimum.empty() || optimum.size() != start.size()) {
    throw std::invalid_argument("optimum and start must be non-empty and of equal size");
  }
  ContOptProblem p;
  p.n = optimum.size();
  p.optimum = std::move(optimum);
  p.start = std::move(start);
  p.objective = [opt = p.optimum](std::span<const double> x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - opt[i];
      acc += d * d;
    }
    return acc;
  };
  return p;
}

ContOptProblem ContOptProblem::quadratic(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> opt(n);
  for (double& v : opt) v = u(rng);
  return quadratic(std::move(opt), std::vector<double>(n, 1.0));
}

namespace {

class Recorder {
 public:
  Recorder(const ContOptProblem& p, std::string method, std::uint64_t budget)
      : problem_(&p), budget_(budget) {
    trace_.method = std::move(method);
    trace_.best.reserve(budget);
    trace_.value.reserve(budget);
  }

  bool exhausted() const noexcept { return trace_.evaluations >= budget_; }

  double operator()(std::span<const double> x) {
    const double v = problem_->objective(x);
    best_ = std::min(best_, v);
    trace_.value.push_back(v);
    trace_.best.push_back(best_);
    ++trace_.evaluations;
    return v;
  }

  ContOptTrace take() { return std::move(trace_); }

 private:
  const ContOptProblem* problem_;
  std::uint64_t budget_;
  double best_ = std::numeric_limits<double>::infinity();
  ContOptTrace trace_;
};

void check(const ContOptProblem& problem, const ContOptConfig& config) {
  if (!problem.objective || problem.n == 0 || problem.start.size() != problem.n) {
    throw std::invalid_argument("malformed optimisation problem");
  }
  if (config.fd_probe <= 0.0) throw std::invalid_argument("finite-difference probe must be positive");
}

}  // namespace

ContOptTrace signhunter_minimize(const ContOptProblem& problem, const ContOptConfig& config) {
  check(problem, config);
  const std::size_t n = problem.n;
  Recorder eval(problem, "signhunter", config.eval_budget);
  std::vector<double> x = problem.start;
  std::vector<double> probe(n);

  // Each step compares the flipped code with the current one at the current
  // x. f(x) is common to both finite differences, so it cancels and the
  // scores reduce to -f(x + probe q) / probe.
  auto probe_at = [&](const SignVector& q) {
    for (std::size_t i = 0; i < n; ++i) probe[i] = x[i] + config.fd_probe * q[i];
    return -eval(probe) / config.fd_probe;
  };
  SignHunter hunter{SignVector(n)};
  while (!eval.exhausted()) {
    if (hunter.is_done()) hunter = SignHunter{SignVector(n)};
    hunter.anchor(probe_at(hunter.estimate()));
    if (eval.exhausted()) break;
    hunter.observe(probe_at(hunter.propose()));
    const SignVector& kept = hunter.estimate();
    for (std::size_t i = 0; i < n; ++i) x[i] += config.step_size * kept[i];
  }
  return eval.take();
}

std::string to_string(Baseline b) { return b == Baseline::nes ? "nes" : "zosignsgd"; }

Baseline parse_baseline(std::string_view text) {
  if (text == "nes") return Baseline::nes;
  if (text == "zo" || text == "zosignsgd") return Baseline::zosignsgd;
  throw std::invalid_argument("unknown baseline '" + std::string(text) + "' (expected nes or zosignsgd)");
}

ContOptTrace baseline_minimize(const ContOptProblem& problem, Baseline algorithm,
                               const ContOptConfig& config) {
  check(problem, config);
  if (config.samples == 0) throw std::invalid_argument("need at least one sample pair");
  const std::size_t n = problem.n;
  const std::size_t q = config.samples;
  Recorder eval(problem, to_string(algorithm), config.eval_budget);
  Rng rng(config.seed);
  // Ziggurat sampler; the polar method dominates the run time at n = 1e5.
  boost::random::normal_distribution<double> normal(0.0, 1.0);

  std::vector<double> x = problem.start;
  std::vector<double> grad(n);
  std::vector<double> u(n), plus(n), minus(n);
  const double sigma = config.fd_probe;
  while (!eval.exhausted()) {
    std::fill(grad.begin(), grad.end(), 0.0);
    bool complete = true;
    for (std::size_t j = 0; j < q && complete; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        u[i] = normal(rng);
        plus[i] = x[i] + sigma * u[i];
        minus[i] = x[i] - sigma * u[i];
      }
      const double fp = eval(plus);
      if (eval.exhausted()) {
        complete = false;
        break;
      }
      const double fm = eval(minus);
      const double w = (fp - fm) / (2.0 * static_cast<double>(q) * sigma);
      for (std::size_t i = 0; i < n; ++i) grad[i] += w * u[i];
      if (eval.exhausted() && j + 1 < q) complete = false;
    }
    if (!complete) break;
    if (algorithm == Baseline::nes) {
      for (std::size_t i = 0; i < n; ++i) x[i] -= config.step_size * grad[i];
    } else {
      for (std::size_t i = 0; i < n; ++i) x[i] -= config.step_size * (grad[i] >= 0.0 ? 1.0 : -1.0);
    }
  }
  return eval.take();
}

}  // namespace signquest
