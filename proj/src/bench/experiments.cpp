#include "signquest/bench/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/os.h>

#include "signquest/core/gray_code.hpp"
#include "signquest/models/toy_model.hpp"
#include "signquest/oracles/directional_derivative.hpp"
#include "signquest/oracles/hamming_oracle.hpp"
#include "signquest/signsearch/signhunter.hpp"
#include "signquest/util/parallel.hpp"
#include "signquest/util/rng.hpp"

namespace signquest {

std::vector<double> magnitude_levels(std::size_t n, std::size_t m) {
  if (n == 0 || m == 0 || m > n) throw std::invalid_argument("need 1 <= m <= n");
  const double hi = static_cast<double>(m) / static_cast<double>(n);
  std::vector<double> levels(m);
  for (std::size_t k = 0; k < m; ++k) {
    levels[k] = m == 1 ? 0.1 : 0.1 + (hi - 0.1) * static_cast<double>(k) / static_cast<double>(m - 1);
  }
  return levels;
}

HammingEstimateQuality hamming_estimate_quality(std::size_t n, std::size_t m, std::uint64_t seed,
                                                std::size_t sample_size) {
  if (n > 20) throw std::invalid_argument("exhaustive evaluation needs n <= 20");
  const auto levels = magnitude_levels(n, m);
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  std::vector<double> c(n);
  for (double& v : c) v = levels[pick(rng)];

  const LinearModel model(c);
  ModelLossOracle loss(model);
  DirectionalDerivativeOracle dd(loss, std::vector<double>(n, 0.0), 0, 1.0);
  NoisyHammingOracle oracle(dd, random_sign_vector(n, rng()));
  HammingEstimateQuality q;
  q.n = n;
  q.levels = m;
  q.sample_size = sample_size == 0 ? NoisyHammingOracle::default_sample_size(n) : sample_size;
  oracle.sample_coordinates(q.sample_size, rng);

  const SignVector truth = SignVector::sign_of(c);
  const std::uint64_t codes = std::uint64_t{1} << n;
  q.errors.resize(codes);
  double total = 0.0;
  for (std::uint64_t r = 0; r < codes; ++r) {
    const SignVector code = gray_code_at(n, r);
    const double err = oracle.estimate_hamming(code) - static_cast<double>(hamming_distance(code, truth));
    q.errors[r] = err;
    q.max_abs_error = std::max(q.max_abs_error, std::abs(err));
    total += std::abs(err);
  }
  q.mean_abs_error = total / static_cast<double>(codes);
  return q;
}

std::vector<double> noisy_fgsm_rates(const ToyModel& model, const Dataset& inputs, double epsilon,
                                     Norm norm, const std::vector<double>& ks, KeepMode mode,
                                     std::uint64_t seed) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (model.predict(inputs.row(i)) == inputs.labels[i]) rows.push_back(i);
  }
  std::vector<double> rates;
  for (std::size_t k = 0; k < ks.size(); ++k) {
    std::size_t fooled = 0;
    for (std::size_t i : rows) {
      const auto adv = noisy_fgsm(model, inputs.row(i), inputs.labels[i], epsilon, norm, ks[k], mode,
                                  derive_seed(seed, {k, i}));
      fooled += model.predict(adv) != inputs.labels[i];
    }
    rates.push_back(rows.empty() ? 0.0 : static_cast<double>(fooled) / static_cast<double>(rows.size()));
  }
  return rates;
}

double sign_test_p_value(std::size_t hits, std::size_t trials) {
  if (hits > trials) throw std::invalid_argument("hits exceed trials");
  double p = 0.0;
  for (std::size_t k = hits; k <= trials; ++k) {
    p += std::exp(std::lgamma(trials + 1.0) - std::lgamma(k + 1.0) - std::lgamma(trials - k + 1.0) -
                  static_cast<double>(trials) * std::log(2.0));
  }
  return std::min(p, 1.0);
}

bool significant_decrease(const std::vector<double>& before, const std::vector<double>& after,
                          double alpha) {
  if (before.size() != after.size()) throw std::invalid_argument("paired samples differ in size");
  std::size_t down = 0, nonzero = 0;
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (after[i] == before[i]) continue;
    ++nonzero;
    down += after[i] < before[i];
  }
  return nonzero > 0 && sign_test_p_value(down, nonzero) < alpha;
}

ContOptStudy contopt_study(std::size_t n, std::size_t trials, const ContOptConfig& config,
                           std::size_t jobs) {
  ContOptStudy study;
  study.n = n;
  study.trials = trials;
  study.traces.assign(3, std::vector<ContOptTrace>(trials));
  parallel_for(3 * trials, jobs, [&](std::size_t task) {
    const std::size_t method = task / trials;
    const std::size_t trial = task % trials;
    const auto problem = ContOptProblem::quadratic(n, derive_seed(config.seed, {n, trial}));
    ContOptConfig c = config;
    c.seed = derive_seed(config.seed, {n, trial, method});
    if (method == 0) {
      study.traces[method][trial] = signhunter_minimize(problem, c);
    } else {
      study.traces[method][trial] =
          baseline_minimize(problem, method == 1 ? Baseline::nes : Baseline::zosignsgd, c);
    }
  });
  for (const auto& per_method : study.traces) {
    double total = 0.0;
    for (const auto& t : per_method) total += t.final_best();
    study.mean_final.push_back(trials == 0 ? 0.0 : total / static_cast<double>(trials));
  }
  return study;
}

void write_contopt_csv(const ContOptStudy& study, const std::filesystem::path& path) {
  auto out = fmt::output_file(path.string());
  out.print("method,n,trial,eval_index,best_loss\n");
  for (const auto& per_method : study.traces) {
    for (std::size_t trial = 0; trial < per_method.size(); ++trial) {
      const auto& t = per_method[trial];
      for (std::size_t k = 0; k < t.best.size(); ++k) {
        out.print("{},{},{},{},{:.17g}\n", t.method, study.n, trial, k + 1, t.best[k]);
      }
    }
  }
}

}  // namespace signquest
