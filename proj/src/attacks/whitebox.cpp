#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "signquest/attacks/attack.hpp"
#include "signquest/models/toy_model.hpp"
#include "signquest/util/rng.hpp"

namespace signquest {

namespace {

std::vector<double> apply_signs(std::span<const double> x, const SignVector& s, double step,
                                InputRange range) {
  std::vector<double> out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::clamp(out[i] + step * s[i], range.lo, range.hi);
  return out;
}

}  // namespace

std::vector<double> fgsm(const ToyModel& model, std::span<const double> x, int label,
                         double epsilon, Norm norm) {
  const SignVector s = SignVector::sign_of(model.gradient(x, label));
  return apply_signs(x, s, vertex_step(norm, epsilon, x.size()), model.input_range());
}

std::string to_string(KeepMode mode) { return mode == KeepMode::top ? "top" : "random"; }

KeepMode parse_keep_mode(std::string_view text) {
  if (text == "top") return KeepMode::top;
  if (text == "random") return KeepMode::random;
  throw std::invalid_argument("unknown keep mode '" + std::string(text) + "' (expected top or random)");
}

std::vector<double> noisy_fgsm(const ToyModel& model, std::span<const double> x, int label,
                               double epsilon, Norm norm, double k_percent, KeepMode mode,
                               std::uint64_t seed) {
  if (!(k_percent >= 0.0 && k_percent <= 100.0)) throw std::invalid_argument("k must lie in [0, 100]");
  const std::size_t n = x.size();
  const auto grad = model.gradient(x, label);
  const SignVector truth = SignVector::sign_of(grad);
  const auto keep = static_cast<std::size_t>(std::lround(k_percent / 100.0 * static_cast<double>(n)));

  Rng rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (mode == KeepMode::top) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(grad[a]) > std::abs(grad[b]); });
  } else {
    std::shuffle(order.begin(), order.end(), rng);
  }
  std::vector<bool> kept(n, false);
  for (std::size_t r = 0; r < keep; ++r) kept[order[r]] = true;

  std::bernoulli_distribution coin(0.5);
  SignVector s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int v = kept[i] ? truth[i] : (coin(rng) ? 1 : -1);
    if (v != s[i]) s.flip(i);
  }
  return apply_signs(x, s, vertex_step(norm, epsilon, n), model.input_range());
}

std::vector<double> pgd_whitebox(const ToyModel& model, std::span<const double> x, int label,
                                 double epsilon, Norm norm, std::size_t steps, double step_size,
                                 std::size_t restarts, std::uint64_t seed) {
  const std::size_t n = x.size();
  const PerturbationBall ball{norm, {x.begin(), x.end()}, epsilon, model.input_range()};
  const double step = norm == Norm::linf ? step_size : step_size / std::sqrt(static_cast<double>(n));
  std::vector<double> best(x.begin(), x.end());
  double best_loss = model.loss(best, label);

  for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
    std::vector<double> cur(x.begin(), x.end());
    if (r > 0) {
      Rng rng(derive_seed(seed, {r}));
      if (norm == Norm::linf) {
        std::uniform_real_distribution<double> u(-epsilon, epsilon);
        for (double& v : cur) v += u(rng);
      } else {
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<double> dir(n);
        double len = 0.0;
        for (double& d : dir) {
          d = gauss(rng);
          len += d * d;
        }
        len = std::sqrt(len);
        const double radius =
            epsilon * std::pow(std::uniform_real_distribution<double>(0.0, 1.0)(rng), 1.0 / static_cast<double>(n));
        for (std::size_t i = 0; i < n; ++i) cur[i] += len > 0.0 ? radius * dir[i] / len : 0.0;
      }
      ball.project(cur);
    }
    for (std::size_t t = 0; t < steps; ++t) {
      const SignVector s = SignVector::sign_of(model.gradient(cur, label));
      for (std::size_t i = 0; i < n; ++i) cur[i] += step * s[i];
      ball.project(cur);
    }
    if (model.predict(cur) != label) return cur;
    const double loss = model.loss(cur, label);
    if (loss > best_loss) {
      best_loss = loss;
      best = cur;
    }
  }
  return best;
}

double hamming_similarity(std::span<const double> estimate, std::span<const double> truth) {
  const SignVector a = SignVector::sign_of(estimate);
  const SignVector b = SignVector::sign_of(truth);
  return 1.0 - static_cast<double>(hamming_distance(a, b)) / static_cast<double>(a.size());
}

double cosine_similarity(std::span<const double> estimate, std::span<const double> truth) {
  if (estimate.size() != truth.size()) throw std::invalid_argument("dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    dot += estimate[i] * truth[i];
    na += estimate[i] * estimate[i];
    nb += truth[i] * truth[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace signquest
