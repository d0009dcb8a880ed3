#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "signquest/attacks/attack.hpp"
#include "signquest/attacks/projection.hpp"
#include "signquest/models/dataset.hpp"
#include "signquest/models/mlp.hpp"
#include "signquest/models/toy_model.hpp"
#include "signquest/oracles/loss_oracle.hpp"
#include "signquest/signsearch/signhunter.hpp"
#include "signquest/util/rng.hpp"

using namespace signquest;

namespace {

double l1(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

std::vector<double> uniform_point(std::size_t n, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> x(n);
  for (double& v : x) v = u(rng);
  return x;
}

}  // namespace

TEST_CASE("norm names") {
  CHECK(parse_norm("linf") == Norm::linf);
  CHECK(parse_norm("inf") == Norm::linf);
  CHECK(parse_norm("l2") == Norm::l2);
  CHECK(parse_norm("2") == Norm::l2);
  CHECK(to_string(Norm::l2) == "l2");
  CHECK_THROWS_AS(parse_norm("l1"), std::invalid_argument);
  CHECK(vertex_step(Norm::linf, 0.3, 100) == 0.3);
  CHECK(vertex_step(Norm::l2, 3.0, 100) == doctest::Approx(0.3));
}

TEST_CASE("projection examples") {
  const double eps = 0.1;
  const std::vector<double> c{0.5, 0.5, 0.5};

  SUBCASE("inside points are unchanged") {
    for (Norm norm : {Norm::linf, Norm::l2}) {
      const PerturbationBall ball{norm, c, eps, {0.0, 1.0}};
      const std::vector<double> x{0.52, 0.49, 0.5};
      CHECK(ball.projected(x) == x);
      CHECK(ball.contains(x));
    }
  }
  SUBCASE("l_inf clips each coordinate") {
    const PerturbationBall ball{Norm::linf, c, eps, {-10.0, 10.0}};
    const auto p = ball.projected(std::vector<double>{0.7, 0.7, 0.7});
    for (double v : p) CHECK(v == doctest::Approx(0.6));
    CHECK(ball.distance(p) == doctest::Approx(0.1));
  }
  SUBCASE("l_2 scales radially") {
    const PerturbationBall ball{Norm::l2, c, eps, {-10.0, 10.0}};
    const std::vector<double> x{0.5 + 0.2, 0.5, 0.5};
    const auto p = ball.projected(x);
    CHECK(p[0] == doctest::Approx(0.6));
    CHECK(p[1] == doctest::Approx(0.5));
    CHECK(ball.distance(p) == doctest::Approx(eps));
  }
  SUBCASE("data range clip comes last") {
    const PerturbationBall ball{Norm::linf, {0.95, 0.05}, 0.2, {0.0, 1.0}};
    const auto p = ball.projected(std::vector<double>{1.3, -0.4});
    CHECK(p[0] == 1.0);
    CHECK(p[1] == 0.0);
    CHECK(ball.contains(p));
    CHECK_FALSE(ball.contains(std::vector<double>{1.1, 0.0}));
    CHECK_FALSE(ball.contains(std::vector<double>{0.7, 0.05}));
  }
}

TEST_CASE("projection is idempotent and lands in the feasible set") {
  Rng rng(3);
  for (Norm norm : {Norm::linf, Norm::l2}) {
    for (int t = 0; t < 200; ++t) {
      const auto center = uniform_point(8, 0.0, 1.0, rng);
      const PerturbationBall ball{norm, center, 0.3, {0.0, 1.0}};
      auto x = uniform_point(8, -1.0, 2.0, rng);
      ball.project(x);
      REQUIRE(ball.contains(x));
      const auto again = ball.projected(x);
      for (std::size_t i = 0; i < 8; ++i) REQUIRE(again[i] == doctest::Approx(x[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("fgsm on a linear loss gains epsilon times the l1 norm") {
  const std::vector<double> c{0.5, -1.0, 2.0, -0.25};
  const LinearModel m(c, {-10.0, 10.0});
  const std::vector<double> x{0.1, 0.2, 0.3, 0.4};
  const auto adv = fgsm(m, x, 0, 0.3, Norm::linf);
  CHECK(m.loss(adv, 0) - m.loss(x, 0) == doctest::Approx(0.3 * l1(c)));
  const auto adv2 = fgsm(m, x, 0, 3.0, Norm::l2);
  CHECK(m.loss(adv2, 0) - m.loss(x, 0) == doctest::Approx(1.5 * l1(c)));

  const LinearModel flat({0.0, 0.0});
  const auto moved = fgsm(flat, std::vector<double>{0.0, 0.0}, 0, 0.2, Norm::linf);
  CHECK(moved == std::vector<double>{0.2, 0.2});
}

TEST_CASE("noisy fgsm") {
  const auto data = make_blobs({120, 10, 3, 0.1, 2});
  const auto trained = train_mlp(data, {16, 20, 0.1, 16, 3});
  for (std::size_t i = 0; i < 10; ++i) {
    const auto x = data.row(i);
    const int y = data.labels[i];
    const auto ref = fgsm(trained.model, x, y, 0.2, Norm::linf);
    CHECK(noisy_fgsm(trained.model, x, y, 0.2, Norm::linf, 100, KeepMode::top, i) == ref);
    CHECK(noisy_fgsm(trained.model, x, y, 0.2, Norm::linf, 100, KeepMode::random, i) == ref);
    const auto noise = noisy_fgsm(trained.model, x, y, 0.2, Norm::linf, 0, KeepMode::top, i);
    for (std::size_t d = 0; d < x.size(); ++d) {
      const double moved = std::abs(noise[d] - x[d]);
      CHECK((moved == doctest::Approx(0.2) || noise[d] == 0.0 || noise[d] == 1.0));
    }
  }
  // Top-k keeps the largest-magnitude coordinates exact.
  const LinearModel lin({5.0, -4.0, 0.1, -0.1, 0.2}, {-10.0, 10.0});
  const std::vector<double> x(5, 0.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto adv = noisy_fgsm(lin, x, 0, 1.0, Norm::linf, 40, KeepMode::top, seed);
    CHECK(adv[0] == 1.0);
    CHECK(adv[1] == -1.0);
  }
  CHECK_THROWS(noisy_fgsm(lin, x, 0, 1.0, Norm::linf, 101, KeepMode::top, 0));
  CHECK(parse_keep_mode("random") == KeepMode::random);
  CHECK_THROWS(parse_keep_mode("all"));
}

TEST_CASE("pgd") {
  const auto data = make_blobs({120, 10, 3, 0.1, 2});
  const auto trained = train_mlp(data, {16, 20, 0.1, 16, 3});
  const auto& m = trained.model;
  std::size_t pgd_wins = 0, fgsm_wins = 0;
  for (std::size_t i = 0; i < 30; ++i) {
    const auto x = data.row(i);
    const int y = data.labels[i];
    CHECK(pgd_whitebox(m, x, y, 0.1, Norm::linf, 1, 0.1, 1, 0) == fgsm(m, x, y, 0.1, Norm::linf));
    const auto a = pgd_whitebox(m, x, y, 0.1, Norm::linf, 10, 0.02, 3, 7);
    const auto b = pgd_whitebox(m, x, y, 0.1, Norm::linf, 10, 0.02, 3, 7);
    CHECK(a == b);
    const PerturbationBall ball{Norm::linf, {x.begin(), x.end()}, 0.1, m.input_range()};
    CHECK(ball.contains(a));
    pgd_wins += m.predict(a) != y;
    fgsm_wins += m.predict(fgsm(m, x, y, 0.1, Norm::linf)) != y;
  }
  CHECK(pgd_wins >= fgsm_wins);
}

TEST_CASE("signhunter attack degenerate inputs") {
  const LinearBinaryClassifier m({1.0, -1.0, 0.5}, 0.0);
  ModelLossOracle oracle(m);
  const std::vector<double> x{0.6, 0.4, 0.5};
  REQUIRE(m.predict(x) == 1);
  AttackConfig cfg;
  cfg.epsilon = 0.0;
  const auto none = signhunter_attack(oracle, x, 1, cfg);
  CHECK(none.status == AttackStatus::failure);
  CHECK(none.queries == 0);
  CHECK(oracle.query_count() == 0);
  CHECK(none.final_input == x);

  const auto wrong = signhunter_attack(oracle, x, 0, AttackConfig{});
  CHECK(wrong.status == AttackStatus::misclassified_at_start);
  CHECK(wrong.queries == 0);
  CHECK(to_string(AttackStatus::misclassified_at_start) == "misclassified_at_start");
}

TEST_CASE("signhunter attack on a linear classifier matches the analytic margin") {
  Rng rng(11);
  const std::size_t n = 20;
  std::normal_distribution<double> normal;
  std::vector<double> w(n);
  for (double& v : w) v = normal(rng);
  const LinearBinaryClassifier m(w, 0.0, {-10.0, 10.0});
  const std::uint64_t budget = SignHunter::total_steps(n) + 1;
  for (int t = 0; t < 50; ++t) {
    const auto x = uniform_point(n, -1.0, 1.0, rng);
    const int y = m.predict(x);
    const double threshold = std::abs(m.logit(x)) / l1(w);
    for (double scale : {0.5, 1.01, 2.0}) {
      AttackConfig cfg;
      cfg.epsilon = threshold * scale;
      cfg.budget = budget;
      ModelLossOracle oracle(m);
      const auto rec = signhunter_attack(oracle, x, y, cfg);
      const bool fgsm_fools = m.predict(fgsm(m, x, y, cfg.epsilon, Norm::linf)) != y;
      CHECK(fgsm_fools == (scale > 1.0));
      CHECK(rec.success == fgsm_fools);
      CHECK(rec.queries <= budget);
      CHECK(rec.queries == oracle.query_count());
      CHECK(rec.loss_trace.size() == rec.queries);
      if (!rec.success) {
        // One full schedule without restart leaves the iterate at the FGSM point.
        cfg.budget = 1 + SignHunter::total_queries(n);
        ModelLossOracle once(m);
        const auto single = signhunter_attack(once, x, y, cfg);
        const auto ref = fgsm(m, x, y, cfg.epsilon, Norm::linf);
        for (std::size_t i = 0; i < n; ++i) CHECK(single.final_input[i] == doctest::Approx(ref[i]));
      }
    }
  }
}

TEST_CASE("signhunter attack keeps every query feasible and restarts") {
  const auto data = make_blobs({200, 12, 3, 0.1, 6});
  const auto trained = train_mlp(data, {16, 40, 0.1, 16, 3});
  for (Norm norm : {Norm::linf, Norm::l2}) {
    for (std::size_t i = 0; i < 10; ++i) {
      const auto x = data.row(i);
      const int y = data.labels[i];
      if (trained.model.predict(x) != y) continue;
      AttackConfig cfg = AttackConfig::defaults(norm);
      cfg.epsilon = norm == Norm::linf ? 0.02 : 0.05;  // small: forces restarts
      cfg.budget = 200;
      cfg.record_estimates = true;
      const PerturbationBall ball{norm, {x.begin(), x.end()}, cfg.epsilon, trained.model.input_range()};
      ModelLossOracle oracle(trained.model);
      std::size_t violations = 0;
      oracle.set_observer([&](std::span<const double> p, int) { violations += !ball.contains(p); });
      const auto rec = signhunter_attack(oracle, x, y, cfg);
      CHECK(violations == 0);
      CHECK(rec.queries == oracle.query_count());
      CHECK(rec.loss_trace.size() == rec.queries);
      CHECK(rec.estimate_trace.size() == rec.queries);
      if (!rec.success) {
        CHECK(rec.queries == 200);
        CHECK(rec.base_queries > 1);
      }
      CHECK(ball.contains(rec.final_input));
    }
  }
}

TEST_CASE("antithetic estimator") {
  const std::vector<std::vector<double>> dirs{{1.0, 0.0}, {0.0, 2.0}};
  const std::vector<double> vals{3.0, 1.0, 0.0, 4.0};
  const auto g = antithetic_estimate(dirs, vals, 0.5);
  CHECK(g[0] == doctest::Approx(1.0));
  CHECK(g[1] == doctest::Approx(-4.0));
  CHECK_THROWS(antithetic_estimate(dirs, std::vector<double>{1.0}, 0.5));

  // Points along the gradient on a quadratic bowl.
  const auto toy = make_quadratic_toy(6, 2);
  const auto grad = toy.model.gradient(toy.point, 0);
  Rng rng(1);
  std::normal_distribution<double> normal;
  const double sigma = 1e-4;
  std::vector<std::vector<double>> us(4000, std::vector<double>(6));
  std::vector<double> values;
  for (auto& u : us) {
    for (double& v : u) v = normal(rng);
    for (double side : {1.0, -1.0}) {
      std::vector<double> p = toy.point;
      for (std::size_t i = 0; i < 6; ++i) p[i] += side * sigma * u[i];
      values.push_back(toy.model.loss(p, 0));
    }
  }
  CHECK(cosine_similarity(antithetic_estimate(us, values, sigma), grad) > 0.95);
}

TEST_CASE("nes and zosignsgd") {
  const auto data = make_blobs({200, 12, 3, 0.1, 6});
  const auto trained = train_mlp(data, {16, 40, 0.1, 16, 3});
  const auto x = data.row(0);
  const int y = data.labels[0];
  REQUIRE(trained.model.predict(x) == y);

  SUBCASE("budget below one iteration") {
    AttackConfig cfg = AttackConfig::defaults(Norm::linf);
    cfg.budget = 2 * cfg.samples - 1;
    ModelLossOracle oracle(trained.model);
    const auto rec = nes_attack(oracle, x, y, cfg);
    CHECK_FALSE(rec.success);
    CHECK(rec.queries == cfg.budget);
    CHECK(oracle.query_count() == cfg.budget);
    CHECK(std::equal(rec.final_input.begin(), rec.final_input.end(), x.begin()));
  }
  SUBCASE("partial iterations are dropped but counted") {
    AttackConfig cfg = AttackConfig::defaults(Norm::linf);
    cfg.epsilon = 0.01;
    cfg.budget = 3 * 2 * cfg.samples + 5;
    ModelLossOracle oracle(trained.model);
    const auto rec = zosignsgd_attack(oracle, x, y, cfg);
    CHECK(rec.queries == cfg.budget);
    CHECK(rec.loss_trace.size() == cfg.budget);
  }
  SUBCASE("zo and nes share an estimator and differ only in the l2 step") {
    AttackConfig cfg = AttackConfig::defaults(Norm::linf);
    cfg.budget = 100;
    cfg.seed = 42;
    ModelLossOracle a(trained.model), b(trained.model);
    const auto ra = nes_attack(a, x, y, cfg);
    const auto rb = zosignsgd_attack(b, x, y, cfg);
    CHECK(ra.loss_trace == rb.loss_trace);
    cfg.norm = Norm::l2;
    cfg.epsilon = 3.0;
    ModelLossOracle c(trained.model), d(trained.model);
    const auto rc = nes_attack(c, x, y, cfg);
    const auto rd = zosignsgd_attack(d, x, y, cfg);
    // Identical first iteration, different steps afterwards.
    CHECK(std::equal(rc.loss_trace.begin(), rc.loss_trace.begin() + 20, rd.loss_trace.begin()));
  }
  SUBCASE("queries stay feasible") {
    for (Norm norm : {Norm::linf, Norm::l2}) {
      AttackConfig cfg = AttackConfig::defaults(norm);
      cfg.epsilon = norm == Norm::linf ? 0.05 : 0.2;
      cfg.budget = 300;
      const PerturbationBall ball{norm, {x.begin(), x.end()}, cfg.epsilon, trained.model.input_range()};
      for (int which = 0; which < 2; ++which) {
        ModelLossOracle oracle(trained.model);
        std::size_t violations = 0;
        oracle.set_observer([&](std::span<const double> p, int) { violations += !ball.contains(p); });
        const auto rec = which == 0 ? nes_attack(oracle, x, y, cfg) : zosignsgd_attack(oracle, x, y, cfg);
        CHECK(violations == 0);
        CHECK(rec.queries == oracle.query_count());
        CHECK(ball.contains(rec.final_input));
      }
    }
  }
}

TEST_CASE("estimator attacks raise the concave testbed loss") {
  const std::size_t n = 50;
  const SyntheticConcaveLoss m(n);
  Rng rng(19);
  for (Norm norm : {Norm::linf, Norm::l2}) {
    double start = 0.0, nes_end = 0.0, zo_end = 0.0;
    for (int t = 0; t < 30; ++t) {
      const auto x = uniform_point(n, 0.3, 0.7, rng);
      AttackConfig cfg = AttackConfig::defaults(norm);
      cfg.epsilon = norm == Norm::linf ? 0.1 : 0.5;
      cfg.learning_rate = norm == Norm::linf ? 0.01 : 0.1;
      cfg.budget = 400;
      cfg.seed = static_cast<std::uint64_t>(t);
      ModelLossOracle a(m), b(m);
      start += m.loss(x, 0);
      nes_end += nes_attack(a, x, 0, cfg).final_loss;
      zo_end += zosignsgd_attack(b, x, 0, cfg).final_loss;
    }
    MESSAGE(to_string(norm) << ": start " << start / 30 << ", nes " << nes_end / 30 << ", zo " << zo_end / 30);
    CHECK(nes_end > start);
    CHECK(zo_end > start);
  }
}

TEST_CASE("similarity metrics") {
  const std::vector<double> g{3.0, -4.0};
  const std::vector<double> s{1.0, -1.0};
  CHECK(hamming_similarity(s, g) == 1.0);
  CHECK(hamming_similarity(std::vector<double>{-1.0, -1.0}, g) == 0.5);
  CHECK(cosine_similarity(s, g) == doctest::Approx(7.0 / (std::sqrt(2.0) * 5.0)));
  CHECK(cosine_similarity(g, g) == doctest::Approx(1.0));
  CHECK(cosine_similarity(std::vector<double>{0.0, 0.0}, g) == 0.0);
  std::vector<double> neg = g;
  for (double& v : neg) v = -v;
  CHECK(cosine_similarity(neg, g) == doctest::Approx(-1.0));
  CHECK(hamming_similarity(neg, g) == 0.0);
}
