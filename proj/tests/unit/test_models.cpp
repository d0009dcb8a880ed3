#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <vector>

#include "signquest/models/dataset.hpp"
#include "signquest/models/diagnostics.hpp"
#include "signquest/models/mlp.hpp"
#include "signquest/models/toy_model.hpp"
#include "signquest/util/rng.hpp"

using namespace signquest;

namespace {

std::vector<double> random_point(std::size_t n, InputRange range, Rng& rng) {
  std::uniform_real_distribution<double> u(range.lo, range.hi);
  std::vector<double> x(n);
  for (double& v : x) v = u(rng);
  return x;
}

std::filesystem::path temp_dir(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write_bytes(const std::filesystem::path& p, const std::vector<unsigned char>& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("linear model loss and gradient") {
  const LinearModel m({1.0, -2.0, 0.5});
  const std::vector<double> x{0.5, 0.25, -1.0};
  CHECK(m.loss(x, 0) == doctest::Approx(-0.5));
  CHECK(m.gradient(x, 0) == std::vector<double>{1.0, -2.0, 0.5});
  CHECK(m.predict(x) == 0);
  CHECK_THROWS(m.loss(std::vector<double>{1.0}, 0));
  CHECK_THROWS(LinearModel({}));
}

TEST_CASE("quadratic model gradient is 2Qx") {
  const QuadraticModel m(2, {1.0, 0.5, 0.5, -1.0});
  const std::vector<double> x{1.0, 2.0};
  CHECK(m.loss(x, 0) == doctest::Approx(1.0 + 2.0 - 4.0));
  const auto g = m.gradient(x, 0);
  CHECK(g[0] == doctest::Approx(4.0));
  CHECK(g[1] == doctest::Approx(-3.0));
  CHECK_THROWS(QuadraticModel(2, {1.0, 0.5, 0.4, 1.0}));
  CHECK_THROWS(QuadraticModel(2, {1.0}));
}

TEST_CASE("linear binary classifier margin loss") {
  const LinearBinaryClassifier m({1.0, -1.0}, 0.25);
  const std::vector<double> x{0.5, 0.5};
  CHECK(m.logit(x) == doctest::Approx(0.25));
  CHECK(m.predict(x) == 1);
  CHECK(m.loss(x, 1) == doctest::Approx(-0.25));
  CHECK(m.loss(x, 0) == doctest::Approx(0.25));
  CHECK(m.gradient(x, 1) == std::vector<double>{-1.0, 1.0});
  CHECK(m.gradient(x, 0) == std::vector<double>{1.0, -1.0});
  CHECK(m.predict(std::vector<double>{0.0, 1.0}) == 0);
}

TEST_CASE("synthetic concave loss peaks at the range centre") {
  const SyntheticConcaveLoss m(4, {0.0, 1.0});
  const auto opt = m.optimum();
  CHECK(opt == std::vector<double>(4, 0.5));
  CHECK(m.loss(opt, 0) == 0.0);
  const auto g = m.gradient(opt, 0);
  CHECK(std::all_of(g.begin(), g.end(), [](double v) { return v == 0.0; }));
  CHECK(gradient_check(m, opt, 0, 1e-4));
  CHECK(m.loss(std::vector<double>{0.0, 0.5, 0.5, 1.0}, 0) == doctest::Approx(-0.5));
}

TEST_CASE("concave maximiser over a box away from the optimum is a vertex") {
  const SyntheticConcaveLoss m(3, {0.0, 1.0});
  Rng rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double eps = 0.05;
    std::vector<double> x(3);
    for (double& v : x) {
      do {
        v = u(rng);
      } while (std::abs(v - 0.5) <= eps);
    }
    // Best over a fine grid of the box.
    double best = -1e300;
    std::vector<double> arg(3);
    const int k = 10;
    for (int a = 0; a <= k; ++a) {
      for (int b = 0; b <= k; ++b) {
        for (int c = 0; c <= k; ++c) {
          const std::vector<double> p{x[0] - eps + 2 * eps * a / k, x[1] - eps + 2 * eps * b / k,
                                      x[2] - eps + 2 * eps * c / k};
          const double l = m.loss(p, 0);
          if (l > best) {
            best = l;
            arg = p;
          }
        }
      }
    }
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(std::abs(arg[i] - x[i]) - eps) < 1e-12);
  }
}

TEST_CASE("analytic gradients agree with central differences") {
  Rng rng(17);
  const std::size_t n = 12;
  std::vector<double> c(n);
  std::normal_distribution<double> normal;
  for (double& v : c) v = normal(rng);
  const LinearModel linear(c);
  const LinearBinaryClassifier binary(c, 0.1);
  const auto quad = make_quadratic_toy(n, 5);
  const SyntheticConcaveLoss concave(n);

  auto blobs = make_blobs({300, n, 3, 0.1, 8});
  const auto trained = train_mlp(blobs, {32, 30, 0.1, 32, 4});

  const ToyModel* models[] = {&linear, &binary, &quad.model, &concave, &trained.model};
  for (const ToyModel* m : models) {
    for (int point = 0; point < 20; ++point) {
      const auto x = random_point(n, m->input_range(), rng);
      const int label = static_cast<int>(rng() % m->num_classes());
      INFO(m->name());
      CHECK(gradient_check_error(*m, x, label) < 1e-4);
      CHECK(gradient_check(*m, x, label, 1e-4));
    }
  }
  // Linear losses: central differences are exact up to rounding.
  const auto x = random_point(n, linear.input_range(), rng);
  CHECK(gradient_check_error(linear, x, 0) < 1e-9);
}

TEST_CASE("mlp probabilities form a distribution") {
  const MlpClassifier m(5, 8, 4, 3);
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const auto x = random_point(5, m.input_range(), rng);
    const auto p = m.probabilities(x);
    REQUIRE(p.size() == 4);
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::all_of(p.begin(), p.end(), [](double v) { return v >= 0.0; }));
    // Untrained output layer is zero: uniform probabilities, class 0 predicted.
    CHECK(p[2] == doctest::Approx(0.25));
    CHECK(m.predict(x) == 0);
    CHECK(m.loss(x, 1) == doctest::Approx(std::log(4.0)));
  }
}

TEST_CASE("mlp training separates two blobs") {
  const auto data = make_blobs({400, 10, 2, 0.1, 21});
  const auto trained = train_mlp(data, {32, 100, 0.1, 32, 7});
  CHECK(trained.train_accuracy >= 0.95);
  CHECK(accuracy(trained.model, data) == doctest::Approx(trained.train_accuracy));
}

TEST_CASE("zero epochs leaves the net at chance") {
  const auto data = make_blobs({300, 6, 3, 0.1, 2});
  const auto trained = train_mlp(data, {32, 0, 0.1, 32, 7});
  CHECK(trained.train_accuracy == doctest::Approx(1.0 / 3.0).epsilon(0.02));
}

TEST_CASE("training is deterministic for a fixed seed") {
  const auto data = make_blobs({200, 6, 3, 0.1, 2});
  const auto a = train_mlp(data, {16, 5, 0.1, 16, 9});
  const auto b = train_mlp(data, {16, 5, 0.1, 16, 9});
  const auto c = train_mlp(data, {16, 5, 0.1, 16, 10});
  CHECK(a.model.parameters() == b.model.parameters());
  CHECK(a.model.parameters() != c.model.parameters());
  CHECK_THROWS_AS(train_mlp(Dataset{6, 3, {}, {}, {}}, {}), std::invalid_argument);
}

TEST_CASE("blobs are seeded, balanced and in range") {
  const auto a = make_blobs({90, 4, 3, 0.2, 5});
  const auto b = make_blobs({90, 4, 3, 0.2, 5});
  CHECK(a.features == b.features);
  CHECK(a.size() == 90);
  for (int k = 0; k < 3; ++k) CHECK(std::count(a.labels.begin(), a.labels.end(), k) == 30);
  CHECK(std::all_of(a.features.begin(), a.features.end(), [](double v) { return v >= 0.0 && v <= 1.0; }));
  const auto s = a.slice(10, 5);
  CHECK(s.size() == 5);
  CHECK(s.row(0)[0] == a.row(10)[0]);
  CHECK_THROWS(make_blobs({0, 4, 3, 0.1, 1}));
}

TEST_CASE("idx round trip") {
  const auto dir = temp_dir("signquest_idx_roundtrip");
  auto data = make_blobs({12, 6, 3, 0.1, 4});
  write_idx(data, 2, 3, dir / "img", dir / "lbl");
  const auto loaded = load_idx(dir / "img", dir / "lbl");
  CHECK(loaded.size() == 12);
  CHECK(loaded.dim == 6);
  CHECK(loaded.labels == data.labels);
  for (std::size_t i = 0; i < data.features.size(); ++i) {
    CHECK(std::abs(loaded.features[i] - data.features[i]) <= 0.5 / 255.0 + 1e-12);
    CHECK(loaded.features[i] >= 0.0);
    CHECK(loaded.features[i] <= 1.0);
  }
  CHECK(load_idx(dir / "img", dir / "lbl", 5).size() == 5);
  std::filesystem::remove_all(dir);
}

TEST_CASE("idx errors") {
  const auto dir = temp_dir("signquest_idx_errors");
  // Two 1x2 images, three labels.
  write_bytes(dir / "img", {0, 0, 8, 3, 0, 0, 0, 2, 0, 0, 0, 1, 0, 0, 0, 2, 0, 255, 128, 64});
  write_bytes(dir / "lbl3", {0, 0, 8, 1, 0, 0, 0, 3, 1, 0, 1});
  write_bytes(dir / "lbl2", {0, 0, 8, 1, 0, 0, 0, 2, 1, 0});
  write_bytes(dir / "bad", {0, 0, 8, 2, 0, 0, 0, 2, 1, 0});
  write_bytes(dir / "short", {0, 0, 8, 3, 0, 0, 0, 2, 0, 0, 0, 1, 0, 0, 0, 2, 0, 255});

  const auto ok = load_idx(dir / "img", dir / "lbl2");
  CHECK(ok.size() == 2);
  CHECK(ok.features[1] == doctest::Approx(1.0));
  CHECK(ok.labels == std::vector<int>{1, 0});

  CHECK_THROWS_AS(load_idx(dir / "img", dir / "lbl3"), IdxError);
  CHECK_THROWS_AS(load_idx(dir / "img", dir / "bad"), IdxError);
  CHECK_THROWS_AS(load_idx(dir / "bad", dir / "lbl2"), IdxError);
  CHECK_THROWS_AS(load_idx(dir / "short", dir / "lbl2"), IdxError);
  CHECK_THROWS_AS(load_idx(dir / "missing", dir / "lbl2"), IdxError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("magnitude histograms") {
  const auto data = make_blobs({20, 5, 2, 0.1, 3});

  SUBCASE("linear model gives the coefficient magnitudes everywhere") {
    const LinearModel m({0.5, -0.5, 0.5, -0.5, 0.5}, {0.0, 1.0});
    HistogramConfig cfg;
    cfg.num_images = 4;
    cfg.bins = 4;
    const auto hs = magnitude_histogram(m, data, cfg);
    REQUIRE(hs.size() == 4);
    for (const auto& h : hs) {
      CHECK(h.median == doctest::Approx(0.5));
      CHECK(h.iqr == 0.0);
      CHECK(h.concentration == 0.0);
      CHECK(std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0}) == 5);
      CHECK(h.bin_edges.size() == 5);
    }
  }

  SUBCASE("concave loss at its optimum has zero magnitudes") {
    const SyntheticConcaveLoss m(5);
    Dataset at_opt{5, 1, m.optimum(), {0}, {0.0, 1.0}};
    const auto hs = magnitude_histogram(m, at_opt, {});
    REQUIRE(hs.size() == 1);
    CHECK(hs[0].median == 0.0);
    CHECK(hs[0].concentration == 0.0);
  }

  SUBCASE("perturbed points stay reproducible and finite") {
    const auto trained = train_mlp(data, {8, 5, 0.1, 8, 1});
    HistogramConfig cfg;
    cfg.perturbed = true;
    cfg.epsilon = 0.1;
    const auto a = magnitude_histogram(trained.model, data, cfg);
    const auto b = magnitude_histogram(trained.model, data, cfg);
    REQUIRE(a.size() == 10);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].median == b[i].median);
      CHECK(a[i].iqr >= 0.0);
    }
  }
}
