#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "signquest/core/gray_code.hpp"
#include "signquest/core/partition_tree.hpp"
#include "signquest/core/sign_vector.hpp"

using namespace signquest;

namespace {

SignVector code_from_bits(std::uint64_t bits, std::size_t n) {
  SignVector s(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if ((bits >> i) & 1U) s.flip(i);
  }
  return s;
}

}  // namespace

TEST_CASE("sign vectors hold only +-1") {
  SignVector s(4);
  CHECK(s.size() == 4);
  CHECK(std::all_of(s.bits().begin(), s.bits().end(), [](int v) { return v == 1; }));
  CHECK_THROWS_AS(SignVector(3, 0), std::invalid_argument);
  CHECK_THROWS_AS(SignVector(0), std::invalid_argument);
  CHECK_THROWS_AS((SignVector{1, 0, -1}), std::invalid_argument);

  const std::vector<double> g{0.5, 0.0, -2.0};
  CHECK(SignVector::sign_of(g) == SignVector{1, 1, -1});

  SignVector t{1, 1, 1, 1, 1};
  t.flip_range(1, 3);
  CHECK(t == SignVector{1, -1, -1, 1, 1});
  t.flip_range(3, 99);  // clamped
  CHECK(t == SignVector{1, -1, -1, -1, -1});
  CHECK(t.negated() == SignVector{-1, 1, 1, 1, 1});
  CHECK_THROWS_AS(t.at(5), std::out_of_range);
}

TEST_CASE("hamming distance examples") {
  CHECK(hamming_distance({1, 1, 1}, {1, 1, 1}) == 0);
  CHECK(hamming_distance({1, 1, 1}, {-1, -1, -1}) == 3);
  CHECK(hamming_distance({1, -1, 1}, {1, -1, -1}) == 1);
  CHECK_THROWS_AS(hamming_distance({1, 1}, {1, 1, 1}), std::invalid_argument);
}

TEST_CASE("hamming_from_dot examples") {
  // n = 5 with a.b = 1: two disagreements.
  const SignVector a{1, 1, 1, 1, 1};
  const SignVector b{1, 1, 1, -1, -1};
  CHECK(a.dot(b) == 1);
  CHECK(hamming_from_dot(a, b) == 2);
  CHECK(hamming_from_dot(a, a) == 0);
  CHECK(hamming_from_dot(a, a.negated()) == 5);
  CHECK_THROWS_AS(hamming_from_dot({1}, {1, 1}), std::invalid_argument);
}

TEST_CASE("hamming_from_dot agrees with hamming_distance exhaustively for n <= 10") {
  for (std::size_t n = 1; n <= 10; ++n) {
    const std::uint64_t codes = std::uint64_t{1} << n;
    // All pairs for small n, a fixed stride of partners for larger n.
    const std::uint64_t stride = n <= 7 ? 1 : 7;
    for (std::uint64_t x = 0; x < codes; ++x) {
      const SignVector a = code_from_bits(x, n);
      for (std::uint64_t y = 0; y < codes; y += stride) {
        const SignVector b = code_from_bits(y, n);
        REQUIRE(hamming_from_dot(a, b) == hamming_distance(a, b));
        REQUIRE(hamming_distance(a, b) == hamming_distance(b, a));
      }
    }
  }
}

TEST_CASE("gray rank examples") {
  // Fourth code of the n = 4 sequence (one-based position 4).
  CHECK(gray_rank({-1, -1, 1, -1}) == 3);
  CHECK(gray_code_at(4, 3) == SignVector{-1, -1, 1, -1});
  CHECK(gray_rank(SignVector(6, -1)) == 0);
  CHECK(gray_code_at(3, 0) == SignVector{-1, -1, -1});
  CHECK(gray_rank({-1, -1}) == 0);
  CHECK(gray_rank({-1, 1}) == 1);
  CHECK(gray_rank({1, 1}) == 2);
  CHECK(gray_rank({1, -1}) == 3);
  CHECK(gray_code_at(2, 3) == SignVector{1, -1});
  CHECK_THROWS_AS(gray_code_at(3, 8), std::out_of_range);
}

TEST_CASE("gray ordering is a bijection with unit steps for n <= 12") {
  for (std::size_t n = 1; n <= 12; ++n) {
    const std::uint64_t codes = std::uint64_t{1} << n;
    SignVector prev = gray_code_at(n, 0);
    REQUIRE(gray_rank(prev) == 0);
    for (std::uint64_t r = 1; r < codes; ++r) {
      const SignVector cur = gray_code_at(n, r);
      REQUIRE(gray_rank(cur) == r);
      REQUIRE(hamming_distance(prev, cur) == 1);
      prev = cur;
    }
  }
}

TEST_CASE("gray ordering handles wide codes") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t r = rng() >> 2;  // < 2^62
    CHECK(gray_rank(gray_code_at(62, r)) == r);
  }
}

TEST_CASE("expand_node examples") {
  const PartitionNode root = partition_root(5);
  CHECK(root.first == 0);
  CHECK(root.last == 31);
  const auto [l, r] = expand_node(root);
  CHECK(l.first == 0);
  CHECK(l.last == 15);
  CHECK(r.first == 16);
  CHECK(r.last == 31);
  CHECK(l.depth == 1);
  CHECK(l.index == 0);
  CHECK(r.index == 1);

  const PartitionNode seven{3, 2, 10, 16};
  const auto [a, b] = expand_node(seven);
  CHECK(a.size() == 4);
  CHECK(b.size() == 3);
  CHECK(a.first == 10);
  CHECK(b.last == 16);
  CHECK(a.representative_rank() == 11);  // lower median of 10..13

  CHECK_THROWS_AS(expand_node(PartitionNode{2, 0, 4, 4}), std::invalid_argument);
}

TEST_CASE("partition levels are disjoint, covering and shrinking for n <= 8") {
  for (std::size_t n = 1; n <= 8; ++n) {
    std::vector<PartitionNode> level{partition_root(n)};
    std::uint64_t prev_radius = level.front().radius();
    for (std::size_t h = 0; !level.empty(); ++h) {
      std::uint64_t radius = 0;
      std::vector<PartitionNode> next;
      for (const auto& node : level) {
        REQUIRE(node.depth == h);
        REQUIRE(node.contains(node.representative_rank()));
        REQUIRE(gray_rank(representative(node, n)) == node.representative_rank());
        radius = std::max(radius, node.radius());
        if (node.is_singleton()) continue;
        const auto [a, b] = expand_node(node);
        REQUIRE(a.first == node.first);
        REQUIRE(a.last + 1 == b.first);
        REQUIRE(b.last == node.last);
        REQUIRE(a.size() >= b.size());
        REQUIRE(a.size() - b.size() <= 1);
        next.push_back(a);
        next.push_back(b);
      }
      REQUIRE(radius <= prev_radius);
      prev_radius = radius;

      std::vector<char> seen(std::size_t{1} << n, 0);
      for (const auto& node : level) {
        for (std::uint64_t r = node.first; r <= node.last; ++r) {
          REQUIRE(seen[r] == 0);
          seen[r] = 1;
        }
      }
      CHECK(std::count(seen.begin(), seen.end(), 1) == static_cast<long>(seen.size()));
      level = std::move(next);
    }
  }
}

TEST_CASE("power-of-two trees split every level evenly") {
  std::vector<PartitionNode> level{partition_root(6)};
  for (std::size_t h = 0; h < 6; ++h) {
    std::set<std::uint64_t> sizes;
    std::vector<PartitionNode> next;
    for (const auto& node : level) {
      sizes.insert(node.size());
      const auto [a, b] = expand_node(node);
      next.push_back(a);
      next.push_back(b);
    }
    CHECK(sizes.size() == 1);
    CHECK(level.size() == (std::size_t{1} << h));
    level = std::move(next);
  }
}
