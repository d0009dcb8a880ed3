#include "signquest/signsearch/signhunter.hpp"

#include <bit>
#include <random>
#include <stdexcept>

#include "signquest/util/rng.hpp"

namespace signquest {

namespace {

std::size_t ceil_log2(std::size_t n) { return n <= 1 ? 0 : std::bit_width(n - 1); }

std::size_t ceil_div_pow2(std::size_t n, std::size_t h) {
  if (h >= 63) return 1;
  const std::uint64_t d = std::uint64_t{1} << h;
  return static_cast<std::size_t>((n + d - 1) / d);
}

}  // namespace

SignHunter::SignHunter(SignVector init) : s_(std::move(init)) { skip_empty(); }

std::size_t SignHunter::final_depth(std::size_t n) { return ceil_log2(n) + 1; }

std::uint64_t SignHunter::total_steps(std::size_t n) {
  return (std::uint64_t{1} << final_depth(n)) - 1;
}

std::uint64_t SignHunter::total_queries(std::size_t n) {
  std::uint64_t total = 0;
  for (std::size_t h = 0; h < final_depth(n); ++h) {
    const std::size_t len = ceil_div_pow2(n, h);
    total += (n + len - 1) / len;
  }
  return total;
}

std::size_t SignHunter::chunk_length() const noexcept { return ceil_div_pow2(s_.size(), h_); }

std::size_t SignHunter::chunk_begin() const noexcept {
  return static_cast<std::size_t>(i_) * chunk_length();
}

void SignHunter::advance() {
  ++i_;
  if (h_ < 63 && i_ == (std::uint64_t{1} << h_)) {
    ++h_;
    i_ = 0;
  }
  if (h_ == final_depth(s_.size())) done_ = true;
}

void SignHunter::skip_empty() {
  while (!done_ && chunk_begin() >= s_.size()) {
    ++steps_;
    advance();
  }
}

const SignVector& SignHunter::propose() {
  if (done_) throw std::logic_error("SignHunter search is already done");
  if (pending_) throw std::logic_error("SignHunter proposal awaiting observation");
  const std::size_t first = chunk_begin();
  s_.flip_range(first, first + chunk_length());
  pending_ = true;
  return s_;
}

void SignHunter::observe(double value) {
  if (!pending_) throw std::logic_error("SignHunter observation without a proposal");
  if (value >= best_) {
    best_ = value;
  } else {
    const std::size_t first = chunk_begin();
    s_.flip_range(first, first + chunk_length());
  }
  pending_ = false;
  ++steps_;
  advance();
  skip_empty();
}

double SignHunter::step(const SignObjective& g) {
  const double v = g(propose());
  observe(v);
  return v;
}

void SignHunter::anchor(double current_value) {
  if (done_ || pending_) throw std::logic_error("SignHunter can only be anchored between steps");
  best_ = current_value;
}

SignVector random_sign_vector(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::bernoulli_distribution coin(0.5);
  SignVector s(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (coin(rng)) s.flip(i);
  }
  return s;
}

SearchResult signhunter_run(const SignObjective& g, std::size_t n, std::uint64_t budget,
                            std::uint64_t seed, const SignVector* truth,
                            std::optional<SignVector> init, bool anchored) {
  SignVector start = init ? std::move(*init) : random_sign_vector(n, seed);
  if (start.size() != n) throw std::invalid_argument("initial code has the wrong dimension");
  SignHunter hunter(std::move(start));
  TracedObjective traced(g, truth);
  if (anchored && budget > 0) hunter.anchor(traced(hunter.estimate()));
  while (!hunter.is_done() && traced.queries() < budget) {
    hunter.observe(traced(hunter.propose()));
  }
  return {hunter.estimate(), hunter.best_value(), traced.queries(), traced.take_trace(), false};
}

SearchResult sequential_flip(const SignObjective& g, std::size_t n, const SignVector* truth,
                             std::optional<SignVector> init) {
  SignVector s = init ? std::move(*init) : SignVector(n);
  if (s.size() != n) throw std::invalid_argument("initial code has the wrong dimension");
  TracedObjective traced(g, truth);
  double best = traced(s);
  for (std::size_t i = 0; i < n; ++i) {
    s.flip(i);
    const double v = traced(s);
    if (v >= best) {
      best = v;
    } else {
      s.flip(i);
    }
  }
  return {s, best, traced.queries(), traced.take_trace(), false};
}

}  // namespace signquest
