#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace signquest {

/// A point of the hypercube {-1, +1}^n.
///
/// Entries are never zero. The dimension is fixed at construction; the only
/// mutation is sign flipping, which is what the sign-search strategies need.
class SignVector {
 public:
  /// All entries set to `fill`, which must be -1 or +1.
  explicit SignVector(std::size_t n, int fill = +1);
  SignVector(std::initializer_list<int> values);

  static SignVector from_values(std::span<const int> values);

  /// Coordinate-wise sign with sgn(0) = +1.
  static SignVector sign_of(std::span<const double> values);

  std::size_t size() const noexcept { return bits_.size(); }
  int operator[](std::size_t i) const noexcept { return bits_[i]; }
  int at(std::size_t i) const;

  void flip(std::size_t i);
  /// Flips coordinates in [first, last). `last` is clamped to size().
  void flip_range(std::size_t first, std::size_t last);

  SignVector negated() const;

  std::span<const std::int8_t> bits() const noexcept { return bits_; }
  std::vector<double> to_doubles(double scale = 1.0) const;

  std::int64_t dot(const SignVector& other) const;
  double dot(std::span<const double> values) const;

  friend bool operator==(const SignVector&, const SignVector&) = default;

 private:
  std::vector<std::int8_t> bits_;
};

/// Number of coordinates where `a` and `b` differ.
std::size_t hamming_distance(const SignVector& a, const SignVector& b);

/// Hamming distance recovered from the inner product: (n - a.b) / 2.
std::size_t hamming_from_dot(const SignVector& a, const SignVector& b);

}  // namespace signquest
