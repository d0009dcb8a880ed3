#include "signquest/core/sign_vector.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace signquest {

namespace {

std::int8_t checked_sign(int v) {
  if (v != -1 && v != 1) {
    throw std::invalid_argument("sign vector entries must be -1 or +1, got " + std::to_string(v));
  }
  return static_cast<std::int8_t>(v);
}

void require_same_size(const SignVector& a, const SignVector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("sign vector dimension mismatch: " + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()));
  }
}

}  // namespace

SignVector::SignVector(std::size_t n, int fill) {
  if (n == 0) throw std::invalid_argument("sign vector dimension must be positive");
  bits_.assign(n, checked_sign(fill));
}

SignVector::SignVector(std::initializer_list<int> values) {
  if (values.size() == 0) throw std::invalid_argument("sign vector dimension must be positive");
  bits_.reserve(values.size());
  for (int v : values) bits_.push_back(checked_sign(v));
}

SignVector SignVector::from_values(std::span<const int> values) {
  if (values.empty()) throw std::invalid_argument("sign vector dimension must be positive");
  SignVector out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out.bits_[i] = checked_sign(values[i]);
  return out;
}

SignVector SignVector::sign_of(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("sign vector dimension must be positive");
  SignVector out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out.bits_[i] = values[i] < 0.0 ? -1 : 1;
  return out;
}

int SignVector::at(std::size_t i) const {
  if (i >= bits_.size()) throw std::out_of_range("sign vector index out of range");
  return bits_[i];
}

void SignVector::flip(std::size_t i) {
  if (i >= bits_.size()) throw std::out_of_range("sign vector index out of range");
  bits_[i] = static_cast<std::int8_t>(-bits_[i]);
}

void SignVector::flip_range(std::size_t first, std::size_t last) {
  last = std::min(last, bits_.size());
  for (std::size_t i = first; i < last; ++i) bits_[i] = static_cast<std::int8_t>(-bits_[i]);
}

SignVector SignVector::negated() const {
  SignVector out = *this;
  out.flip_range(0, out.size());
  return out;
}

std::vector<double> SignVector::to_doubles(double scale) const {
  std::vector<double> out(bits_.size());
  std::transform(bits_.begin(), bits_.end(), out.begin(),
                 [scale](std::int8_t b) { return scale * b; });
  return out;
}

std::int64_t SignVector::dot(const SignVector& other) const {
  require_same_size(*this, other);
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i) acc += bits_[i] * other.bits_[i];
  return acc;
}

double SignVector::dot(std::span<const double> values) const {
  if (values.size() != bits_.size()) throw std::invalid_argument("sign vector dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < bits_.size(); ++i) acc += bits_[i] * values[i];
  return acc;
}

std::size_t hamming_distance(const SignVector& a, const SignVector& b) {
  require_same_size(a, b);
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

std::size_t hamming_from_dot(const SignVector& a, const SignVector& b) {
  const auto n = static_cast<std::int64_t>(a.size());
  return static_cast<std::size_t>((n - a.dot(b)) / 2);
}

}  // namespace signquest
