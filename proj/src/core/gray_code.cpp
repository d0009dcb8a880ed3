#include "signquest/core/gray_code.hpp"

#include <stdexcept>
#include <string>

namespace signquest {

namespace {

void require_supported(std::size_t n) {
  if (n == 0 || n > kMaxGrayDimension) {
    throw std::invalid_argument("gray ordering supports 1 <= n <= " +
                                std::to_string(kMaxGrayDimension) + ", got " + std::to_string(n));
  }
}

}  // namespace

std::uint64_t gray_rank(const SignVector& code) {
  require_supported(code.size());
  // Gray-to-binary: each binary bit is the prefix XOR of the Gray bits.
  std::uint64_t rank = 0;
  std::uint64_t prefix = 0;
  for (std::size_t i = 0; i < code.size(); ++i) {
    prefix ^= code[i] > 0 ? 1u : 0u;
    rank = (rank << 1) | prefix;
  }
  return rank;
}

SignVector gray_code_at(std::size_t n, std::uint64_t rank) {
  require_supported(n);
  if (rank >= (std::uint64_t{1} << n)) {
    throw std::out_of_range("gray rank " + std::to_string(rank) + " out of range for n = " +
                            std::to_string(n));
  }
  const std::uint64_t gray = rank ^ (rank >> 1);
  SignVector out(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if ((gray >> (n - 1 - i)) & 1u) out.flip(i);
  }
  return out;
}

}  // namespace signquest
