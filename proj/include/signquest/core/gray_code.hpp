#pragma once

#include <cstddef>
#include <cstdint>

#include "signquest/core/sign_vector.hpp"

namespace signquest {

/// Largest dimension whose Gray ranks fit the 64-bit rank type with room
/// for the 2^n cell bound.
inline constexpr std::size_t kMaxGrayDimension = 62;

/// Position of `code` in the binary-reflected Gray sequence of length 2^n.
///
/// Coordinate 0 is the most significant bit and -1 plays the role of binary
/// 0, so the sequence starts at the all -1 code. Ranks are zero-based.
std::uint64_t gray_rank(const SignVector& code);

/// Inverse of gray_rank. Throws std::out_of_range when rank >= 2^n.
SignVector gray_code_at(std::size_t n, std::uint64_t rank);

}  // namespace signquest
