#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "signquest/models/toy_model.hpp"

namespace signquest {

enum class Norm { linf, l2 };

std::string to_string(Norm norm);
/// Accepts "linf", "inf", "l2", "2". Throws std::invalid_argument otherwise.
Norm parse_norm(std::string_view text);

/// The feasible set B_p(center, epsilon) intersected with the data range.
struct PerturbationBall {
  Norm norm = Norm::linf;
  std::vector<double> center;
  double epsilon = 0.0;
  InputRange range{};

  /// Projects onto the ball (coordinate clip for l_inf, radial scaling for
  /// l_2), then clips to the data range. Idempotent.
  void project(std::span<double> x) const;
  std::vector<double> projected(std::span<const double> x) const;

  /// ||x - center||_p.
  double distance(std::span<const double> x) const;
  /// Inside the ball up to a relative slack and inside the data range.
  bool contains(std::span<const double> x, double slack = 1e-9) const;
};

/// Per-coordinate step that puts a sign perturbation on the ball's boundary:
/// epsilon for l_inf, epsilon / sqrt(n) for l_2.
double vertex_step(Norm norm, double epsilon, std::size_t n);

}  // namespace signquest
