#include "signquest/attacks/projection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace signquest {

std::string to_string(Norm norm) { return norm == Norm::linf ? "linf" : "l2"; }

Norm parse_norm(std::string_view text) {
  if (text == "linf" || text == "inf" || text == "Linf") return Norm::linf;
  if (text == "l2" || text == "2" || text == "L2") return Norm::l2;
  throw std::invalid_argument("unknown norm '" + std::string(text) + "' (expected linf or l2)");
}

double vertex_step(Norm norm, double epsilon, std::size_t n) {
  return norm == Norm::linf ? epsilon : epsilon / std::sqrt(static_cast<double>(n));
}

void PerturbationBall::project(std::span<double> x) const {
  if (x.size() != center.size()) throw std::invalid_argument("projection dimension mismatch");
  if (norm == Norm::linf) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = std::clamp(x[i], center[i] - epsilon, center[i] + epsilon);
    }
  } else {
    const double d = distance(x);
    if (d > epsilon) {
      const double scale = d > 0.0 ? epsilon / d : 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = center[i] + scale * (x[i] - center[i]);
    }
  }
  // The centre lies in the range and range clipping is coordinate-wise
  // toward it, so the result stays inside the ball.
  for (double& v : x) v = std::clamp(v, range.lo, range.hi);
}

std::vector<double> PerturbationBall::projected(std::span<const double> x) const {
  std::vector<double> out(x.begin(), x.end());
  project(out);
  return out;
}

double PerturbationBall::distance(std::span<const double> x) const {
  if (x.size() != center.size()) throw std::invalid_argument("distance dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = std::abs(x[i] - center[i]);
    acc = norm == Norm::linf ? std::max(acc, d) : acc + d * d;
  }
  return norm == Norm::linf ? acc : std::sqrt(acc);
}

bool PerturbationBall::contains(std::span<const double> x, double slack) const {
  if (distance(x) > epsilon * (1.0 + slack)) return false;
  return std::all_of(x.begin(), x.end(), [&](double v) { return v >= range.lo && v <= range.hi; });
}

}  // namespace signquest
