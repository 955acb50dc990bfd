#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace sepalg {

using Complex = std::complex<double>;
using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;

/// A point of C^n.
using Point = VectorXc;

using Rng = std::mt19937_64;

/// Independent sub-stream seed for `stream` derived from a job seed.
/// std::seed_seq is fully specified, so the result is portable.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform in the closed disc |w - center| <= radius (area measure).
inline Complex sample_disc(Rng& rng, Complex center, double radius) {
  const double r = radius * std::sqrt(uniform01(rng));
  const double a = 2.0 * std::numbers::pi * uniform01(rng);
  return center + std::polar(r, a);
}

/// Uniform in the annulus inner <= |w| <= outer (area measure).
inline Complex sample_annulus(Rng& rng, double inner, double outer) {
  const double u = uniform01(rng);
  const double r = std::sqrt(inner * inner + u * (outer * outer - inner * inner));
  const double a = 2.0 * std::numbers::pi * uniform01(rng);
  return std::polar(r, a);
}

/// Product of discs: coordinate i lies within radius[i] of center[i].
struct Polydisc {
  Point center;
  Eigen::VectorXd radius;

  Eigen::Index dim() const { return center.size(); }

  Point sample(Rng& rng) const {
    Point z(center.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = sample_disc(rng, center[i], radius[i]);
    return z;
  }

  bool contains(const Point& z, double slack = 0.0) const {
    for (Eigen::Index i = 0; i < z.size(); ++i)
      if (std::abs(z[i] - center[i]) > radius[i] + slack) return false;
    return true;
  }

  /// Smallest distance from z to the boundary, over coordinates. Negative outside.
  double margin(const Point& z) const {
    double m = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < z.size(); ++i) m = std::min(m, radius[i] - std::abs(z[i] - center[i]));
    return m;
  }
};

}  // namespace sepalg
