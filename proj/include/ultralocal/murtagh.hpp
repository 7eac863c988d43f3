#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>

#include "ultralocal/metric.hpp"

namespace ultralocal {

// 2 degrees, as used by Murtagh's ultrametricity index.
inline constexpr double kAlmostUltrametricTolerance = 0.03490656;

struct TriangleVerdict {
  double a = 0, b = 0, c = 0;                 // sides, a <= b <= c
  double angle_a = 0, angle_b = 0, angle_c = 0;  // angles opposite a, b, c
  bool degenerate = false;
};

// Sides below this are treated as coincident points.
inline constexpr double kMinSide = 1e-12;
// Largest |cos| overshoot beyond 1 still accepted as rounding.
inline constexpr double kCosineSlack = 1e-9;

// Angles by the law of cosines, sides given in any order.
TriangleVerdict triangle_angles(double x, double y, double z);

// |B - C| <= tol for the two angles facing the two largest sides.
// Throws UsageError on a degenerate verdict.
bool is_almost_ultrametric(const TriangleVerdict& v, double tol = kAlmostUltrametricTolerance);

struct Exhaustive {};
struct Sampled {
  std::size_t count = 100000;
  std::uint64_t seed = 1;
};
using MurtaghMode = std::variant<Exhaustive, Sampled>;

struct MurtaghIndex {
  double alpha = 0.0;
  std::size_t almost_ultrametric = 0;
  std::size_t triangles_used = 0;
  std::size_t degenerate_excluded = 0;
};

// Fraction of non-degenerate triangles that are almost ultrametric.
// Requires at least 3 points. alpha is 0 if every triangle is degenerate.
MurtaghIndex murtagh_index(const FiniteMetricSpace& space, const MurtaghMode& mode = Exhaustive{},
                           double tol = kAlmostUltrametricTolerance);

// Exhaustive for n <= 300, otherwise 1e5 seeded samples.
MurtaghMode default_murtagh_mode(std::size_t n, std::uint64_t seed = 1);

}  // namespace ultralocal
