#include "ultralocal/murtagh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "ultralocal/error.hpp"

namespace ultralocal {

namespace {

// Angle opposite side x in a triangle with sides x, y, z. Sets `bad` when the
// cosine leaves [-1, 1] by more than the slack.
double opposite_angle(double x, double y, double z, bool& bad) {
  const double cosine = (y * y + z * z - x * x) / (2.0 * y * z);
  if (cosine > 1.0 + kCosineSlack || cosine < -1.0 - kCosineSlack) bad = true;
  return std::acos(std::clamp(cosine, -1.0, 1.0));
}

}  // namespace

TriangleVerdict triangle_angles(double x, double y, double z) {
  if (x < 0 || y < 0 || z < 0) throw UsageError("triangle sides must be non-negative");
  std::array<double, 3> s{x, y, z};
  std::sort(s.begin(), s.end());
  TriangleVerdict v;
  v.a = s[0];
  v.b = s[1];
  v.c = s[2];
  if (v.a < kMinSide) {
    v.degenerate = true;
    return v;
  }
  bool bad = false;
  v.angle_a = opposite_angle(v.a, v.b, v.c, bad);
  v.angle_b = opposite_angle(v.b, v.a, v.c, bad);
  v.angle_c = opposite_angle(v.c, v.a, v.b, bad);
  // Collinear points: the largest angle is pi and the others vanish.
  if (bad || v.a + v.b <= v.c) v.degenerate = true;
  return v;
}

bool is_almost_ultrametric(const TriangleVerdict& v, double tol) {
  if (v.degenerate) throw UsageError("degenerate triangle has no ultrametricity verdict");
  return std::abs(v.angle_c - v.angle_b) <= tol;
}

MurtaghIndex murtagh_index(const FiniteMetricSpace& space, const MurtaghMode& mode, double tol) {
  const auto n = space.size();
  if (n < 3) throw UsageError("Murtagh index needs at least 3 points");
  MurtaghIndex out;
  auto visit = [&](std::size_t i, std::size_t j, std::size_t k) {
    const auto v = triangle_angles(space(i, j), space(j, k), space(i, k));
    if (v.degenerate) {
      ++out.degenerate_excluded;
      return;
    }
    ++out.triangles_used;
    if (is_almost_ultrametric(v, tol)) ++out.almost_ultrametric;
  };

  if (std::holds_alternative<Exhaustive>(mode)) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) visit(i, j, k);
  } else {
    const auto& sampled = std::get<Sampled>(mode);
    std::mt19937_64 rng(sampled.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t draw = 0; draw < sampled.count; ++draw) {
      const auto i = pick(rng);
      auto j = pick(rng);
      while (j == i) j = pick(rng);
      auto k = pick(rng);
      while (k == i || k == j) k = pick(rng);
      visit(i, j, k);
    }
  }
  if (out.triangles_used > 0)
    out.alpha = static_cast<double>(out.almost_ultrametric) / static_cast<double>(out.triangles_used);
  return out;
}

MurtaghMode default_murtagh_mode(std::size_t n, std::uint64_t seed) {
  if (n <= 300) return Exhaustive{};
  return Sampled{100000, seed};
}

}  // namespace ultralocal
