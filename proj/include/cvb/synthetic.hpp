#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "cvb/correspondence.hpp"
#include "cvb/error.hpp"
#include "cvb/samples.hpp"

namespace cvb {

/// 1 / (1 + 25 x^2)
[[nodiscard]] constexpr double runge(double x) noexcept { return 1.0 / (1.0 + 25.0 * x * x); }

/// m equispaced nodes on [-1, 1], endpoints included, sampling runge().
[[nodiscard]] inline SampleSet1D gen_runge(std::size_t m) {
  if (m < 2) throw ArgumentError("gen_runge requires m >= 2");
  std::vector<Point1D> pts;
  pts.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    // -1 + 2i/(m-1), computed symmetrically so the middle node is exactly 0.
    const double x = static_cast<double>(2 * i) / static_cast<double>(m - 1) - 1.0;
    pts.push_back({x, runge(x)});
  }
  return SampleSet1D(std::move(pts));
}

/// Fixed 9-point data set that is flat except for a single hump at x = 0.
[[nodiscard]] inline SampleSet1D gen_humped_flat() {
  return SampleSet1D({{-1.0, 0.0},
                      {-0.75, 0.0},
                      {-0.5, 0.0},
                      {-0.25, 0.5},
                      {0.0, 1.0},
                      {0.25, 0.5},
                      {0.5, 0.0},
                      {0.75, 0.0},
                      {1.0, 0.0}});
}

namespace noisy_line {
inline constexpr std::size_t kPoints = 9;
inline constexpr double kMinGap = 0.05;
inline constexpr double kNoise = 0.05;
inline constexpr double kSlope = 0.5;
inline constexpr double kIntercept = 0.1;
}  // namespace noisy_line

namespace detail {
// Uniform double in [0, 1) from the top 53 bits; stable across standard libraries.
inline double unit_uniform(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
}  // namespace detail

/// Nine unevenly spaced points near y = 0.5x + 0.1 with uniform noise in
/// [-0.05, 0.05]. Abscissae come from a golden-ratio sequence with a seeded
/// offset, rejecting candidates closer than 0.05 to an accepted one.
[[nodiscard]] inline SampleSet1D gen_noisy_line(std::uint64_t seed) {
  using namespace noisy_line;
  std::mt19937_64 gen(seed);
  const double offset = detail::unit_uniform(gen);
  const double step = std::numbers::phi - 1.0;
  std::vector<double> xs;
  for (std::size_t k = 0; xs.size() < kPoints; ++k) {
    const double u = std::fmod(offset + static_cast<double>(k) * step, 1.0);
    const double x = 2.0 * u - 1.0;
    const bool clear = std::none_of(xs.begin(), xs.end(), [&](double a) { return std::abs(a - x) < kMinGap; });
    if (clear) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  std::vector<Point1D> pts;
  pts.reserve(kPoints);
  for (double x : xs) {
    const double noise = kNoise * (2.0 * detail::unit_uniform(gen) - 1.0);
    pts.push_back({x, kSlope * x + kIntercept + noise});
  }
  return SampleSet1D(std::move(pts));
}

/// Ground-truth camera: world millimetres to pixels through a scale, a
/// rotation about the image centre and a radial (pincushion for kappa > 0)
/// term r' = r (1 + kappa (r/R)^2), R the half diagonal of the frame.
/// The world origin projects to the centre.
struct DistortionParams {
  double rotation = 0.0;  ///< radians; positive turns clockwise on screen (v grows downward)
  double pincushion = 0.0;
  double u0 = 0.0;
  double v0 = 0.0;
  double scale = 1.0;  ///< pixels per millimetre
  double width = 640.0;
  double height = 480.0;

  void validate() const {
    if (!(scale > 0.0)) throw ArgumentError("distortion scale must be > 0");
    if (!(std::abs(pincushion) < 1.0)) throw ArgumentError("pincushion coefficient must satisfy |kappa| < 1");
    if (!(width > 0.0) || !(height > 0.0)) throw ArgumentError("image size must be positive");
  }

  [[nodiscard]] double half_diagonal() const noexcept { return 0.5 * std::hypot(width, height); }

  /// 640x480 frame, 5 degree rotation, 0.5 px/mm, kappa = 0.01: a corner of
  /// the frame moves kappa * R = 4 px relative to the rotation-only map.
  static DistortionParams acceptance_default() {
    DistortionParams p;
    p.rotation = 5.0 * std::numbers::pi / 180.0;
    p.pincushion = 0.01;
    p.u0 = 320.0;
    p.v0 = 240.0;
    p.scale = 0.5;
    return p;
  }

  /// Same camera without the radial term.
  [[nodiscard]] DistortionParams without_radial() const {
    auto p = *this;
    p.pincushion = 0.0;
    return p;
  }
};

[[nodiscard]] inline PixelPoint distort(const DistortionParams& params, double X, double Y) {
  const double dx = params.scale * X;
  const double dy = params.scale * Y;
  const double c = std::cos(params.rotation);
  const double s = std::sin(params.rotation);
  const double rx = c * dx - s * dy;
  const double ry = s * dx + c * dy;
  const double rr = std::hypot(rx, ry) / params.half_diagonal();
  const double f = 1.0 + params.pincushion * rr * rr;
  return {params.u0 + f * rx, params.v0 + f * ry};
}

/// A regular world grid (cols x rows, inclusive bounds) plus extra points.
struct GridPattern {
  std::size_t cols = 0;
  std::size_t rows = 0;
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
  std::vector<WorldPoint> extra;

  /// 3 x 6 interior grid over the reachable region plus the upper-left and
  /// upper-right corners of the workspace: 20 key points.
  static GridPattern default_pattern() {
    return {3, 6, -250.0, 250.0, -350.0, 350.0, {{-560.0, -420.0}, {560.0, -420.0}}};
  }

  [[nodiscard]] std::size_t size() const noexcept { return cols * rows + extra.size(); }

  [[nodiscard]] std::vector<WorldPoint> points() const {
    std::vector<WorldPoint> out;
    auto at = [](double lo, double hi, std::size_t k, std::size_t count) {
      return count == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
    };
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) out.push_back({at(x_min, x_max, c, cols), at(y_min, y_max, r, rows)});
    out.insert(out.end(), extra.begin(), extra.end());
    return out;
  }
};

[[nodiscard]] inline std::vector<Correspondence> gen_correspondences(const DistortionParams& params,
                                                                     const GridPattern& pattern) {
  params.validate();
  if (pattern.size() < 3) throw ArgumentError("a correspondence pattern needs at least 3 points");
  std::vector<Correspondence> out;
  for (const auto& w : pattern.points()) {
    const auto px = distort(params, w.X, w.Y);
    out.push_back({px.u, px.v, w.X, w.Y});
  }
  return out;
}

}  // namespace cvb
