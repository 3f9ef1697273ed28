#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cvb/error.hpp"

namespace cvb {

/// Minimum separation between two sample abscissae (or sample pairs).
inline constexpr double kMinSampleGap = 1e-12;

/// Slack allowed on the normalized interval [-1, 1].
inline constexpr double kDomainSlack = 1e-12;

struct Point1D {
  double x;
  double y;
};

struct Point2D {
  double x;
  double y;
  double z;
};

/// Univariate samples on the normalized interval [-1, 1].
///
/// The abscissae are pairwise distinct; order is preserved as given.
class SampleSet1D {
 public:
  explicit SampleSet1D(std::vector<Point1D> points) : points_(std::move(points)) {
    if (points_.empty()) throw ArgumentError("sample set must contain at least one point");
    std::vector<double> xs;
    xs.reserve(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const auto& p = points_[i];
      if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw ValidationError("sample " + std::to_string(i) + " is not finite");
      if (std::abs(p.x) > 1.0 + kDomainSlack)
        throw ValidationError("sample " + std::to_string(i) + " lies outside [-1, 1]");
      xs.push_back(p.x);
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 1; i < xs.size(); ++i) {
      if (xs[i] - xs[i - 1] <= kMinSampleGap)
        throw ValidationError("sample abscissae are not distinct (x = " + std::to_string(xs[i]) + ")");
    }
  }

  SampleSet1D(std::span<const double> xs, std::span<const double> ys) : SampleSet1D(zip(xs, ys)) {}

  [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
  [[nodiscard]] const std::vector<Point1D>& points() const noexcept { return points_; }
  [[nodiscard]] const Point1D& operator[](std::size_t i) const { return points_[i]; }

  /// Target vector (the y values, in sample order).
  [[nodiscard]] std::vector<double> targets() const {
    std::vector<double> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(p.y);
    return out;
  }

 private:
  static std::vector<Point1D> zip(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw ArgumentError("x and y sample counts differ");
    std::vector<Point1D> out;
    out.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out.push_back({xs[i], ys[i]});
    return out;
  }

  std::vector<Point1D> points_;
};

/// Bivariate samples with (x, y) in [-1, 1]^2 and pairwise distinct locations.
class SampleSet2D {
 public:
  explicit SampleSet2D(std::vector<Point2D> points) : points_(std::move(points)) {
    if (points_.empty()) throw ArgumentError("sample set must contain at least one point");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const auto& p = points_[i];
      if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
        throw ValidationError("sample " + std::to_string(i) + " is not finite");
      if (std::abs(p.x) > 1.0 + kDomainSlack || std::abs(p.y) > 1.0 + kDomainSlack)
        throw ValidationError("sample " + std::to_string(i) + " lies outside [-1, 1]^2");
    }
    // Sort by x so that only neighbours within the gap in x need a full check.
    std::vector<std::size_t> order(points_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return points_[a].x < points_[b].x; });
    for (std::size_t a = 0; a < order.size(); ++a) {
      const auto& p = points_[order[a]];
      for (std::size_t b = a + 1; b < order.size(); ++b) {
        const auto& q = points_[order[b]];
        if (q.x - p.x > kMinSampleGap) break;
        if (std::hypot(q.x - p.x, q.y - p.y) <= kMinSampleGap)
          throw ValidationError("sample locations " + std::to_string(order[a]) + " and " +
                                std::to_string(order[b]) + " are not distinct");
      }
    }
  }

  [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
  [[nodiscard]] const std::vector<Point2D>& points() const noexcept { return points_; }
  [[nodiscard]] const Point2D& operator[](std::size_t i) const { return points_[i]; }

  [[nodiscard]] std::vector<double> targets() const {
    std::vector<double> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(p.z);
    return out;
  }

 private:
  std::vector<Point2D> points_;
};

}  // namespace cvb
