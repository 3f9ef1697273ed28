#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "cvb/error.hpp"
#include "cvb/samples.hpp"

namespace cvb {

/// Affine map from a source interval [lo, hi] onto [-1, 1].
class DomainMap {
 public:
  /// Identity map on [-1, 1].
  constexpr DomainMap() = default;

  DomainMap(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
      throw ArgumentError("domain map requires finite bounds with hi > lo");
  }

  /// Map covering `values` with `padding` (fraction of the span) added on both sides.
  /// A degenerate span is widened to one unit on each side of the value.
  static DomainMap covering(std::span<const double> values, double padding = 0.01) {
    if (values.empty()) throw ArgumentError("cannot build a domain map from no values");
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    const double span = *mx - *mn;
    if (!(span > 0.0)) return {*mn - 1.0, *mx + 1.0};
    return {*mn - padding * span, *mx + padding * span};
  }

  [[nodiscard]] constexpr double lo() const noexcept { return lo_; }
  [[nodiscard]] constexpr double hi() const noexcept { return hi_; }

  /// Source coordinate to [-1, 1]; written so that lo and hi land exactly on -1 and +1.
  [[nodiscard]] constexpr double forward(double x) const noexcept {
    return ((x - lo_) - (hi_ - x)) / (hi_ - lo_);
  }

  [[nodiscard]] constexpr double backward(double t) const noexcept {
    return 0.5 * (lo_ + hi_) + 0.5 * t * (hi_ - lo_);
  }

  [[nodiscard]] constexpr bool contains(double x) const noexcept { return x >= lo_ && x <= hi_; }

  [[nodiscard]] constexpr bool is_identity() const noexcept { return lo_ == -1.0 && hi_ == 1.0; }

  friend constexpr bool operator==(const DomainMap&, const DomainMap&) = default;

 private:
  double lo_ = -1.0;
  double hi_ = 1.0;
};

namespace detail {

// Three-term recurrence without domain checks; used for extrapolated evaluation.
inline double cheb_recurrence(std::size_t j, double x) noexcept {
  if (j == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (std::size_t i = 2; i <= j; ++i) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

inline double clamp_to_domain(double x) {
  if (std::isnan(x) || std::abs(x) > 1.0 + kDomainSlack)
    throw DomainError("Chebyshev argument " + std::to_string(x) + " outside [-1, 1]");
  return std::clamp(x, -1.0, 1.0);
}

}  // namespace detail

/// T_j(x) by the three-term recurrence. Arguments within 1e-12 of the
/// interval are clamped onto it; anything further out is a DomainError.
[[nodiscard]] inline double cheb_eval(std::size_t j, double x) {
  return detail::cheb_recurrence(j, detail::clamp_to_domain(x));
}

/// T_0(x), ..., T_{count-1}(x) in one recurrence pass. No domain check.
[[nodiscard]] inline std::vector<double> cheb_values(std::size_t count, double x) {
  std::vector<double> out(count);
  if (count > 0) out[0] = 1.0;
  if (count > 1) out[1] = x;
  for (std::size_t i = 2; i < count; ++i) out[i] = 2.0 * x * out[i - 1] - out[i - 2];
  return out;
}

/// Zeros of T_n, cos((2j-1)pi/2n) for j = 1..n (descending).
[[nodiscard]] inline std::vector<double> cheb_zeros(std::size_t n) {
  if (n == 0) throw ArgumentError("cheb_zeros requires n >= 1");
  std::vector<double> out(n);
  const double dn = static_cast<double>(n);
  for (std::size_t j = 1; j <= n; ++j)
    out[j - 1] = std::cos(static_cast<double>(2 * j - 1) * std::numbers::pi / (2.0 * dn));
  return out;
}

/// Label of a basis term. Univariate terms use `i` only (j == 0);
/// bivariate terms are T_i(x) T_j(y).
struct TermIndex {
  std::size_t i = 0;
  std::size_t j = 0;

  [[nodiscard]] constexpr std::size_t degree() const noexcept { return i + j; }
  friend constexpr bool operator==(const TermIndex&, const TermIndex&) = default;
};

/// Preference ordering of bivariate terms: total degree, then the smaller
/// component, then i.
struct VisitOrderLess {
  constexpr bool operator()(const TermIndex& a, const TermIndex& b) const noexcept {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    const auto ma = std::min(a.i, a.j);
    const auto mb = std::min(b.i, b.j);
    if (ma != mb) return ma < mb;
    return a.i < b.i;
  }
};

/// Values of one basis polynomial at every sample, in sample order.
struct TermVector {
  TermIndex index;
  std::vector<double> components;

  [[nodiscard]] std::size_t size() const noexcept { return components.size(); }
};

[[nodiscard]] inline TermVector term_vector_1d(std::size_t j, const SampleSet1D& samples) {
  TermVector tv{{j, 0}, {}};
  tv.components.reserve(samples.size());
  for (const auto& p : samples.points()) tv.components.push_back(cheb_eval(j, p.x));
  return tv;
}

[[nodiscard]] inline TermVector term_vector_2d(std::size_t j, std::size_t k, const SampleSet2D& samples) {
  TermVector tv{{j, k}, {}};
  tv.components.reserve(samples.size());
  for (const auto& p : samples.points()) tv.components.push_back(cheb_eval(j, p.x) * cheb_eval(k, p.y));
  return tv;
}

/// Dot product over equally sized ranges.
[[nodiscard]] inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ArgumentError("dot product of vectors with different lengths");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

[[nodiscard]] inline double max_abs(std::span<const double> v) noexcept {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

[[nodiscard]] inline double norm2(std::span<const double> v) noexcept {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace cvb
