#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cvb/basis.hpp"
#include "cvb/correspondence.hpp"
#include "cvb/error.hpp"
#include "cvb/fit1d.hpp"
#include "cvb/fit2d.hpp"
#include "cvb/raster.hpp"
#include "cvb/samples.hpp"

namespace cvb {

/// Outcome of one of the four component fits.
struct SubFitStats {
  std::size_t terms = 0;
  double max_abs_residual = 0.0;
  double rms_residual = 0.0;
  bool converged = false;

  friend bool operator==(const SubFitStats&, const SubFitStats&) = default;
};

/// Pixel <-> world mapping as four scalar bivariate fits. The forward pair
/// shares the (u, v) domain maps, the inverse pair the (X, Y) maps.
struct CalibrationModel {
  ChebModel2D fwd_x;  ///< (u, v) -> X
  ChebModel2D fwd_y;  ///< (u, v) -> Y
  ChebModel2D inv_u;  ///< (X, Y) -> u
  ChebModel2D inv_v;  ///< (X, Y) -> v

  double epsilon = 0.0;          ///< forward target, world units
  double inverse_epsilon = 0.0;  ///< inverse target, pixels
  std::size_t degree_bound = 8;
  SubFitStats stats_fwd_x, stats_fwd_y, stats_inv_u, stats_inv_v;
};

namespace detail {

inline SubFitStats stats_of(const FitReport& r, std::size_t m) {
  return {r.terms_used, r.max_abs_residual, r.l2_residual / std::sqrt(static_cast<double>(m)), r.converged};
}

inline ChebModel2D fit_component(const std::vector<double>& xs, const std::vector<double>& ys,
                                 const std::vector<double>& zs, const DomainMap& xmap, const DomainMap& ymap,
                                 const FitConfig& config, const char* name, SubFitStats& stats) {
  std::vector<Point2D> pts;
  pts.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) pts.push_back({xmap.forward(xs[i]), ymap.forward(ys[i]), zs[i]});
  try {
    auto [model, report] = cvb_approximate_2d(SampleSet2D(std::move(pts)), config);
    if (model.coeffs.empty()) throw FitError("no usable terms");
    model.xmap = xmap;
    model.ymap = ymap;
    stats = stats_of(report, xs.size());
    return model;
  } catch (const Error& e) {
    throw CalibrationError(std::string("sub-fit ") + name + ": " + e.what());
  }
}

inline void require_distinct(const std::vector<double>& a, const std::vector<double>& b, const char* what) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = i + 1; k < a.size(); ++k)
      if (a[i] == a[k] && b[i] == b[k])
        throw ValidationError(std::string("duplicate ") + what + " pair at rows " + std::to_string(i) + " and " +
                              std::to_string(k));
}

}  // namespace detail

/// Fits forward (pixel -> world) and inverse (world -> pixel) models from
/// point correspondences. `config.epsilon` is the forward target in world
/// units; the inverse fits use `inverse_epsilon` (pixels) when given, else
/// the same value. Each coordinate axis is normalized over the data with 1%
/// padding.
[[nodiscard]] inline CalibrationModel calibrate(const std::vector<Correspondence>& pairs, const FitConfig& config,
                                                std::optional<double> inverse_epsilon = std::nullopt) {
  config.validate();
  if (pairs.size() < 3) throw ValidationError("calibration needs at least 3 correspondences");
  std::vector<double> us, vs, Xs, Ys;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& c = pairs[i];
    if (!std::isfinite(c.u) || !std::isfinite(c.v) || !std::isfinite(c.X) || !std::isfinite(c.Y))
      throw ValidationError("correspondence " + std::to_string(i) + " is not finite");
    us.push_back(c.u);
    vs.push_back(c.v);
    Xs.push_back(c.X);
    Ys.push_back(c.Y);
  }
  detail::require_distinct(us, vs, "pixel (u,v)");
  detail::require_distinct(Xs, Ys, "world (X,Y)");

  const auto umap = DomainMap::covering(us);
  const auto vmap = DomainMap::covering(vs);
  const auto xmap = DomainMap::covering(Xs);
  const auto ymap = DomainMap::covering(Ys);

  CalibrationModel model;
  model.epsilon = config.epsilon;
  model.inverse_epsilon = inverse_epsilon.value_or(config.epsilon);
  model.degree_bound = config.max_terms;
  auto inv_config = config;
  inv_config.epsilon = model.inverse_epsilon;
  inv_config.validate();

  model.fwd_x = detail::fit_component(us, vs, Xs, umap, vmap, config, "fwd_x", model.stats_fwd_x);
  model.fwd_y = detail::fit_component(us, vs, Ys, umap, vmap, config, "fwd_y", model.stats_fwd_y);
  model.inv_u = detail::fit_component(Xs, Ys, us, xmap, ymap, inv_config, "inv_u", model.stats_inv_u);
  model.inv_v = detail::fit_component(Xs, Ys, vs, xmap, ymap, inv_config, "inv_v", model.stats_inv_v);
  return model;
}

[[nodiscard]] inline WorldPoint map_point(const CalibrationModel& model, double u, double v,
                                          Diagnostics* diag = nullptr) {
  return {eval_model_2d(model.fwd_x, u, v, diag), eval_model_2d(model.fwd_y, u, v, diag)};
}

[[nodiscard]] inline PixelPoint inverse_map_point(const CalibrationModel& model, double X, double Y,
                                                  Diagnostics* diag = nullptr) {
  return {eval_model_2d(model.inv_u, X, Y, diag), eval_model_2d(model.inv_v, X, Y, diag)};
}

/// Output raster geometry: `width` x `height` pixels covering the world
/// rectangle [x_min, x_max] x [y_min, y_max]; row 0 is at y_min.
struct WarpSpec {
  std::size_t width = 0;
  std::size_t height = 0;
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;
  std::uint8_t fill = 0;
};

/// Inverse-mapping warp with nearest-neighbour sampling. Pixel (c, r) covers
/// [c, c+1) x [r, r+1) in image coordinates, so a source coordinate u lands
/// in column floor(u).
[[nodiscard]] inline Raster warp_image(const CalibrationModel& model, const Raster& image, const WarpSpec& spec,
                                       Diagnostics* diag = nullptr) {
  if (model.inv_u.coeffs.empty() || model.inv_v.coeffs.empty())
    throw CalibrationError("warp requires the inverse (world -> pixel) fits");
  if (spec.width == 0 || spec.height == 0) throw ArgumentError("warp output must have positive size");
  if (!(spec.x_max > spec.x_min) || !(spec.y_max > spec.y_min)) throw ArgumentError("warp window is empty");

  Raster out(spec.width, spec.height, image.channels, spec.fill);
  const double sx = (spec.x_max - spec.x_min) / static_cast<double>(spec.width);
  const double sy = (spec.y_max - spec.y_min) / static_cast<double>(spec.height);
  for (std::size_t r = 0; r < spec.height; ++r) {
    const double Y = spec.y_min + (static_cast<double>(r) + 0.5) * sy;
    for (std::size_t c = 0; c < spec.width; ++c) {
      const double X = spec.x_min + (static_cast<double>(c) + 0.5) * sx;
      const auto src = inverse_map_point(model, X, Y, diag);
      const double col = std::floor(src.u);
      const double row = std::floor(src.v);
      if (!(col >= 0.0 && row >= 0.0 && col < static_cast<double>(image.width) &&
            row < static_cast<double>(image.height)))
        continue;
      const auto* s = image.at(static_cast<std::size_t>(col), static_cast<std::size_t>(row));
      auto* d = out.at(c, r);
      for (std::size_t ch = 0; ch < image.channels; ++ch) d[ch] = s[ch];
    }
  }
  return out;
}

}  // namespace cvb
