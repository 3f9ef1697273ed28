#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cvb/basis.hpp"
#include "cvb/error.hpp"
#include "cvb/fit1d.hpp"
#include "cvb/samples.hpp"

namespace cvb {

/// P(x, y) = sum a_{i,j} T_i(x') T_j(y') over a triangular index set i + j < n,
/// where x' and y' are the normalized coordinates. Keys iterate in visit order.
struct ChebModel2D {
  std::map<TermIndex, double, VisitOrderLess> coeffs;
  DomainMap xmap;
  DomainMap ymap;
  std::size_t degree_bound = 1;

  void validate() const {
    if (degree_bound < 1) throw ArgumentError("degree bound must be >= 1");
    for (const auto& [t, a] : coeffs) {
      if (t.degree() >= degree_bound)
        throw ArgumentError("term <" + std::to_string(t.i) + "," + std::to_string(t.j) +
                            "> violates the triangular bound " + std::to_string(degree_bound));
      if (!std::isfinite(a)) throw ArgumentError("model coefficient is not finite");
    }
  }
};

/// Every <i,j> with i + j < n, ordered by total degree, then min(i, j), then i.
[[nodiscard]] inline std::vector<TermIndex> visit_order(std::size_t n) {
  if (n == 0) throw ArgumentError("visit_order requires n >= 1");
  std::vector<TermIndex> order;
  order.reserve(n * (n + 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; i + j < n; ++j) order.push_back({i, j});
  std::sort(order.begin(), order.end(), VisitOrderLess{});
  return order;
}

/// Terms preceding `last` in `order` that it dominates componentwise, most
/// recently visited first.
[[nodiscard]] inline std::vector<TermIndex> revisit_set(const TermIndex& last, const std::vector<TermIndex>& order) {
  const auto pos = std::find(order.begin(), order.end(), last);
  if (pos == order.end()) throw ArgumentError("term is not part of the visit order");
  std::vector<TermIndex> out;
  for (auto it = std::make_reverse_iterator(pos); it != order.rend(); ++it)
    if (it->i <= last.i && it->j <= last.j) out.push_back(*it);
  return out;
}

/// Bivariate approximation: walk the visit order while the max-abs residual
/// exceeds epsilon; after each visit, revisit the dominated predecessors in
/// reverse order. config.max_terms is the triangular degree bound.
/// Terms whose self dot is at most 1e-12 m are skipped, recorded, and never
/// revisited; a zero increment still counts as a visit.
[[nodiscard]] inline std::pair<ChebModel2D, FitReport> cvb_approximate_2d(const SampleSet2D& samples,
                                                                         const FitConfig& config) {
  config.validate();
  const std::size_t m = samples.size();
  const auto order = visit_order(config.max_terms);
  const std::size_t count = order.size();

  // Per-sample Chebyshev values, then term vectors as products.
  std::vector<std::vector<double>> tx(m), ty(m);
  for (std::size_t s = 0; s < m; ++s) {
    tx[s] = cheb_values(config.max_terms, std::clamp(samples[s].x, -1.0, 1.0));
    ty[s] = cheb_values(config.max_terms, std::clamp(samples[s].y, -1.0, 1.0));
  }
  std::vector<TermVector> terms(count);
  std::vector<double> self_dot(count);
  std::vector<bool> usable(count);
  FitReport report;
  for (std::size_t t = 0; t < count; ++t) {
    terms[t].index = order[t];
    terms[t].components.resize(m);
    for (std::size_t s = 0; s < m; ++s) terms[t].components[s] = tx[s][order[t].i] * ty[s][order[t].j];
    self_dot[t] = dot(terms[t].components, terms[t].components);
    usable[t] = self_dot[t] > 1e-12 * static_cast<double>(m);
    if (!usable[t]) report.skipped.push_back(order[t]);
  }

  // Revisit lists as positions in the order.
  std::vector<std::vector<std::size_t>> revisits(count);
  for (std::size_t t = 0; t < count; ++t)
    for (std::size_t r = t; r-- > 0;)
      if (order[r].i <= order[t].i && order[r].j <= order[t].j && usable[r]) revisits[t].push_back(r);

  std::vector<double> a(count, 0.0);
  std::vector<bool> visited(count, false);
  auto delta = samples.targets();

  auto update = [&](std::size_t t, bool revisit) {
    const double inc = dot(terms[t].components, delta) / self_dot[t];
    a[t] += inc;
    detail::subtract_scaled(delta, inc, terms[t].components);
    report.trace.push_back({order[t], revisit, inc, max_abs(delta), norm2(delta), a});
  };

  for (std::size_t sweep = 0; sweep <= config.extra_sweeps; ++sweep) {
    for (std::size_t t = 0; t < count && max_abs(delta) > config.epsilon; ++t) {
      if (!usable[t]) continue;
      visited[t] = true;
      update(t, false);
      for (auto r : revisits[t]) update(r, true);
    }
    if (max_abs(delta) <= config.epsilon) break;
  }

  detail::finish_report(report, delta, a, visited, config.epsilon);
  ChebModel2D model;
  model.degree_bound = config.max_terms;
  for (std::size_t t = 0; t < count; ++t)
    if (visited[t]) model.coeffs.emplace(order[t], a[t]);
  return {std::move(model), std::move(report)};
}

/// Evaluate at raw coordinates; out-of-range points are extrapolated and counted.
[[nodiscard]] inline double eval_model_2d(const ChebModel2D& model, double x, double y,
                                          Diagnostics* diag = nullptr) {
  const bool inside = model.xmap.contains(x) && model.ymap.contains(y);
  if (diag) {
    ++diag->evaluations;
    if (!inside) ++diag->extrapolations;
  }
  double tx = model.xmap.forward(x);
  double ty = model.ymap.forward(y);
  if (inside) {
    tx = std::clamp(tx, -1.0, 1.0);
    ty = std::clamp(ty, -1.0, 1.0);
  }
  std::size_t top = 0;
  for (const auto& [t, a] : model.coeffs) top = std::max(top, std::max(t.i, t.j) + 1);
  const auto vx = cheb_values(top, tx);
  const auto vy = cheb_values(top, ty);
  double s = 0.0;
  for (const auto& [t, a] : model.coeffs) s += a * vx[t.i] * vy[t.j];
  return s;
}

}  // namespace cvb
