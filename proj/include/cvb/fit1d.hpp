#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cvb/basis.hpp"
#include "cvb/error.hpp"
#include "cvb/orthogonalize.hpp"
#include "cvb/samples.hpp"

namespace cvb {

struct FitConfig {
  /// Target for the max-abs residual at the samples. Zero runs the full schedule.
  double epsilon = 0.0;
  /// Number of univariate terms, or the triangular degree bound n for
  /// bivariate fits (terms with i + j < n).
  std::size_t max_terms = 8;
  /// Approximation only: repeat the whole visit/revisit schedule this many
  /// more times while the residual is above epsilon. Zero reproduces the
  /// single-pass algorithm.
  std::size_t extra_sweeps = 0;
  /// Interpolation only: second Gram-Schmidt pass. A single classical pass
  /// loses orthogonality on clustered nodes (|o_j . o_k| near 1e-4 relative
  /// for ten random nodes), which ruins exactness.
  bool reorthogonalize = true;

  void validate() const {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ArgumentError("epsilon must be finite and >= 0");
    if (max_terms < 1) throw ArgumentError("max_terms must be >= 1");
  }
};

/// One coefficient update.
struct TraceStep {
  TermIndex term;
  bool revisit = false;
  double increment = 0.0;
  double max_abs_residual = 0.0;
  double l2_residual = 0.0;
  /// Coefficients after this step. Univariate: a_0..a_{n-1}; bivariate:
  /// indexed by position in the visit order.
  std::vector<double> coeffs;
};

struct FitReport {
  std::vector<TraceStep> trace;
  /// Visited terms that ended with a non-zero coefficient.
  std::size_t terms_used = 0;
  bool converged = false;
  std::vector<TermIndex> skipped;
  double max_abs_residual = 0.0;
  double l2_residual = 0.0;
};

/// Counts evaluations that fell outside a model's calibrated interval.
struct Diagnostics {
  std::size_t evaluations = 0;
  std::size_t extrapolations = 0;
};

/// P(x) = sum a_i T_i(xmap.forward(x)).
struct ChebModel1D {
  std::vector<double> coeffs;
  DomainMap xmap;

  void validate() const {
    if (coeffs.empty()) throw ArgumentError("model has no coefficients");
    for (double a : coeffs)
      if (!std::isfinite(a)) throw ArgumentError("model coefficient is not finite");
  }
};

/// delta_i = gamma_i - sum_j a_j tau_j[i]
[[nodiscard]] inline std::vector<double> residual(std::span<const double> gamma, std::span<const TermVector> terms,
                                                  std::span<const double> coeffs) {
  if (terms.size() != coeffs.size()) throw ArgumentError("term and coefficient counts differ");
  std::vector<double> delta(gamma.begin(), gamma.end());
  for (std::size_t j = 0; j < terms.size(); ++j) {
    if (terms[j].size() != gamma.size())
      throw ArgumentError("term vector " + std::to_string(j) + " does not match the sample count");
    if (coeffs[j] == 0.0) continue;
    for (std::size_t i = 0; i < delta.size(); ++i) delta[i] -= coeffs[j] * terms[j].components[i];
  }
  return delta;
}

namespace detail {

inline std::vector<TermVector> univariate_terms(const SampleSet1D& samples, std::size_t n) {
  std::vector<TermVector> terms;
  terms.reserve(n);
  for (std::size_t j = 0; j < n; ++j) terms.push_back(term_vector_1d(j, samples));
  return terms;
}

inline void finish_report(FitReport& report, std::span<const double> delta, std::span<const double> coeffs,
                          const std::vector<bool>& visited, double epsilon) {
  report.max_abs_residual = max_abs(delta);
  report.l2_residual = norm2(delta);
  report.converged = report.max_abs_residual <= epsilon;
  report.terms_used = 0;
  for (std::size_t j = 0; j < coeffs.size(); ++j)
    if (visited[j] && coeffs[j] != 0.0) ++report.terms_used;
}

inline void subtract_scaled(std::vector<double>& delta, double s, std::span<const double> v) {
  for (std::size_t i = 0; i < delta.size(); ++i) delta[i] -= s * v[i];
}

}  // namespace detail

/// Interpolation through orthogonal components of the term vectors.
///
/// Each step adds the projection of the residual on o_j, distributed over
/// a_0..a_j through the q triangle. With max_terms equal to the sample
/// count the result interpolates the data.
[[nodiscard]] inline std::pair<ChebModel1D, FitReport> cvb_interpolate(const SampleSet1D& samples,
                                                                      const FitConfig& config) {
  config.validate();
  const std::size_t m = samples.size();
  const std::size_t n = config.max_terms;
  if (n > m)
    throw ArgumentError("interpolation uses at most " + std::to_string(m) + " terms for " + std::to_string(m) +
                        " samples");

  const auto terms = detail::univariate_terms(samples, n);
  const auto gamma = samples.targets();

  OrthoSet os;
  try {
    os = orthogonalize(terms, {.reorthogonalize = config.reorthogonalize});
  } catch (const DegenerateInputError& e) {
    throw FitError(std::string("term 0: ") + e.what());
  }

  ChebModel1D model{std::vector<double>(n, 0.0), DomainMap{}};
  FitReport report;
  std::vector<bool> visited(n, false);
  for (auto j : os.skipped) report.skipped.push_back({j, 0});

  // Coefficients accumulate in extended precision; the q entries can be
  // large with alternating signs. The error vector is carried forward as
  // delta - Oinc o_j (the same vector, since sum_k q_jk tau_k = o_j): forming
  // gamma - sum a_k tau_k afresh cancels large terms and breaks linearity
  // in gamma at the 1e-9 level on clustered nodes.
  std::vector<long double> acc(n, 0.0L);
  auto delta = gamma;
  for (std::size_t j = 0; j < n; ++j) {
    if (!os.retained[j]) continue;
    visited[j] = true;
    const auto& o = os.ortho[j];
    const double inc = dot(o, delta) / dot(o, o);
    for (std::size_t k = 0; k <= j; ++k) {
      acc[k] += static_cast<long double>(inc) * os.q[j][k];
      model.coeffs[k] = static_cast<double>(acc[k]);
    }
    detail::subtract_scaled(delta, inc, o);
    report.trace.push_back({{j, 0}, false, inc, max_abs(delta), norm2(delta), model.coeffs});
  }
  // The report states the residual of the returned coefficients.
  detail::finish_report(report, residual(gamma, terms, model.coeffs), model.coeffs, visited, config.epsilon);
  return {std::move(model), std::move(report)};
}

/// Approximation by projecting the residual onto the term vectors themselves.
///
/// Terms are visited in increasing order while the max-abs residual exceeds
/// epsilon. Each visit of tau_j is followed by revisits of tau_{j-1}, ..., tau_0,
/// so the most preferred term is adjusted last. Every update is
/// a_k += (tau_k . delta) / (tau_k . tau_k). Degenerate term vectors (self dot
/// at most 1e-12 m) are skipped and reported.
[[nodiscard]] inline std::pair<ChebModel1D, FitReport> cvb_approximate(const SampleSet1D& samples,
                                                                      const FitConfig& config) {
  config.validate();
  const std::size_t m = samples.size();
  const std::size_t n = config.max_terms;
  const auto terms = detail::univariate_terms(samples, n);

  std::vector<double> self_dot(n);
  std::vector<bool> usable(n);
  FitReport report;
  for (std::size_t j = 0; j < n; ++j) {
    self_dot[j] = dot(terms[j].components, terms[j].components);
    usable[j] = self_dot[j] > 1e-12 * static_cast<double>(m);
    if (!usable[j]) report.skipped.push_back({j, 0});
  }

  ChebModel1D model{std::vector<double>(n, 0.0), DomainMap{}};
  std::vector<bool> visited(n, false);
  auto delta = samples.targets();

  auto update = [&](std::size_t k, bool revisit) {
    const double inc = dot(terms[k].components, delta) / self_dot[k];
    model.coeffs[k] += inc;
    detail::subtract_scaled(delta, inc, terms[k].components);
    report.trace.push_back({{k, 0}, revisit, inc, max_abs(delta), norm2(delta), model.coeffs});
  };

  for (std::size_t sweep = 0; sweep <= config.extra_sweeps; ++sweep) {
    for (std::size_t j = 0; j < n && max_abs(delta) > config.epsilon; ++j) {
      if (!usable[j]) continue;
      visited[j] = true;
      update(j, false);
      for (std::size_t k = j; k-- > 0;)
        if (usable[k]) update(k, true);
    }
    if (max_abs(delta) <= config.epsilon) break;
  }
  detail::finish_report(report, delta, model.coeffs, visited, config.epsilon);
  return {std::move(model), std::move(report)};
}

/// Sum of a_i T_i at xmap.forward(x). Points outside the map's source
/// interval are still evaluated (by the unchecked recurrence) and counted
/// in `diag` as extrapolations.
[[nodiscard]] inline double eval_model_1d(const ChebModel1D& model, double x, Diagnostics* diag = nullptr) {
  const double t = model.xmap.forward(x);
  const bool inside = model.xmap.contains(x);
  if (diag) {
    ++diag->evaluations;
    if (!inside) ++diag->extrapolations;
  }
  const auto tv = cheb_values(model.coeffs.size(), inside ? std::clamp(t, -1.0, 1.0) : t);
  double s = 0.0;
  for (std::size_t i = 0; i < model.coeffs.size(); ++i) s += model.coeffs[i] * tv[i];
  return s;
}

}  // namespace cvb
