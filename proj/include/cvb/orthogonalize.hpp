#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cvb/basis.hpp"
#include "cvb/error.hpp"

namespace cvb {

struct OrthoConfig {
  /// Relative threshold on |o_j|^2 / |tau_j|^2 below which a term is dropped.
  double degenerate_tol = 1e-12;
  /// Repeat the subtraction once more per term; the corrections are added
  /// into p so both triangle relations still hold.
  bool reorthogonalize = true;
};

/// Orthogonal components of a term-vector sequence and the coefficient
/// triangles relating them to the original terms:
///
///   o_j = tau_j - sum_{k<j} p[j][k] o_k
///   o_j = sum_{k<=j} q[j][k] tau_k
///
/// Row j of `p` has j entries and row j of `q` has j + 1 entries.
/// Dropped (degenerate) terms have a zero o_j, a zero q row, and take no part
/// in later projections.
struct OrthoSet {
  std::vector<std::vector<double>> ortho;
  std::vector<std::vector<double>> p;
  std::vector<std::vector<double>> q;
  std::vector<std::size_t> skipped;
  std::vector<bool> retained;

  [[nodiscard]] std::size_t size() const noexcept { return ortho.size(); }
};

/// Classical Gram-Schmidt in the form that keeps the q triangle exact.
[[nodiscard]] inline OrthoSet orthogonalize(std::span<const TermVector> terms, const OrthoConfig& config = {}) {
  if (terms.empty()) throw ArgumentError("orthogonalize requires at least one term vector");
  const std::size_t n = terms.size();
  const std::size_t m = terms.front().size();
  if (m == 0) throw ArgumentError("term vectors must have at least one component");
  for (const auto& t : terms) {
    if (t.size() != m)
      throw ArgumentError("term vector dimension mismatch: expected " + std::to_string(m) + ", got " +
                          std::to_string(t.size()));
  }

  OrthoSet out;
  out.ortho.resize(n);
  out.p.resize(n);
  out.q.resize(n);
  out.retained.assign(n, false);
  std::vector<double> self_dot(n, 0.0);
  std::vector<std::vector<long double>> q_wide(n);

  for (std::size_t j = 0; j < n; ++j) {
    const auto& tau = terms[j].components;
    auto& o = out.ortho[j];
    auto& pj = out.p[j];
    o = tau;
    pj.assign(j, 0.0);

    // p_{j,k} uses tau_j, not the partially reduced vector.
    for (std::size_t k = 0; k < j; ++k) {
      if (!out.retained[k]) continue;
      pj[k] = dot(tau, out.ortho[k]) / self_dot[k];
    }
    for (std::size_t k = 0; k < j; ++k) {
      if (pj[k] == 0.0) continue;
      for (std::size_t i = 0; i < m; ++i) o[i] -= pj[k] * out.ortho[k][i];
    }
    if (config.reorthogonalize) {
      for (std::size_t k = 0; k < j; ++k) {
        if (!out.retained[k]) continue;
        const double c = dot(o, out.ortho[k]) / self_dot[k];
        pj[k] += c;
        for (std::size_t i = 0; i < m; ++i) o[i] -= c * out.ortho[k][i];
      }
    }

    const double tau_sq = dot(tau, tau);
    const double o_sq = dot(o, o);
    if (j == 0 && !(tau_sq > 0.0))
      throw DegenerateInputError("leading term vector is the zero vector");
    if (!(o_sq > config.degenerate_tol * tau_sq)) {
      out.skipped.push_back(j);
      o.assign(m, 0.0);
      pj.assign(j, 0.0);
      out.q[j].assign(j + 1, 0.0);
      q_wide[j].assign(j + 1, 0.0L);
      continue;
    }
    out.retained[j] = true;
    self_dot[j] = o_sq;

    // q_{j,j} = 1, q_{j,k} = -sum_{l=k}^{j-1} p_{j,l} q_{l,k}
    // The recurrence cancels heavily on clustered nodes; it runs in extended
    // precision and is rounded once on output.
    auto& qx = q_wide[j];
    qx.assign(j + 1, 0.0L);
    qx[j] = 1.0L;
    for (std::size_t k = 0; k < j; ++k) {
      long double s = 0.0L;
      for (std::size_t l = k; l < j; ++l) s += static_cast<long double>(pj[l]) * q_wide[l][k];
      qx[k] = -s;
    }
    out.q[j].assign(qx.begin(), qx.end());
  }
  return out;
}

}  // namespace cvb
