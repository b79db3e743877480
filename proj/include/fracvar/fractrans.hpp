#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracvar/constants.hpp"
#include "fracvar/kernels.hpp"
#include "fracvar/parallel.hpp"
#include "fracvar/path.hpp"

namespace fracvar {

namespace detail {

inline void require_zero_start(const Path& p, const char* who) {
  if (p.values.front() != 0.0)
    throw std::domain_error(std::string(who) + ": path must start at 0");
}

inline void require_origin_grid(const Path& p, const char* who) {
  if (p.t0 != 0.0)
    throw std::domain_error(std::string(who) + ": grid must start at t0 = 0");
}

inline std::vector<double> increments(const Path& p) {
  std::vector<double> d(p.steps());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = p.values[k + 1] - p.values[k];
  return d;
}

inline Path with_values(const Path& like, std::vector<double> v, std::string tag) {
  Path out(like.t0, like.dt, std::move(v), like.meta);
  out.meta.generator = std::move(tag);
  return out;
}

}  // namespace detail

/// X(t_k) = sum_{j<k} w_{k,j} dM_j with w the cell average of (t-s)^alpha.
/// alpha = 0 is the exact identity.
inline Path frac_transform(const Path& m, double alpha) {
  require_frac_order(alpha, "frac_transform");
  detail::require_zero_start(m, "frac_transform");
  if (alpha == 0.0) return m;
  const std::vector<double> dm = detail::increments(m);
  const std::vector<double> w = power_cell_weights(m.steps(), m.dt, alpha);
  return detail::with_values(m, lag_transform(dm, w), "frac");
}

/// Inverse of frac_transform in the continuum:
///   alpha < 0:  M_t = [Gamma(1+a)Gamma(-a)]^{-1} int_0^t (t-s)^{-1-a} X_s ds,
///   alpha > 0:  M_t = [Gamma(1+a)Gamma(1-a)]^{-1} int_0^t (t-s)^{-a} dX_s,
/// both with cell-averaged kernels; X is piecewise interpolated by cell means
/// in the first branch.  alpha = 0 returns the path unchanged.
inline Path inverse_frac_transform(const Path& x, double alpha) {
  require_frac_order(alpha, "inverse_frac_transform");
  detail::require_zero_start(x, "inverse_frac_transform");
  if (alpha == 0.0) return x;
  const std::size_t n = x.steps();
  const double dt = x.dt;
  std::vector<double> out(n + 1, 0.0);
  if (alpha < 0.0) {
    const double c = 1.0 / (std::tgamma(1.0 + alpha) * std::tgamma(-alpha));
    const std::vector<double> w = power_cell_weights(n, dt, -1.0 - alpha);
    std::vector<double> cellmean(n);
    for (std::size_t j = 0; j < n; ++j)
      cellmean[j] = 0.5 * (x.values[j] + x.values[j + 1]);
    for (std::size_t k = 1; k <= n; ++k) {
      double acc = 0.0;
      for (std::size_t j = 0; j < k; ++j) acc += w[k - j] * cellmean[j];
      out[k] = c * acc * dt;
    }
  } else {
    const double c = 1.0 / (std::tgamma(1.0 + alpha) * std::tgamma(1.0 - alpha));
    const std::vector<double> dx = detail::increments(x);
    const std::vector<double> w = power_cell_weights(n, dt, -alpha);
    std::vector<double> acc = lag_transform(dx, w);
    for (std::size_t k = 0; k <= n; ++k) out[k] = c * acc[k];
  }
  return detail::with_values(x, std::move(out), "invfrac");
}

/// M(t_k) = sum_{j<k} (s*_j)^{1/2-H} u_{k,j} dB_j, the martingale transform of
/// the kernel s^{1/2-H}(t-s)^{1/2-H}.  H = 1/2 is the exact identity.
inline Path fundamental_martingale(const Path& b, double h) {
  require_hurst(h, "fundamental_martingale");
  detail::require_zero_start(b, "fundamental_martingale");
  detail::require_origin_grid(b, "fundamental_martingale");
  if (h == 0.5) return b;
  const std::vector<double> db = detail::increments(b);
  return detail::with_values(b, product_kernel_transform(db, b.dt, 0.5 - h, 0.5 - h),
                             "fundamental");
}

/// R(t) = int_0^t (t-s)^{H-1/2} dM_s, shared with frac_transform.
inline Path r_process(const Path& m, double h) {
  require_hurst(h, "r_process");
  return frac_transform(m, h - 0.5);
}

/// Y(t_k) = sum_{j<k} K(t_k, s*_j) dM_j with K the inner reconstruction kernel.
inline Path y_process(const Path& m, double h, const YKernelTable& table) {
  require_hurst(h, "y_process");
  detail::require_zero_start(m, "y_process");
  detail::require_origin_grid(m, "y_process");
  if (table.steps() != m.steps())
    throw std::invalid_argument("y_process: kernel table size mismatch");
  const std::vector<double> dm = detail::increments(m);
  const std::size_t n = m.steps();
  std::vector<double> out(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < k; ++j) acc += table(k, j) * dm[j];
    out[k] = acc;
  }
  return detail::with_values(m, std::move(out), "y");
}

inline Path y_process(const Path& m, double h) {
  require_hurst(h, "y_process");
  const YKernelTable table(m.steps(), m.dt, h);
  return y_process(m, h, table);
}

/// B(t) = d_H [ t^{H-1/2} R_t - (H-1/2) Y_t ], recovering the driving path
/// from its fundamental martingale.  H = 1/2 is the exact identity.
inline Path reconstruct_b(const Path& m, double h, const YKernelTable& table) {
  require_hurst(h, "reconstruct_b");
  detail::require_zero_start(m, "reconstruct_b");
  detail::require_origin_grid(m, "reconstruct_b");
  if (h == 0.5) return m;
  const Path r = r_process(m, h);
  const Path y = y_process(m, h, table);
  const double d = d_h(h);
  const double hm = h - 0.5;
  const std::size_t n = m.steps();
  std::vector<double> out(n + 1);
  out[0] = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double t = m.time(k);
    out[k] = d * (std::pow(t, hm) * r.values[k] - hm * y.values[k]);
  }
  return detail::with_values(m, std::move(out), "reconstruct");
}

inline Path reconstruct_b(const Path& m, double h) {
  require_hurst(h, "reconstruct_b");
  if (h == 0.5) {
    detail::require_zero_start(m, "reconstruct_b");
    detail::require_origin_grid(m, "reconstruct_b");
    return m;
  }
  const YKernelTable table(m.steps(), m.dt, h);
  return reconstruct_b(m, h, table);
}

/// The perturbation built from a time-changed Brownian motion: the same
/// composition as reconstruct_b applied to N, restricted to H in (1/2, 3/4).
inline Path counterexample_y(const Path& nPath, double h, const YKernelTable& table) {
  if (!(h > 0.5 && h < 0.75))
    throw std::domain_error("counterexample_y: requires H in (1/2, 3/4)");
  Path out = reconstruct_b(nPath, h, table);
  out.meta.generator = "counterexample-y";
  return out;
}

inline Path counterexample_y(const Path& nPath, double h) {
  if (!(h > 0.5 && h < 0.75))
    throw std::domain_error("counterexample_y: requires H in (1/2, 3/4)");
  const YKernelTable table(nPath.steps(), nPath.dt, h);
  return counterexample_y(nPath, h, table);
}

// ---------------------------------------------------------------------------
// Ensemble-level driver: shared kernel tables, parallel over paths
// ---------------------------------------------------------------------------

enum class TransformOp { frac, invfrac, fundamental, reconstruct, counterexample_y };

inline Ensemble transform_ensemble(const Ensemble& in, TransformOp op, double param) {
  Ensemble out;
  out.grid = in.grid;
  out.master_seed = in.master_seed;
  out.paths.resize(in.size());
  std::optional<YKernelTable> table;
  if (op == TransformOp::reconstruct || op == TransformOp::counterexample_y) {
    require_hurst(param, "transform_ensemble");
    if (param != 0.5) table.emplace(in.grid.steps, in.grid.dt, param);
  }
  const char* tag = "transform";
  switch (op) {
    case TransformOp::frac: tag = "frac"; break;
    case TransformOp::invfrac: tag = "invfrac"; break;
    case TransformOp::fundamental: tag = "fundamental"; break;
    case TransformOp::reconstruct: tag = "reconstruct"; break;
    case TransformOp::counterexample_y: tag = "counterexample-y"; break;
  }
  out.generator = tag;
  parallel_for(in.size(), [&](std::size_t k) {
    const Path p = in.path(k);
    switch (op) {
      case TransformOp::frac:
        out.paths[k] = frac_transform(p, param).values;
        break;
      case TransformOp::invfrac:
        out.paths[k] = inverse_frac_transform(p, param).values;
        break;
      case TransformOp::fundamental:
        out.paths[k] = fundamental_martingale(p, param).values;
        break;
      case TransformOp::reconstruct:
        out.paths[k] = table ? reconstruct_b(p, param, *table).values
                             : reconstruct_b(p, param).values;
        break;
      case TransformOp::counterexample_y:
        out.paths[k] = table ? counterexample_y(p, param, *table).values
                             : counterexample_y(p, param).values;
        break;
    }
  });
  return out;
}

}  // namespace fracvar
