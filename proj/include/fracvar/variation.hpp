#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracvar/cascade.hpp"
#include "fracvar/constants.hpp"
#include "fracvar/parallel.hpp"
#include "fracvar/path.hpp"

namespace fracvar {

/// Uniform partition of [a,b] with points t_i = a + (i/n)(b-a).
struct PartitionSpec {
  double a = 0.0;
  double b = 1.0;
  std::size_t n = 1;

  PartitionSpec(double a_, double b_, std::size_t n_) : a(a_), b(b_), n(n_) {
    if (!(a >= 0.0 && a < b)) throw std::domain_error("PartitionSpec: need 0 <= a < b");
    if (n < 1) throw std::domain_error("PartitionSpec: need n >= 1");
  }
};

namespace detail {

/// Start index and stride of the partition on the path grid.
/// Throws resolution_error when points fall between grid nodes.
inline std::pair<std::size_t, std::size_t> partition_on_grid(const Path& x,
                                                             const PartitionSpec& part) {
  const std::size_t ia = grid_index(x, part.a, "partition start");
  const std::size_t ib = grid_index(x, part.b, "partition end");
  const std::size_t span = ib - ia;
  if (part.n > span)
    throw resolution_error("partition finer than the path grid (n=" +
                           std::to_string(part.n) + ", grid cells=" + std::to_string(span) +
                           ")");
  if (span % part.n != 0)
    throw resolution_error("partition does not align with the path grid");
  return {ia, span / part.n};
}

}  // namespace detail

/// S_{beta,n}(X) = sum_i |X(t_i) - X(t_{i-1})|^beta over the uniform partition.
inline double variation_sum(const Path& x, double beta, const PartitionSpec& part) {
  if (!(beta >= 1.0)) throw std::domain_error("variation_sum: need beta >= 1");
  const auto [ia, stride] = detail::partition_on_grid(x, part);
  double acc = 0.0;
  for (std::size_t i = 1; i <= part.n; ++i) {
    const double d = x.values[ia + i * stride] - x.values[ia + (i - 1) * stride];
    acc += std::pow(std::abs(d), beta);
  }
  return acc;
}

struct ScheduleSeries {
  std::vector<std::size_t> ns;
  std::vector<double> values;      // single-path values or ensemble means
  std::vector<double> std_errors;  // zero for single paths
};

enum class Verdict { converged, diverging, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::converged: return "converged";
    case Verdict::diverging: return "diverging";
    default: return "inconclusive";
  }
}

struct VariationEstimate {
  ScheduleSeries series;
  Verdict verdict = Verdict::inconclusive;
  std::optional<double> final;
};

struct EstimateOptions {
  double converge_tol = 0.05;  // relative spread of the last three values
  double growth_factor = 1.5;  // per-step ratio declaring divergence
  double vanish_factor = 0.7;  // per-step ratio declaring decay to zero
};

/// Dyadic partition schedule for a grid with `steps` cells, kept a factor of
/// four below the grid so the statistic probes the process, not the
/// discretization of the transform that produced it.
inline std::vector<std::size_t> dyadic_schedule(std::size_t steps) {
  std::size_t hi = std::max<std::size_t>(4, steps / 4);
  std::size_t lo = std::max<std::size_t>(2, steps / 64);
  std::vector<std::size_t> ns;
  for (std::size_t n = hi; n >= lo; n /= 2) {
    ns.push_back(n);
    if (n == lo || n / 2 < 1) break;
  }
  std::reverse(ns.begin(), ns.end());
  return ns;
}

namespace detail {

inline Verdict decide_verdict(const std::vector<double>& v, const EstimateOptions& opt,
                              std::optional<double>& final) {
  final.reset();
  if (v.size() < 3) return Verdict::inconclusive;
  const std::size_t m = v.size();
  const double a = v[m - 3], b = v[m - 2], c = v[m - 1];
  const double top = std::max({a, b, c});
  const double bot = std::min({a, b, c});
  if (top == 0.0) {
    final = 0.0;
    return Verdict::converged;
  }
  if ((top - bot) / top < opt.converge_tol) {
    final = c;
    return Verdict::converged;
  }
  const std::size_t nr = std::min<std::size_t>(3, m - 1);
  bool grows = true, vanishes = true;
  for (std::size_t i = m - nr; i < m; ++i) {
    const double prev = v[i - 1];
    if (prev <= 0.0 || v[i] < opt.growth_factor * prev) grows = false;
    if (prev <= 0.0 || v[i] > opt.vanish_factor * prev) vanishes = false;
  }
  if (grows) return Verdict::diverging;
  if (vanishes) {
    final = 0.0;
    return Verdict::converged;
  }
  return Verdict::inconclusive;
}

}  // namespace detail

inline VariationEstimate beta_variation_estimate(const Path& x, double beta, double a,
                                                 double b,
                                                 std::span<const std::size_t> schedule,
                                                 const EstimateOptions& opt = {}) {
  VariationEstimate est;
  for (std::size_t n : schedule) {
    est.series.ns.push_back(n);
    est.series.values.push_back(variation_sum(x, beta, PartitionSpec(a, b, n)));
    est.series.std_errors.push_back(0.0);
  }
  est.verdict = detail::decide_verdict(est.series.values, opt, est.final);
  return est;
}

/// Per-path variation sums over the schedule, row-major P x |schedule|.
inline std::vector<double> variation_table(const Ensemble& e, double beta, double a,
                                           double b,
                                           std::span<const std::size_t> schedule) {
  const std::size_t P = e.size();
  if (P == 0) throw std::domain_error("variation_table: empty ensemble");
  const std::size_t S = schedule.size();
  std::vector<double> table(P * S);
  parallel_for(P, [&](std::size_t k) {
    const Path p = e.path(k);
    for (std::size_t s = 0; s < S; ++s)
      table[k * S + s] = variation_sum(p, beta, PartitionSpec(a, b, schedule[s]));
  });
  return table;
}

/// L1 mode: the expectation is estimated by the ensemble mean, with its
/// standard error reported per schedule point.
inline VariationEstimate beta_variation_estimate(const Ensemble& e, double beta, double a,
                                                 double b,
                                                 std::span<const std::size_t> schedule,
                                                 const EstimateOptions& opt = {}) {
  const std::size_t P = e.size();
  const std::size_t S = schedule.size();
  const std::vector<double> table = variation_table(e, beta, a, b, schedule);
  VariationEstimate est;
  for (std::size_t s = 0; s < S; ++s) {
    double mean = 0.0;
    for (std::size_t k = 0; k < P; ++k) mean += table[k * S + s];
    mean /= static_cast<double>(P);
    double var = 0.0;
    for (std::size_t k = 0; k < P; ++k) {
      const double d = table[k * S + s] - mean;
      var += d * d;
    }
    const double se = P > 1 ? std::sqrt(var / static_cast<double>(P - 1) /
                                        static_cast<double>(P))
                            : 0.0;
    est.series.ns.push_back(schedule[s]);
    est.series.values.push_back(mean);
    est.series.std_errors.push_back(se);
  }
  est.verdict = detail::decide_verdict(est.series.values, opt, est.final);
  return est;
}

/// |S_[a,c] - S_[a,b] - S_[b,c]| at the finest matched resolution (grid
/// stride 1).  The sums nest at b, so the residual is identically zero up to
/// the floating reassociation of the three partial sums.
inline double additivity_check(const Path& x, double beta, double a, double b, double c) {
  if (!(a < b && b < c)) throw std::domain_error("additivity_check: need a < b < c");
  const std::size_t ia = grid_index(x, a, "a");
  const std::size_t ib = grid_index(x, b, "b");
  const std::size_t ic = grid_index(x, c, "c");
  const double s_ac = variation_sum(x, beta, PartitionSpec(a, c, ic - ia));
  const double s_ab = variation_sum(x, beta, PartitionSpec(a, b, ib - ia));
  const double s_bc = variation_sum(x, beta, PartitionSpec(b, c, ic - ib));
  return std::abs(s_ac - s_ab - s_bc);
}

struct HurstOptions {
  double lo = 0.01;
  double hi = 0.99;
  double slope_tol = 0.025;  // log-log decay rejected as "too smooth"
  int bisect_iters = 80;
};

namespace detail {

// mean of S_{beta,n}[a,b] over the paths, given precomputed |increments|
inline double mean_abs_pow(const std::vector<std::vector<double>>& absinc, double beta) {
  double acc = 0.0;
  for (const auto& row : absinc) {
    double s = 0.0;
    for (double d : row) s += std::pow(d, beta);
    acc += s;
  }
  return acc / static_cast<double>(absinc.size());
}

inline double hurst_estimate_impl(const std::vector<const std::vector<double>*>& paths,
                                  const GridSpec& grid, double a, double b,
                                  const HurstOptions& opt) {
  const std::size_t ia = grid_index(grid, a, "interval start");
  const std::size_t ib = grid_index(grid, b, "interval end");
  const std::size_t span = ib - ia;
  if (span < 32)
    throw std::domain_error("hurst_estimate: interval too short for two dyadic levels");
  // dyadic schedule, finest a factor of 4 below the grid
  std::vector<std::size_t> ns;
  for (std::size_t n = std::max<std::size_t>(2, span / 16); n <= span / 4; n *= 2)
    ns.push_back(n);
  if (ns.size() < 2)
    throw std::domain_error("hurst_estimate: interval too short for two dyadic levels");
  const std::size_t finest = ns.back();

  auto abs_increments = [&](std::size_t n) {
    const std::size_t stride = span / n;
    std::vector<std::vector<double>> rows(paths.size());
    for (std::size_t k = 0; k < paths.size(); ++k) {
      const auto& v = *paths[k];
      rows[k].resize(n);
      for (std::size_t i = 1; i <= n; ++i)
        rows[k][i - 1] = std::abs(v[ia + i * stride] - v[ia + (i - 1) * stride]);
    }
    return rows;
  };
  const auto inc_fine = abs_increments(finest);

  const double len = b - a;
  auto g = [&](double hh) {
    return mean_abs_pow(inc_fine, 1.0 / hh) - c_h(hh) * len;
  };
  double lo = opt.lo, hi = opt.hi;
  double glo = g(lo), ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0))
    throw estimation_error(
        "hurst_estimate: no sign change in bracket [" + std::to_string(lo) + ", " +
        std::to_string(hi) + "]: g(lo)=" + std::to_string(glo) +
        ", g(hi)=" + std::to_string(ghi));
  for (int it = 0; it < opt.bisect_iters; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm == 0.0) { lo = hi = mid; break; }
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  const double hhat = 0.5 * (lo + hi);

  // scaling validation: at the solved order the statistic must not decay
  // across the schedule, otherwise the path is too smooth for the estimate
  const double beta_hat = 1.0 / hhat;
  std::vector<double> logn, logs;
  for (std::size_t n : ns) {
    const double s = mean_abs_pow(abs_increments(n), beta_hat);
    if (s <= 0.0)
      throw estimation_error("hurst_estimate: degenerate variation statistic");
    logn.push_back(std::log(static_cast<double>(n)));
    logs.push_back(std::log(s));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < logn.size(); ++i) { mx += logn[i]; my += logs[i]; }
  mx /= static_cast<double>(logn.size());
  my /= static_cast<double>(logn.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < logn.size(); ++i) {
    sxy += (logn[i] - mx) * (logs[i] - my);
    sxx += (logn[i] - mx) * (logn[i] - mx);
  }
  const double slope = sxy / sxx;
  if (slope < -opt.slope_tol)
    throw estimation_error(
        "hurst_estimate: variation decays at the solved order (log-log slope " +
        std::to_string(slope) + " at H=" + std::to_string(hhat) +
        "); path too smooth for a variation-based estimate");
  return hhat;
}

}  // namespace detail

inline double hurst_estimate(const Ensemble& e, double a, double b,
                             const HurstOptions& opt = {}) {
  std::vector<const std::vector<double>*> rows;
  rows.reserve(e.size());
  for (const auto& p : e.paths) rows.push_back(&p);
  return detail::hurst_estimate_impl(rows, e.grid, a, b, opt);
}

inline double hurst_estimate(const Path& x, double a, double b,
                             const HurstOptions& opt = {}) {
  std::vector<const std::vector<double>*> rows{&x.values};
  return detail::hurst_estimate_impl(rows, GridSpec{x.t0, x.dt, x.steps()}, a, b, opt);
}

/// Discrete Hoelder norm sup |f(t)-f(s)| / |t-s|^beta over grid pairs in
/// [a,b].  O(n^2); grids beyond `cap` points are subsampled.
inline double holder_norm(const Path& f, double beta, double a, double b,
                          std::size_t cap = 4096) {
  if (!(beta > 0.0 && beta <= 1.0))
    throw std::domain_error("holder_norm: need beta in (0,1]");
  const std::size_t ia = grid_index(f, a, "a");
  const std::size_t ib = grid_index(f, b, "b");
  if (ib <= ia) throw std::domain_error("holder_norm: need a < b");
  const std::size_t stride = (ib - ia + cap - 1) / cap;
  std::vector<std::size_t> idx;
  for (std::size_t i = ia; i < ib; i += stride) idx.push_back(i);
  idx.push_back(ib);
  const std::size_t m = idx.size();
  // reciprocal denominators per grid lag; the inner loop is multiply-compare
  std::vector<double> inv_den(ib - ia + 1, 0.0);
  for (std::size_t l = 1; l <= ib - ia; ++l)
    inv_den[l] = 1.0 / std::pow(static_cast<double>(l) * f.dt, beta);
  double best = 0.0;
  for (std::size_t u = 0; u + 1 < m; ++u) {
    const double fu = f.values[idx[u]];
    for (std::size_t v = u + 1; v < m; ++v) {
      const double r = std::abs(f.values[idx[v]] - fu) * inv_den[idx[v] - idx[u]];
      if (r > best) best = r;
    }
  }
  return best;
}

/// A_n = sum_i ( int_0^{t_i} ((t_i-s)^a - (t_{i-1}-s)_+^a)^2 dnu )^{beta/2}
/// with nu given by dyadic cell masses (uniform density within a cell).  The
/// squared power terms are integrated exactly per cell; only the cross term
/// uses the product of the cell-averaged factors.  Averaging the difference
/// before squaring would lose the within-cell variance of the singular factor
/// on the edge cells, where the cascade keeps a fixed mass share.
inline double singular_measure_sum(std::span<const double> cell_masses, double alpha,
                                   const PartitionSpec& part) {
  require_frac_order(alpha, "singular_measure_sum");
  if (part.a != 0.0 || part.b != 1.0)
    throw std::domain_error("singular_measure_sum: partition must cover [0,1]");
  const std::size_t R = cell_masses.size();
  if (R == 0 || (R & (R - 1)) != 0)
    throw std::domain_error("singular_measure_sum: cell count must be a power of two");
  const std::size_t n = part.n;
  if (n > R)
    throw resolution_error("singular_measure_sum: partition finer than the measure");
  if (R % n != 0)
    throw resolution_error("singular_measure_sum: partition must align with the cells");
  const double beta = beta_of_alpha(alpha);
  const double h = 1.0 / static_cast<double>(R);
  const double e1 = alpha + 1.0;
  const double e2 = 2.0 * alpha + 1.0;
  std::vector<double> pw1(R + 1), pw2(R + 1);
  for (std::size_t l = 0; l <= R; ++l) {
    pw1[l] = std::pow(static_cast<double>(l), e1);
    pw2[l] = std::pow(static_cast<double>(l), e2);
  }
  // per-lag cell averages of (t-s)^alpha and (t-s)^{2 alpha}
  std::vector<double> avg(R), sq(R);
  const double s1 = std::pow(h, alpha) / e1;
  const double s2 = std::pow(h, 2.0 * alpha) / e2;
  for (std::size_t l = 1; l <= R; ++l) {
    avg[l - 1] = s1 * (pw1[l] - pw1[l - 1]);
    sq[l - 1] = s2 * (pw2[l] - pw2[l - 1]);
  }
  const std::size_t per = R / n;
  double A = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t Ki = i * per;
    const std::size_t Kim1 = (i - 1) * per;
    double integral = 0.0;
    for (std::size_t c = 0; c < Ki; ++c) {
      const double a1 = sq[Ki - c - 1];
      double cell = a1;
      if (c < Kim1) {
        cell += sq[Kim1 - c - 1] -
                2.0 * avg[Ki - c - 1] * avg[Kim1 - c - 1];
      }
      integral += cell_masses[c] * cell;
    }
    A += std::pow(integral, 0.5 * beta);
  }
  return A;
}

inline double singular_measure_sum(const SingularFunction& nu, double alpha,
                                   const PartitionSpec& part) {
  const std::vector<double> masses = nu.cell_masses();
  return singular_measure_sum(std::span<const double>(masses), alpha, part);
}

/// n^{2H-1} S_{2,n}[0,t] across the schedule; for an H-self-similar process the
/// ensemble mean tends to t^{2H}.
inline ScheduleSeries renormalized_qv(const Path& b, double h, double t,
                                      std::span<const std::size_t> schedule) {
  require_hurst(h, "renormalized_qv");
  ScheduleSeries out;
  for (std::size_t n : schedule) {
    out.ns.push_back(n);
    out.values.push_back(std::pow(static_cast<double>(n), 2.0 * h - 1.0) *
                         variation_sum(b, 2.0, PartitionSpec(0.0, t, n)));
    out.std_errors.push_back(0.0);
  }
  return out;
}

inline ScheduleSeries renormalized_qv(const Ensemble& e, double h, double t,
                                      std::span<const std::size_t> schedule) {
  require_hurst(h, "renormalized_qv");
  const std::size_t P = e.size();
  const std::size_t S = schedule.size();
  std::vector<double> table(P * S);
  parallel_for(P, [&](std::size_t k) {
    const Path p = e.path(k);
    for (std::size_t s = 0; s < S; ++s)
      table[k * S + s] = std::pow(static_cast<double>(schedule[s]), 2.0 * h - 1.0) *
                         variation_sum(p, 2.0, PartitionSpec(0.0, t, schedule[s]));
  });
  ScheduleSeries out;
  for (std::size_t s = 0; s < S; ++s) {
    double mean = 0.0;
    for (std::size_t k = 0; k < P; ++k) mean += table[k * S + s];
    mean /= static_cast<double>(P);
    double var = 0.0;
    for (std::size_t k = 0; k < P; ++k) {
      const double d = table[k * S + s] - mean;
      var += d * d;
    }
    out.ns.push_back(schedule[s]);
    out.values.push_back(mean);
    out.std_errors.push_back(
        P > 1 ? std::sqrt(var / static_cast<double>(P - 1) / static_cast<double>(P))
              : 0.0);
  }
  return out;
}

}  // namespace fracvar
