#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fracvar/cascade.hpp"
#include "fracvar/constants.hpp"
#include "fracvar/fractrans.hpp"
#include "fracvar/parallel.hpp"
#include "fracvar/path.hpp"
#include "fracvar/simulate.hpp"
#include "fracvar/variation.hpp"

namespace fracvar {

struct CriterionRecord {
  std::string name;
  double statistic = std::numeric_limits<double>::quiet_NaN();
  double reference = std::numeric_limits<double>::quiet_NaN();
  double tolerance = std::numeric_limits<double>::quiet_NaN();
  std::string verdict;  // "pass" | "fail" | "error"
  std::vector<std::pair<double, double>> sequence;
  std::string note;

  bool passed() const { return verdict == "pass"; }
};

struct TestReport {
  std::string title;
  bool pass = false;
  std::vector<CriterionRecord> criteria;
  std::uint64_t master_seed = 0;
  GridSpec grid;
  std::size_t ensemble_size = 0;
  std::vector<std::size_t> schedule;
  std::string note;

  void finalize() {
    pass = !criteria.empty();
    for (const auto& c : criteria) pass = pass && c.passed();
  }
};

struct LevyTestConfig {
  double rel_tol = 0.10;
  double z_band = 4.0;
  double holder_eps = 0.10;
  std::size_t martingale_windows = 16;
  std::size_t martingale_lags = 3;
  std::vector<double> qv_times{0.25, 0.5, 1.0};
  std::vector<double> variation_times{0.5, 1.0};
  std::vector<double> cov_times{0.2, 0.4, 0.6, 0.8, 1.0};
};

namespace detail {

inline double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const std::size_t i = std::min(
      v.size() - 1, static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size()))) -
                        (q > 0.0 ? 1 : 0));
  return v[i];
}

inline Path strided_view(const Ensemble& e, std::size_t k, std::size_t stride) {
  std::vector<double> v;
  v.reserve(e.grid.steps / stride + 1);
  for (std::size_t i = 0; i <= e.grid.steps; i += stride) v.push_back(e.paths[k][i]);
  return Path(e.grid.t0, e.grid.dt * static_cast<double>(stride), std::move(v));
}

}  // namespace detail

/// Hoelder criterion: the (H-eps)-norm per path must stay stable (< 2x growth)
/// when the grid is refined four-fold.  A jump inflates the norm by the full
/// refinement power and fails.
inline CriterionRecord check_holder(const Ensemble& b, double h, double eps) {
  CriterionRecord rec;
  rec.name = "holder";
  if (!(eps > 0.0 && eps < h))
    throw std::domain_error("check_holder: need 0 < eps < h");
  if (b.grid.steps % 4 != 0)
    throw std::domain_error("check_holder: grid size must be divisible by 4");
  const double order = h - eps;
  const double tend = b.grid.horizon();
  const std::size_t P = b.size();
  std::vector<double> coarse(P), fine(P);
  parallel_for(P, [&](std::size_t k) {
    coarse[k] = holder_norm(detail::strided_view(b, k, 4), order, 0.0, tend);
    fine[k] = holder_norm(b.path(k), order, 0.0, tend);
  });
  const double qc = detail::percentile(coarse, 0.99);
  const double qf = detail::percentile(fine, 0.99);
  const double ratio = qf / qc;
  rec.statistic = ratio;
  rec.reference = 1.0;
  rec.tolerance = 2.0;
  rec.sequence = {{static_cast<double>(b.grid.steps / 4), qc},
                  {static_cast<double>(b.grid.steps), qf}};
  rec.verdict = (std::isfinite(qc) && std::isfinite(qf) && ratio < 2.0) ? "pass" : "fail";
  rec.note = "99th-percentile discrete Hoelder norm of order " + std::to_string(order) +
             " under 4x grid refinement";
  return rec;
}

/// Martingale criterion: normalized cross-moments of disjoint window
/// increments at lags 1..lags, plus a lag-1 regression slope, all inside the
/// z-band around 0.
inline CriterionRecord check_martingale(const Ensemble& m, std::size_t lags = 3,
                                        std::size_t windows = 16, double z_band = 4.0) {
  CriterionRecord rec;
  rec.name = "martingale";
  if (m.size() < 1000)
    throw std::domain_error("check_martingale: ensemble size must be >= 1000");
  if (windows < 2 || m.grid.steps % windows != 0)
    throw std::domain_error("check_martingale: windows must divide the grid");
  if (lags < 1 || lags >= windows)
    throw std::domain_error("check_martingale: need 1 <= lags < windows");
  const std::size_t P = m.size();
  const std::size_t stride = m.grid.steps / windows;
  std::vector<double> D(P * windows);
  for (std::size_t k = 0; k < P; ++k)
    for (std::size_t w = 0; w < windows; ++w)
      D[k * windows + w] = m.paths[k][(w + 1) * stride] - m.paths[k][w * stride];

  std::vector<double> mean(windows, 0.0), sd(windows, 0.0);
  for (std::size_t w = 0; w < windows; ++w) {
    for (std::size_t k = 0; k < P; ++k) mean[w] += D[k * windows + w];
    mean[w] /= static_cast<double>(P);
    for (std::size_t k = 0; k < P; ++k) {
      const double d = D[k * windows + w] - mean[w];
      sd[w] += d * d;
    }
    sd[w] = std::sqrt(sd[w] / static_cast<double>(P - 1));
    if (sd[w] == 0.0) {
      rec.verdict = "error";
      rec.note = "degenerate zero-variance window increment";
      return rec;
    }
  }

  double max_z = 0.0;
  for (std::size_t lag = 1; lag <= lags; ++lag) {
    for (std::size_t w = 0; w + lag < windows; ++w) {
      double cov = 0.0;
      for (std::size_t k = 0; k < P; ++k)
        cov += (D[k * windows + w] - mean[w]) * (D[k * windows + w + lag] - mean[w + lag]);
      cov /= static_cast<double>(P - 1);
      const double r = cov / (sd[w] * sd[w + lag]);
      max_z = std::max(max_z, std::abs(r) * std::sqrt(static_cast<double>(P)));
      rec.sequence.emplace_back(static_cast<double>(lag),
                                std::abs(r) * std::sqrt(static_cast<double>(P)));
    }
  }

  // pooled regression of an increment on its predecessor
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  std::size_t cnt = 0;
  for (std::size_t k = 0; k < P; ++k) {
    for (std::size_t w = 0; w + 1 < windows; ++w) {
      const double x = D[k * windows + w];
      const double y = D[k * windows + w + 1];
      sxx += x * x;
      sxy += x * y;
      syy += y * y;
      ++cnt;
    }
  }
  const double slope = sxy / sxx;
  const double sse = syy - slope * sxy;
  const double se_slope =
      std::sqrt(std::max(sse, 0.0) / (static_cast<double>(cnt - 1)) / sxx);
  const double slope_z = se_slope > 0.0 ? std::abs(slope) / se_slope : 0.0;

  rec.statistic = std::max(max_z, slope_z);
  rec.reference = 0.0;
  rec.tolerance = z_band;
  rec.verdict = rec.statistic < z_band ? "pass" : "fail";
  rec.note = "max cross-moment z = " + std::to_string(max_z) +
             ", lag-1 regression z = " + std::to_string(slope_z);
  return rec;
}

/// Quadratic-variation shape of the fundamental martingale: the mean S_{2,n}
/// on [0,t] must match (kappa_H/d_H)^2 t^{2-2H}/(2-2H); the exponent of the
/// fitted power law is reported alongside.
inline CriterionRecord check_qv_shape(const Ensemble& m, double h,
                                      const std::vector<double>& times = {0.25, 0.5, 1.0},
                                      double rel_tol = 0.10, double z_band = 4.0,
                                      double* fitted_exponent = nullptr) {
  require_hurst(h, "check_qv_shape");
  CriterionRecord rec;
  rec.name = "qv-shape";
  if (m.size() < 1000)
    throw std::domain_error("check_qv_shape: ensemble size must be >= 1000");
  const double c = std::pow(kappa(h) / d_h(h), 2.0) / (2.0 - 2.0 * h);
  const std::size_t P = m.size();
  double max_rel = 0.0;
  bool ok = true;
  std::vector<double> logt, logv;
  for (double t : times) {
    const std::size_t span = grid_index(m.grid, t, "qv time");
    std::vector<double> s2(P);
    parallel_for(P, [&](std::size_t k) {
      s2[k] = variation_sum(m.path(k), 2.0, PartitionSpec(0.0, t, span));
    });
    double meanv = 0.0;
    for (double v : s2) meanv += v;
    meanv /= static_cast<double>(P);
    double var = 0.0;
    for (double v : s2) var += (v - meanv) * (v - meanv);
    const double se = std::sqrt(var / static_cast<double>(P - 1) / static_cast<double>(P));
    const double ref = c * std::pow(t, 2.0 - 2.0 * h);
    const double tol = std::max(rel_tol * ref, z_band * se);
    ok = ok && std::abs(meanv - ref) <= tol;
    max_rel = std::max(max_rel, std::abs(meanv - ref) / ref);
    rec.sequence.emplace_back(t, meanv);
    logt.push_back(std::log(t));
    logv.push_back(std::log(meanv));
  }
  // power-law fit across the probe times
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < logt.size(); ++i) { mx += logt[i]; my += logv[i]; }
  mx /= static_cast<double>(logt.size());
  my /= static_cast<double>(logt.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < logt.size(); ++i) {
    sxy += (logt[i] - mx) * (logv[i] - my);
    sxx += (logt[i] - mx) * (logt[i] - mx);
  }
  const double expo = sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
  if (fitted_exponent) *fitted_exponent = expo;
  rec.statistic = max_rel;
  rec.reference = 0.0;
  rec.tolerance = rel_tol;
  rec.verdict = ok ? "pass" : "fail";
  rec.note = "fitted exponent " + std::to_string(expo) + " (reference " +
             std::to_string(2.0 - 2.0 * h) + ")";
  return rec;
}

/// 1/H-variation criterion: the schedule estimate must converge and land
/// within tolerance of c_H t.
inline CriterionRecord check_variation(const Ensemble& b, double h,
                                       const std::vector<double>& times = {0.5, 1.0},
                                       double rel_tol = 0.10, double z_band = 4.0) {
  require_hurst(h, "check_variation");
  CriterionRecord rec;
  rec.name = "variation";
  const double beta = 1.0 / h;
  const double ch = c_h(h);
  bool ok = true;
  double max_rel = 0.0;
  std::string notes;
  for (double t : times) {
    const std::size_t span = grid_index(b.grid, t, "variation time");
    const std::vector<std::size_t> schedule = dyadic_schedule(span);
    const VariationEstimate est = beta_variation_estimate(b, beta, 0.0, t, schedule);
    const double ref = ch * t;
    const bool converged = est.verdict == Verdict::converged && est.final.has_value();
    double rel = std::numeric_limits<double>::infinity();
    if (converged) {
      const double se = est.series.std_errors.back();
      const double tol = std::max(rel_tol * ref, z_band * se);
      rel = std::abs(*est.final - ref) / ref;
      ok = ok && std::abs(*est.final - ref) <= tol;
    } else {
      ok = false;
    }
    max_rel = std::max(max_rel, rel);
    notes += "t=" + std::to_string(t) + ": " + to_string(est.verdict);
    if (est.final) notes += " final=" + std::to_string(*est.final);
    notes += " ref=" + std::to_string(ref) + "; ";
    if (t == times.back())
      for (std::size_t i = 0; i < est.series.ns.size(); ++i)
        rec.sequence.emplace_back(static_cast<double>(est.series.ns[i]),
                                  est.series.values[i]);
  }
  rec.statistic = max_rel;
  rec.reference = 0.0;
  rec.tolerance = rel_tol;
  rec.verdict = ok ? "pass" : "fail";
  rec.note = notes;
  return rec;
}

/// Discriminating oracle: the sample covariance on a 5x5 grid of times against
/// the fractional covariance, standardized by the null CLT error.
inline CriterionRecord covariance_crosscheck(const Ensemble& b, double h,
                                             const std::vector<double>& times = {0.2, 0.4,
                                                                                 0.6, 0.8,
                                                                                 1.0},
                                             double z_band = 4.0) {
  require_hurst(h, "covariance_crosscheck");
  CriterionRecord rec;
  rec.name = "covariance";
  if (b.size() < 1000)
    throw std::domain_error("covariance_crosscheck: ensemble size must be >= 1000");
  const std::size_t P = b.size();
  const std::size_t m = times.size();
  // probe times snap to the nearest grid node; the reference covariance is
  // evaluated at the snapped times, so no interpolation error enters
  std::vector<std::size_t> idx(m);
  std::vector<double> snapped(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double x = (times[i] - b.grid.t0) / b.grid.dt;
    const double r = std::clamp(std::round(x), 1.0, static_cast<double>(b.grid.steps));
    idx[i] = static_cast<std::size_t>(r);
    snapped[i] = b.grid.time(idx[i]);
  }
  std::vector<double> mean(m, 0.0);
  for (std::size_t k = 0; k < P; ++k)
    for (std::size_t i = 0; i < m; ++i) mean[i] += b.paths[k][idx[i]];
  for (double& v : mean) v /= static_cast<double>(P);
  double max_z = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      double cov = 0.0;
      for (std::size_t k = 0; k < P; ++k)
        cov += (b.paths[k][idx[i]] - mean[i]) * (b.paths[k][idx[j]] - mean[j]);
      cov /= static_cast<double>(P - 1);
      const double ti = snapped[i], tj = snapped[j];
      const double ref = 0.5 * (std::pow(ti, 2 * h) + std::pow(tj, 2 * h) -
                                std::pow(std::abs(ti - tj), 2 * h));
      const double cii = std::pow(ti, 2 * h), cjj = std::pow(tj, 2 * h);
      const double se = std::sqrt((cii * cjj + ref * ref) / static_cast<double>(P));
      const double z = (cov - ref) / se;
      max_z = std::max(max_z, std::abs(z));
      rec.sequence.emplace_back(ti * 8.0 + tj, z);  // encoded (s,t) pair
    }
  }
  rec.statistic = max_z;
  rec.reference = 0.0;
  rec.tolerance = z_band;
  rec.verdict = max_z <= z_band ? "pass" : "fail";
  rec.note = "max standardized covariance deviation over the time grid";
  return rec;
}

/// The full characterization battery.  H = 1/2 routes to the classical check
/// (quadratic variation linear in t, orthogonal increments).
inline TestReport levy_characterization_test(const Ensemble& b, double h,
                                             const LevyTestConfig& cfg = {}) {
  require_hurst(h, "levy_characterization_test");
  TestReport rep;
  rep.master_seed = b.master_seed;
  rep.grid = b.grid;
  rep.ensemble_size = b.size();
  rep.schedule = dyadic_schedule(b.grid.steps);

  if (h == 0.5) {
    rep.title = "levy-classical";
    rep.note = "H = 1/2: classical characterization (linear quadratic variation, "
               "orthogonal increments)";
    CriterionRecord qv;
    qv.name = "qv-linear";
    const std::size_t P = b.size();
    bool ok = true;
    double max_rel = 0.0;
    for (double t : cfg.qv_times) {
      const std::size_t span = grid_index(b.grid, t, "qv time");
      std::vector<double> s2(P);
      parallel_for(P, [&](std::size_t k) {
        s2[k] = variation_sum(b.path(k), 2.0, PartitionSpec(0.0, t, span));
      });
      double meanv = 0.0;
      for (double v : s2) meanv += v;
      meanv /= static_cast<double>(P);
      double var = 0.0;
      for (double v : s2) var += (v - meanv) * (v - meanv);
      const double se =
          std::sqrt(var / static_cast<double>(P - 1) / static_cast<double>(P));
      const double tol = std::max(cfg.rel_tol * t, cfg.z_band * se);
      ok = ok && std::abs(meanv - t) <= tol;
      max_rel = std::max(max_rel, std::abs(meanv - t) / t);
      qv.sequence.emplace_back(t, meanv);
    }
    qv.statistic = max_rel;
    qv.reference = 0.0;
    qv.tolerance = cfg.rel_tol;
    qv.verdict = ok ? "pass" : "fail";
    rep.criteria.push_back(qv);
    rep.criteria.push_back(check_martingale(b, cfg.martingale_lags,
                                            cfg.martingale_windows, cfg.z_band));
    rep.finalize();
    return rep;
  }

  rep.title = "levy-fractional";
  rep.criteria.push_back(check_holder(b, h, cfg.holder_eps));
  const Ensemble m = transform_ensemble(b, TransformOp::fundamental, h);
  rep.criteria.push_back(
      check_martingale(m, cfg.martingale_lags, cfg.martingale_windows, cfg.z_band));
  CriterionRecord qv =
      check_qv_shape(m, h, cfg.qv_times, cfg.rel_tol, cfg.z_band);
  if (h > 0.5)
    qv.note += "; doubles as the absolute-continuity surrogate for H > 1/2 "
               "(no direct finite-sample test exists)";
  rep.criteria.push_back(qv);
  rep.criteria.push_back(
      check_variation(b, h, cfg.variation_times, cfg.rel_tol, cfg.z_band));
  rep.finalize();
  return rep;
}

/// Btilde = fBm + perturbation built from an independent time-changed Brownian
/// motion; the driving streams of the two components are independent.
inline Ensemble build_counterexample(double h, double cascade_p, int depth,
                                     std::size_t n, std::size_t paths,
                                     std::uint64_t master_seed) {
  if (!(h > 0.5 && h < 0.75))
    throw std::domain_error("build_counterexample: requires H in (1/2, 3/4)");
  const SingularFunction phi(cascade_p, depth);
  const FbmCholeskyFactor factor(h, n, 1.0);
  const YKernelTable table(n, 1.0 / static_cast<double>(n), h);
  Ensemble e;
  e.grid = GridSpec{0.0, 1.0 / static_cast<double>(n), n};
  e.master_seed = master_seed;
  e.generator = "counterexample-btilde";
  e.paths.resize(paths);
  parallel_for(paths, [&](std::size_t k) {
    const Path bh = factor.sample(derive_seed(master_seed, k));
    const Path nPath =
        time_changed_bm(phi, n, derive_seed(master_seed, k, seedtag::kCascade));
    const Path y = counterexample_y(nPath, h, table);
    std::vector<double> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i) v[i] = bh.values[i] + y.values[i];
    e.paths[k] = std::move(v);
  });
  return e;
}

}  // namespace fracvar
