#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fracvar/cascade.hpp"
#include "fracvar/constants.hpp"
#include "fracvar/kernels.hpp"
#include "fracvar/parallel.hpp"
#include "fracvar/path.hpp"
#include "fracvar/rng.hpp"

namespace fracvar {

namespace seedtag {
inline constexpr std::uint64_t kTail = 0x7461696cULL;     // moving-average tail stream
inline constexpr std::uint64_t kCascade = 0x63736364ULL;  // counterexample time-change stream
}  // namespace seedtag

inline void require_grid(std::size_t n, double T, const char* who) {
  if (n < 2) throw std::domain_error(std::string(who) + ": need n >= 2");
  if (!(T > 0.0)) throw std::domain_error(std::string(who) + ": need T > 0");
}

// ---------------------------------------------------------------------------
// Brownian motion
// ---------------------------------------------------------------------------

inline Path brownian_path(std::size_t n, double T, std::uint64_t seed) {
  require_grid(n, T, "brownian_path");
  const double dt = T / static_cast<double>(n);
  const std::vector<double> inc = gaussian_increments(seed, n, std::sqrt(dt));
  std::vector<double> v(n + 1);
  v[0] = 0.0;
  for (std::size_t k = 0; k < n; ++k) v[k + 1] = v[k] + inc[k];
  return Path(0.0, dt, std::move(v), PathMeta{"bm", seed});
}

inline Ensemble brownian_ensemble(std::size_t n, double T, std::size_t paths,
                                  std::uint64_t master_seed) {
  require_grid(n, T, "brownian_ensemble");
  Ensemble e;
  e.grid = GridSpec{0.0, T / static_cast<double>(n), n};
  e.master_seed = master_seed;
  e.generator = "bm";
  e.paths.resize(paths);
  parallel_for(paths, [&](std::size_t k) {
    e.paths[k] = brownian_path(n, T, derive_seed(master_seed, k)).values;
  });
  return e;
}

// ---------------------------------------------------------------------------
// Fractional Brownian motion, exact Gaussian sampling via Cholesky
// ---------------------------------------------------------------------------

struct CholeskyOptions {
  std::size_t max_n = 4096;  // O(n^2) memory cap
  double jitter = 1e-12;     // relative diagonal bump on factorization failure
};

/// Cholesky factor of the fBm covariance on the grid times dt, 2dt, ..., n*dt.
/// Factor once, sample many paths.
class FbmCholeskyFactor {
 public:
  FbmCholeskyFactor(double h, std::size_t n, double T, CholeskyOptions opts = {})
      : h_(h), n_(n), dt_(T / static_cast<double>(n)) {
    require_hurst(h, "fbm_cholesky");
    require_grid(n, T, "fbm_cholesky");
    if (n > opts.max_n)
      throw std::domain_error("fbm_cholesky: n exceeds the configured cap of " +
                              std::to_string(opts.max_n));
    Eigen::MatrixXd cov(n, n);
    const double two_h = 2.0 * h;
    for (std::size_t i = 0; i < n; ++i) {
      const double ti = dt_ * static_cast<double>(i + 1);
      for (std::size_t j = 0; j <= i; ++j) {
        const double tj = dt_ * static_cast<double>(j + 1);
        const double c = 0.5 * (std::pow(ti, two_h) + std::pow(tj, two_h) -
                                std::pow(ti - tj, two_h));
        cov(i, j) = c;
        cov(j, i) = c;
      }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
      const double bump = opts.jitter * cov.diagonal().maxCoeff();
      cov.diagonal().array() += bump;
      llt.compute(cov);
      if (llt.info() != Eigen::Success)
        throw numeric_error("fbm_cholesky: covariance factorization failed after jitter "
                            "(h=" + std::to_string(h) + ", n=" + std::to_string(n) + ")");
    }
    lower_ = llt.matrixL();
  }

  Path sample(std::uint64_t seed) const {
    const std::vector<double> z = standard_gaussians(seed, n_);
    Eigen::Map<const Eigen::VectorXd> zv(z.data(), static_cast<Eigen::Index>(n_));
    Eigen::VectorXd b = lower_.triangularView<Eigen::Lower>() * zv;
    std::vector<double> v(n_ + 1);
    v[0] = 0.0;
    for (std::size_t i = 0; i < n_; ++i) v[i + 1] = b(static_cast<Eigen::Index>(i));
    return Path(0.0, dt_, std::move(v), PathMeta{"fbm-chol", seed});
  }

  double hurst() const { return h_; }

 private:
  double h_;
  std::size_t n_;
  double dt_;
  Eigen::MatrixXd lower_;
};

inline Path fbm_cholesky(double h, std::size_t n, double T, std::uint64_t seed,
                         CholeskyOptions opts = {}) {
  return FbmCholeskyFactor(h, n, T, opts).sample(seed);
}

inline Ensemble fbm_cholesky_ensemble(double h, std::size_t n, double T,
                                      std::size_t paths, std::uint64_t master_seed,
                                      CholeskyOptions opts = {}) {
  const FbmCholeskyFactor factor(h, n, T, opts);
  Ensemble e;
  e.grid = GridSpec{0.0, T / static_cast<double>(n), n};
  e.master_seed = master_seed;
  e.generator = "fbm-chol";
  e.paths.resize(paths);
  parallel_for(paths, [&](std::size_t k) {
    e.paths[k] = factor.sample(derive_seed(master_seed, k)).values;
  });
  return e;
}

// ---------------------------------------------------------------------------
// Fractional Brownian motion, truncated two-sided moving average
// ---------------------------------------------------------------------------

/// B_t = kappa_H ( int_0^t (t-s)^a dW_s + int_{-L}^0 ((t-s)^a - (-s)^a) dW_s ),
/// L = tail_len * T, both integrals cell-averaged on step dt.  The truncation
/// bias decreases as tail_len grows, O(L^{a-1/2}).
inline Path fbm_mvn(double alpha, std::size_t n, double T, std::size_t tail_len,
                    std::uint64_t seed) {
  require_frac_order(alpha, "fbm_mvn");
  require_grid(n, T, "fbm_mvn");
  if (tail_len == 0) throw std::domain_error("fbm_mvn: tail_len must be positive");
  const double dt = T / static_cast<double>(n);
  const std::vector<double> main_inc = gaussian_increments(seed, n, std::sqrt(dt));

  if (alpha == 0.0) {
    // kernel difference vanishes and kappa_{1/2}=1: the path is the driving W
    std::vector<double> v(n + 1);
    v[0] = 0.0;
    for (std::size_t k = 0; k < n; ++k) v[k + 1] = v[k] + main_inc[k];
    return Path(0.0, dt, std::move(v), PathMeta{"fbm-mvn", seed});
  }

  const double h = 0.5 + alpha;
  const double kap = kappa(h);
  const std::size_t m = tail_len * n;  // tail cells on (-L, 0]
  const std::vector<double> tail_inc =
      gaussian_increments(derive_seed(seed, 0, seedtag::kTail), m, std::sqrt(dt));

  // lag powers l^{a+1} shared by both kernel pieces
  const double e = alpha + 1.0;
  std::vector<double> pw(n + m + 1);
  for (std::size_t l = 0; l <= n + m; ++l) pw[l] = std::pow(static_cast<double>(l), e);
  const double scale = std::pow(dt, alpha) / e;

  std::vector<double> v(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < k; ++j) acc += scale * (pw[k - j] - pw[k - j - 1]) * main_inc[j];
    // tail cell i spans [-L + i dt, -L + (i+1) dt]: lags k+m-i and m-i
    double tacc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double wmain = pw[k + m - i] - pw[k + m - i - 1];
      const double wzero = pw[m - i] - pw[m - i - 1];
      tacc += scale * (wmain - wzero) * tail_inc[i];
    }
    v[k] = kap * (acc + tacc);
  }
  return Path(0.0, dt, std::move(v), PathMeta{"fbm-mvn", seed});
}

inline Ensemble fbm_mvn_ensemble(double alpha, std::size_t n, double T,
                                 std::size_t tail_len, std::size_t paths,
                                 std::uint64_t master_seed) {
  Ensemble e;
  e.grid = GridSpec{0.0, T / static_cast<double>(n), n};
  e.master_seed = master_seed;
  e.generator = "fbm-mvn";
  e.paths.resize(paths);
  parallel_for(paths, [&](std::size_t k) {
    e.paths[k] = fbm_mvn(alpha, n, T, tail_len, derive_seed(master_seed, k)).values;
  });
  return e;
}

// ---------------------------------------------------------------------------
// Fractional Brownian motion, Volterra kernel representation
// ---------------------------------------------------------------------------

/// Z_H(t,s) = kappa_H [ (t/s)^{H-1/2} (t-s)^{H-1/2}
///                      - (H-1/2) s^{1/2-H} int_s^t u^{H-3/2} (u-s)^{H-1/2} du ],
/// frozen at the cell midpoints s*_j; the inner integral uses the clustered
/// geometric rule.  The kernel matrix is shared across paths.
class VolterraKernel {
 public:
  VolterraKernel(double h, std::size_t n, double T, int cells = 64)
      : h_(h), n_(n), dt_(T / static_cast<double>(n)) {
    require_hurst(h, "fbm_volterra");
    require_grid(n, T, "fbm_volterra");
    if (h == 0.5) return;  // kernel collapses to 1; sampling takes the shortcut
    vals_.resize(n * (n + 1) / 2);
    const YKernelTable table(n, dt_, h, cells);
    const double kap = kappa(h);
    const double hm = h - 0.5;
    parallel_for(n, [&](std::size_t km1) {
      const std::size_t k = km1 + 1;
      const double t = static_cast<double>(k) * dt_;
      double* row = vals_.data() + km1 * k / 2;
      for (std::size_t j = 0; j < k; ++j) {
        const double s = (static_cast<double>(j) + 0.5) * dt_;
        row[j] = kap * (std::pow(t / s, hm) * std::pow(t - s, hm) -
                        hm * std::pow(s, -hm) * table(k, j));
      }
    });
  }

  Path sample(std::uint64_t seed) const {
    const std::vector<double> inc = gaussian_increments(seed, n_, std::sqrt(dt_));
    std::vector<double> v(n_ + 1, 0.0);
    if (h_ == 0.5) {
      for (std::size_t k = 0; k < n_; ++k) v[k + 1] = v[k] + inc[k];
    } else {
      for (std::size_t k = 1; k <= n_; ++k) {
        const double* row = vals_.data() + (k - 1) * k / 2;
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j) acc += row[j] * inc[j];
        v[k] = acc;
      }
    }
    return Path(0.0, dt_, std::move(v), PathMeta{"fbm-volterra", seed});
  }

 private:
  double h_;
  std::size_t n_;
  double dt_;
  std::vector<double> vals_;
};

inline Path fbm_volterra(double h, std::size_t n, double T, std::uint64_t seed) {
  return VolterraKernel(h, n, T).sample(seed);
}

inline Ensemble fbm_volterra_ensemble(double h, std::size_t n, double T,
                                      std::size_t paths, std::uint64_t master_seed) {
  const VolterraKernel kernel(h, n, T);
  Ensemble e;
  e.grid = GridSpec{0.0, T / static_cast<double>(n), n};
  e.master_seed = master_seed;
  e.generator = "fbm-volterra";
  e.paths.resize(paths);
  parallel_for(paths, [&](std::size_t k) {
    e.paths[k] = kernel.sample(derive_seed(master_seed, k)).values;
  });
  return e;
}

// ---------------------------------------------------------------------------
// Time-changed Brownian motion N_t = W(phi(t)) on [0,1]
// ---------------------------------------------------------------------------

inline Path time_changed_bm(const SingularFunction& phi, std::size_t n,
                            std::uint64_t seed, double T = 1.0) {
  if (T != 1.0)
    throw std::domain_error("time_changed_bm: the time change lives on [0,1]");
  require_grid(n, T, "time_changed_bm");
  const std::vector<double> dphi = phi.increments(n);
  const std::vector<double> z = standard_gaussians(seed, n);
  std::vector<double> v(n + 1);
  v[0] = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    v[k + 1] = v[k] + std::sqrt(dphi[k]) * z[k];
  return Path(0.0, 1.0 / static_cast<double>(n), std::move(v), PathMeta{"tcbm", seed});
}

inline Ensemble time_changed_bm_ensemble(const SingularFunction& phi, std::size_t n,
                                         std::size_t paths, std::uint64_t master_seed) {
  Ensemble e;
  e.grid = GridSpec{0.0, 1.0 / static_cast<double>(n), n};
  e.master_seed = master_seed;
  e.generator = "tcbm";
  e.paths.resize(paths);
  parallel_for(paths, [&](std::size_t k) {
    e.paths[k] = time_changed_bm(phi, n, derive_seed(master_seed, k)).values;
  });
  return e;
}

/// Evaluates the cascade distribution function; see SingularFunction::eval.
inline double singular_fn_eval(const SingularFunction& phi, double t) {
  return phi.eval(t);
}

}  // namespace fracvar
