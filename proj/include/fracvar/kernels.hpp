#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "fracvar/parallel.hpp"

namespace fracvar {

/// Cell-averaged weights of the kernel (t-s)^expo on a uniform grid.
/// w[l] is the average of (t_k - s)^expo over the cell [t_{k-l}, t_{k-l+1}]:
///   w[l] = dt^expo * (l^{e} - (l-1)^{e}) / e,  e = expo + 1.
/// Exact for the power factor, finite at the singular endpoint for expo in (-1,0).
inline std::vector<double> power_cell_weights(std::size_t n, double dt, double expo) {
  if (!(expo > -1.0)) throw std::domain_error("power_cell_weights: exponent must exceed -1");
  const double e = expo + 1.0;
  std::vector<double> pw(n + 1);
  for (std::size_t l = 0; l <= n; ++l) pw[l] = std::pow(static_cast<double>(l), e);
  std::vector<double> w(n + 1);
  w[0] = 0.0;
  const double scale = std::pow(dt, expo) / e;
  for (std::size_t l = 1; l <= n; ++l) w[l] = scale * (pw[l] - pw[l - 1]);
  return w;
}

/// X(t_k) = sum_{j<k} w[k-j] * dm[j].  Lag-only kernels make this a causal
/// convolution; summation order is fixed (ascending j) for reproducibility.
inline std::vector<double> lag_transform(std::span<const double> dm,
                                         std::span<const double> w) {
  const std::size_t n = dm.size();
  std::vector<double> x(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < k; ++j) acc += w[k - j] * dm[j];
    x[k] = acc;
  }
  return x;
}

/// X(t_k) = sum_{j<k} mid_j^{s_expo} * w[k-j] * dm[j], where mid_j is the cell
/// midpoint (j+1/2)dt.  The (t-s) factor is cell-averaged, the s factor frozen
/// at the midpoint; the midpoint keeps the s=0 endpoint finite for s_expo < 0.
inline std::vector<double> product_kernel_transform(std::span<const double> dm, double dt,
                                                    double s_expo, double ts_expo) {
  const std::size_t n = dm.size();
  const std::vector<double> w = power_cell_weights(n, dt, ts_expo);
  std::vector<double> scaled(n);
  for (std::size_t j = 0; j < n; ++j)
    scaled[j] = std::pow((static_cast<double>(j) + 0.5) * dt, s_expo) * dm[j];
  return lag_transform(scaled, w);
}

namespace detail {
// 4-point Gauss-Legendre on [-1,1].
inline constexpr double kGl4Node[4] = {-0.8611363115940526, -0.3399810435848563,
                                       0.3399810435848563, 0.8611363115940526};
inline constexpr double kGl4Weight[4] = {0.3478548451374538, 0.6521451548625461,
                                         0.6521451548625461, 0.3478548451374538};
inline constexpr double kGeomRatio = 0.75;
}  // namespace detail

/// Inner kernel of the reconstruction, K(t,s) = int_s^t u^{H-3/2} (u-s)^{H-1/2} du.
/// The integrand has an endpoint singularity at u=s for H<1/2, so the cell
/// edges are geometric, clustered at s; each cell is integrated by 4-point
/// Gauss-Legendre.
inline double y_inner_kernel(double t, double s, double h, int cells = 64) {
  if (!(t > s && s > 0.0)) throw std::domain_error("y_inner_kernel: need 0 < s < t");
  if (cells < 2) throw std::domain_error("y_inner_kernel: need at least 2 cells");
  const double len = t - s;
  const double pu = h - 1.5;
  const double pv = h - 0.5;
  double acc = 0.0;
  double lo = 0.0;
  double hi = std::pow(detail::kGeomRatio, cells - 1);
  for (int c = 0; c < cells; ++c) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double cell = 0.0;
    for (int q = 0; q < 4; ++q) {
      const double v = (mid + half * detail::kGl4Node[q]) * len;  // v = u - s
      cell += detail::kGl4Weight[q] * std::pow(s + v, pu) * std::pow(v, pv);
    }
    acc += cell * half * len;
    lo = hi;
    hi = (c == cells - 2) ? 1.0 : hi / detail::kGeomRatio;
  }
  return acc;
}

/// K(t_k, s*_j) for all j < k on a uniform grid, packed lower triangle.
/// Built once per (grid, H) and shared across every path of an ensemble.
class YKernelTable {
 public:
  YKernelTable(std::size_t n, double dt, double h, int cells = 64)
      : n_(n), vals_(n * (n + 1) / 2) {
    parallel_for(n, [&](std::size_t km1) {
      const std::size_t k = km1 + 1;
      const double t = static_cast<double>(k) * dt;
      double* row = vals_.data() + km1 * k / 2;
      for (std::size_t j = 0; j < k; ++j) {
        const double s = (static_cast<double>(j) + 0.5) * dt;
        row[j] = y_inner_kernel(t, s, h, cells);
      }
    });
  }

  // j < k, k in [1, n]
  double operator()(std::size_t k, std::size_t j) const {
    return vals_[(k - 1) * k / 2 + j];
  }

  std::size_t steps() const { return n_; }

 private:
  std::size_t n_;
  std::vector<double> vals_;
};

}  // namespace fracvar
