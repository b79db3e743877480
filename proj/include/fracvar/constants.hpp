#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracvar {

inline void require_hurst(double h, const char* who) {
  if (!(h > 0.0 && h < 1.0))
    throw std::domain_error(std::string(who) + ": Hurst parameter must lie in (0,1), got " +
                            std::to_string(h));
}

inline void require_frac_order(double alpha, const char* who) {
  if (!(alpha > -0.5 && alpha < 0.5))
    throw std::domain_error(std::string(who) +
                            ": fractional order must lie in (-1/2,1/2), got " +
                            std::to_string(alpha));
}

/// Critical variation order beta = 2/(1+2*alpha) = 1/H.
inline double beta_of_alpha(double alpha) {
  require_frac_order(alpha, "beta_of_alpha");
  return 2.0 / (1.0 + 2.0 * alpha);
}

/// Scale constant of the two-sided moving-average representation,
/// kappa_H = sqrt(2H Gamma(3/2-H) / (Gamma(H+1/2) Gamma(2-2H))).
inline double kappa(double h) {
  require_hurst(h, "kappa");
  return std::sqrt(2.0 * h * std::tgamma(1.5 - h) /
                   (std::tgamma(h + 0.5) * std::tgamma(2.0 - 2.0 * h)));
}

/// E|xi|^{1/H} for xi standard normal: 2^{p/2} Gamma((p+1)/2) / sqrt(pi), p = 1/H.
/// Evaluated in log space; p can be large for small H.
inline double c_h(double h) {
  require_hurst(h, "c_h");
  const double p = 1.0 / h;
  return std::exp(0.5 * p * std::log(2.0) + std::lgamma(0.5 * (p + 1.0)) -
                  0.5 * std::log(M_PI));
}

/// Absolute moment E|xi|^p for xi standard normal (helper shared with c_h).
inline double gaussian_abs_moment(double p) {
  if (!(p > -1.0)) throw std::domain_error("gaussian_abs_moment: p must exceed -1");
  return std::exp(0.5 * p * std::log(2.0) + std::lgamma(0.5 * (p + 1.0)) -
                  0.5 * std::log(M_PI));
}

/// Variation constant of the order-alpha transform of a Brownian motion,
/// c_alpha = c_H kappa_H^{-1/H} with H = 1/2 + alpha.
inline double c_alpha(double alpha) {
  require_frac_order(alpha, "c_alpha");
  const double h = 0.5 + alpha;
  return c_h(h) * std::pow(kappa(h), -1.0 / h);
}

/// Normalizing constant of the inversion formula, d_H = 1/B(3/2-H, H+1/2).
/// The two Beta arguments sum to 2, so B = Gamma(3/2-H) Gamma(H+1/2).
inline double d_h(double h) {
  require_hurst(h, "d_h");
  return 1.0 / (std::tgamma(1.5 - h) * std::tgamma(h + 0.5));
}

}  // namespace fracvar
