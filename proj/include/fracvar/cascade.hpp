#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracvar {

/// Binomial multiplicative cascade on [0,1], represented by its distribution
/// function phi: mass p goes to the left half of every dyadic cell, 1-p to the
/// right, refined `depth` times and completed uniformly below that scale.
/// phi(0)=0, phi(1)=1, nondecreasing; p=1/2 reproduces phi(t)=t exactly.
struct SingularFunction {
  double p = 0.5;
  int depth = 1;

  SingularFunction(double p_, int depth_) : p(p_), depth(depth_) {
    if (!(p > 0.0 && p < 1.0))
      throw std::domain_error("SingularFunction: p must lie in (0,1)");
    if (depth < 1 || depth > 24)
      throw std::domain_error("SingularFunction: depth must lie in [1,24]");
  }

  double eval(double t) const {
    if (!(t >= 0.0 && t <= 1.0))
      throw std::domain_error("SingularFunction::eval: t must lie in [0,1]");
    double cum = 0.0, mass = 1.0, x = t;
    for (int lev = 0; lev < depth; ++lev) {
      x *= 2.0;
      if (x < 1.0) {
        mass *= p;
      } else {
        cum += mass * p;
        mass *= (1.0 - p);
        x -= 1.0;
      }
    }
    return cum + mass * x;
  }

  /// Masses phi(t_{k+1}) - phi(t_k) over n uniform cells of [0,1].
  std::vector<double> increments(std::size_t n) const {
    if (n < 1) throw std::domain_error("SingularFunction::increments: n >= 1");
    std::vector<double> out(n);
    double prev = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      const double cur =
          (k == n) ? 1.0 : eval(static_cast<double>(k) / static_cast<double>(n));
      out[k - 1] = cur - prev;
      prev = cur;
    }
    return out;
  }

  /// Masses of all 2^depth dyadic cells, left to right.
  std::vector<double> cell_masses() const {
    std::vector<double> m{1.0};
    for (int lev = 0; lev < depth; ++lev) {
      std::vector<double> next(m.size() * 2);
      for (std::size_t i = 0; i < m.size(); ++i) {
        next[2 * i] = p * m[i];
        next[2 * i + 1] = (1.0 - p) * m[i];
      }
      m.swap(next);
    }
    return m;
  }

  std::size_t resolution() const { return std::size_t{1} << depth; }
};

}  // namespace fracvar
