#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracvar {

// Error taxonomy. Parameter violations use std::domain_error directly.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct resolution_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct estimation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PathMeta {
  std::string generator;
  std::uint64_t seed = 0;
};

/// A process sampled on a uniform time grid: values[k] at time t0 + k*dt.
struct Path {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> values;
  PathMeta meta;

  Path() = default;
  Path(double t0_, double dt_, std::vector<double> v, PathMeta m = {})
      : t0(t0_), dt(dt_), values(std::move(v)), meta(std::move(m)) {
    if (dt <= 0.0) throw std::domain_error("Path: dt must be positive");
    if (values.size() < 2) throw std::domain_error("Path: need at least 2 samples");
  }

  std::size_t steps() const { return values.size() - 1; }
  double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
  double horizon() const { return time(steps()); }
};

struct GridSpec {
  double t0 = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;

  double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
  double horizon() const { return time(steps); }
};

/// Independent realizations sharing one grid. Path k is reproducible from
/// (master_seed, k) alone, independent of how work was scheduled.
struct Ensemble {
  GridSpec grid;
  std::vector<std::vector<double>> paths;
  std::uint64_t master_seed = 0;
  std::string generator;

  std::size_t size() const { return paths.size(); }

  Path path(std::size_t k) const {
    if (k >= paths.size()) throw std::out_of_range("Ensemble::path index");
    return Path(grid.t0, grid.dt, paths[k], PathMeta{generator, master_seed});
  }
};

/// Index of time t on the grid, or resolution_error if t is not a grid point.
inline std::size_t grid_index(const GridSpec& g, double t, const char* what = "time") {
  const double x = (t - g.t0) / g.dt;
  const double r = std::round(x);
  if (r < 0.0 || r > static_cast<double>(g.steps) ||
      std::abs(x - r) > 1e-9 * (std::abs(x) + 1.0)) {
    throw resolution_error(std::string(what) + " does not lie on the path grid");
  }
  return static_cast<std::size_t>(r);
}

inline std::size_t grid_index(const Path& p, double t, const char* what = "time") {
  return grid_index(GridSpec{p.t0, p.dt, p.steps()}, t, what);
}

}  // namespace fracvar
