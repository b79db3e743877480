#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "fracvar/cascade.hpp"
#include "fracvar/parallel.hpp"
#include "fracvar/simulate.hpp"

using namespace fracvar;

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double var_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / static_cast<double>(v.size() - 1);
}

std::vector<double> terminal_values(const Ensemble& e) {
  std::vector<double> out(e.size());
  for (std::size_t k = 0; k < e.size(); ++k) out[k] = e.paths[k].back();
  return out;
}

void check_standardized_moments(std::vector<double> x) {
  const double m = mean_of(x), sd = std::sqrt(var_of(x));
  double s3 = 0.0, s4 = 0.0;
  for (double v : x) {
    const double z = (v - m) / sd;
    s3 += z * z * z;
    s4 += z * z * z * z;
  }
  const double P = static_cast<double>(x.size());
  const double skew = s3 / P, kurt = s4 / P;
  CHECK(std::abs(skew) < 4.0 * std::sqrt(6.0 / P));
  CHECK(std::abs(kurt - 3.0) < 4.0 * std::sqrt(24.0 / P));
}

double fbm_cov(double s, double t, double h) {
  return 0.5 * (std::pow(s, 2 * h) + std::pow(t, 2 * h) -
                std::pow(std::abs(t - s), 2 * h));
}

}  // namespace

TEST_CASE("brownian_path basics") {
  const Path w = brownian_path(256, 1.0, 7);
  CHECK(w.values[0] == 0.0);
  CHECK(w.steps() == 256);
  const Path w2 = brownian_path(256, 1.0, 7);
  CHECK(w.values == w2.values);  // bit-identical rerun
  CHECK_THROWS_AS(brownian_path(1, 1.0, 7), std::domain_error);
  CHECK_THROWS_AS(brownian_path(16, 0.0, 7), std::domain_error);
}

TEST_CASE("brownian ensemble terminal law") {
  const Ensemble e = brownian_ensemble(256, 1.0, 10000, 11);
  const auto wT = terminal_values(e);
  const double P = static_cast<double>(e.size());
  CHECK(std::abs(mean_of(wT)) < 4.0 / std::sqrt(P));
  CHECK(var_of(wT) == Catch::Approx(1.0).epsilon(0.05));
  check_standardized_moments(wT);
}

TEST_CASE("worker count does not change ensembles") {
  set_default_threads(1);
  const Ensemble a = brownian_ensemble(128, 1.0, 64, 5);
  set_default_threads(2);
  const Ensemble b = brownian_ensemble(128, 1.0, 64, 5);
  set_default_threads(0);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a.paths[k] == b.paths[k]);
}

TEST_CASE("fbm cholesky matches the fractional covariance") {
  const double h = 0.7;
  const Ensemble e = fbm_cholesky_ensemble(h, 128, 1.0, 10000, 23);
  const double P = static_cast<double>(e.size());

  const auto bT = terminal_values(e);
  CHECK(var_of(bT) == Catch::Approx(1.0).epsilon(0.05));  // T^{2H} at T=1
  check_standardized_moments(bT);

  // covariance on an 8x8 time subgrid, standardized against the CLT error
  std::vector<std::size_t> idx;
  for (std::size_t i = 16; i <= 128; i += 16) idx.push_back(i);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a; b < idx.size(); ++b) {
      const double ta = e.grid.time(idx[a]), tb = e.grid.time(idx[b]);
      double acc = 0.0;
      for (std::size_t k = 0; k < e.size(); ++k)
        acc += e.paths[k][idx[a]] * e.paths[k][idx[b]];
      const double sample = acc / P;
      const double ref = fbm_cov(ta, tb, h);
      const double se = std::sqrt(
          (fbm_cov(ta, ta, h) * fbm_cov(tb, tb, h) + ref * ref) / P);
      CHECK(std::abs(sample - ref) < 4.0 * se);
    }
  }
}

TEST_CASE("fbm cholesky at H=1/2 behaves like Brownian motion") {
  const Ensemble e = fbm_cholesky_ensemble(0.5, 128, 1.0, 10000, 29);
  const auto bT = terminal_values(e);
  CHECK(std::abs(mean_of(bT)) < 4.0 / std::sqrt(10000.0));
  CHECK(var_of(bT) == Catch::Approx(1.0).epsilon(0.05));
}

TEST_CASE("fbm cholesky respects the size cap") {
  CHECK_THROWS_AS(FbmCholeskyFactor(0.7, 8192, 1.0), std::domain_error);
}

TEST_CASE("moving-average fbm reduces to the driving path at alpha=0") {
  const Path w = brownian_path(128, 1.0, 99);
  const Path b = fbm_mvn(0.0, 128, 1.0, 50, 99);
  CHECK(b.values == w.values);
}

TEST_CASE("moving-average fbm variance approximates the self-similar law") {
  const double alpha = 0.2, h = 0.7;
  const Ensemble e = fbm_mvn_ensemble(alpha, 64, 1.0, 50, 10000, 31);
  const auto bT = terminal_values(e);
  CHECK(var_of(bT) == Catch::Approx(1.0).epsilon(0.10));
  check_standardized_moments(bT);
  (void)h;
}

TEST_CASE("moving-average truncation bias shrinks with the tail length") {
  const double alpha = 0.2;
  const std::size_t n = 32, P = 10000;
  auto var_at = [&](std::size_t tail) {
    std::vector<double> bT(P);
    parallel_for(P, [&](std::size_t k) {
      bT[k] = fbm_mvn(alpha, n, 1.0, tail, derive_seed(77, k)).values.back();
    });
    return var_of(bT);
  };
  const double v10 = var_at(10);
  const double v30 = var_at(30);
  const double v100 = var_at(100);
  // biases are negative (truncation removes variance) and must shrink in trend
  CHECK(std::abs(v10 - 1.0) > std::abs(v100 - 1.0));
  CHECK(std::abs(v30 - 1.0) < std::abs(v10 - 1.0) + 0.01);
}

TEST_CASE("volterra fbm collapses to the driving path at H=1/2") {
  const Path w = brownian_path(128, 1.0, 3);
  const Path b = fbm_volterra(0.5, 128, 1.0, 3);
  CHECK(b.values == w.values);
}

TEST_CASE("volterra fbm covariance") {
  for (double h : {0.7, 0.3}) {
    const Ensemble e = fbm_volterra_ensemble(h, 128, 1.0, 10000, 41);
    const double P = static_cast<double>(e.size());
    for (double s : {0.25, 0.5, 0.75, 1.0}) {
      for (double t : {0.25, 0.5, 0.75, 1.0}) {
        if (t < s) continue;
        const std::size_t is = grid_index(e.grid, s), it = grid_index(e.grid, t);
        double acc = 0.0;
        for (std::size_t k = 0; k < e.size(); ++k)
          acc += e.paths[k][is] * e.paths[k][it];
        const double sample = acc / P;
        const double ref = fbm_cov(s, t, h);
        if (std::abs(ref) > 0.05)
          CHECK(std::abs(sample - ref) / std::abs(ref) < 0.10);
      }
    }
  }
}

TEST_CASE("volterra marginals are Gaussian") {
  const Ensemble e = fbm_volterra_ensemble(0.7, 128, 1.0, 10000, 43);
  check_standardized_moments(terminal_values(e));
}

TEST_CASE("cholesky and volterra marginal variances agree") {
  for (double h : {0.3, 0.7}) {
    const Ensemble a = fbm_cholesky_ensemble(h, 128, 1.0, 10000, 51);
    const Ensemble b = fbm_volterra_ensemble(h, 128, 1.0, 10000, 52);
    for (std::size_t i = 25; i <= 125; i += 25) {
      std::vector<double> va(a.size()), vb(b.size());
      for (std::size_t k = 0; k < a.size(); ++k) va[k] = a.paths[k][i];
      for (std::size_t k = 0; k < b.size(); ++k) vb[k] = b.paths[k][i];
      CHECK(var_of(va) == Catch::Approx(var_of(vb)).epsilon(0.10));
    }
  }
}

TEST_CASE("cascade distribution function") {
  const SingularFunction uniform(0.5, 12);
  CHECK(uniform.eval(0.0) == 0.0);
  CHECK(uniform.eval(1.0) == 1.0);
  CHECK(uniform.eval(0.37) == 0.37);  // exact at p = 1/2
  const SingularFunction skew(0.45, 10);
  CHECK(skew.eval(0.5) == Catch::Approx(0.45).epsilon(1e-15));
  CHECK_THROWS_AS(skew.eval(1.5), std::domain_error);
  CHECK_THROWS_AS(SingularFunction(0.0, 4), std::domain_error);
  CHECK_THROWS_AS(SingularFunction(0.4, 0), std::domain_error);

  // nondecreasing, with unit total mass
  double prev = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double t = static_cast<double>(i) / 200.0;
    const double v = skew.eval(t);
    CHECK(v >= prev);
    prev = v;
  }
  const auto inc = skew.increments(64);
  CHECK(std::accumulate(inc.begin(), inc.end(), 0.0) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("cascade dyadic regularity exponent") {
  // slope of log2(max cell increment) across depths; for p=0.45 the
  // largest level-d mass is 0.55^d, so the exponent is -log2(0.55)
  const SingularFunction phi(0.45, 16);
  std::vector<double> lev, logm;
  for (int d = 4; d <= 12; ++d) {
    const auto inc = phi.increments(std::size_t{1} << d);
    double mx = 0.0;
    for (double v : inc) mx = std::max(mx, v);
    lev.push_back(static_cast<double>(d));
    logm.push_back(std::log2(mx));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lev.size(); ++i) { mx += lev[i]; my += logm[i]; }
  mx /= static_cast<double>(lev.size());
  my /= static_cast<double>(lev.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lev.size(); ++i) {
    sxy += (lev[i] - mx) * (logm[i] - my);
    sxx += (lev[i] - mx) * (lev[i] - mx);
  }
  const double exponent = -sxy / sxx;
  CHECK(exponent == Catch::Approx(-std::log2(0.55)).margin(0.05));
}

TEST_CASE("time-changed Brownian motion") {
  const SingularFunction uniform(0.5, 14);
  const Ensemble e = time_changed_bm_ensemble(uniform, 128, 10000, 61);
  for (const auto& p : e.paths) REQUIRE(p[0] == 0.0);
  CHECK(var_of(terminal_values(e)) == Catch::Approx(1.0).epsilon(0.05));

  const SingularFunction skew(0.45, 16);
  const Ensemble e2 = time_changed_bm_ensemble(skew, 128, 10000, 62);
  CHECK(var_of(terminal_values(e2)) == Catch::Approx(1.0).epsilon(0.05));
  check_standardized_moments(terminal_values(e2));

  CHECK_THROWS_AS(time_changed_bm(skew, 64, 1, 2.0), std::domain_error);
}

TEST_CASE("generators are deterministic in (parameters, seed)") {
  CHECK(fbm_cholesky(0.7, 64, 1.0, 13).values == fbm_cholesky(0.7, 64, 1.0, 13).values);
  CHECK(fbm_mvn(0.2, 32, 1.0, 20, 13).values == fbm_mvn(0.2, 32, 1.0, 20, 13).values);
  CHECK(fbm_volterra(0.3, 64, 1.0, 13).values == fbm_volterra(0.3, 64, 1.0, 13).values);
  const SingularFunction phi(0.45, 10);
  CHECK(time_changed_bm(phi, 64, 13).values == time_changed_bm(phi, 64, 13).values);
}

TEST_CASE("ensemble paths are reproducible from (master_seed, index)") {
  const Ensemble e = fbm_cholesky_ensemble(0.7, 64, 1.0, 16, 1234);
  const FbmCholeskyFactor factor(0.7, 64, 1.0);
  for (std::size_t k : {std::size_t{0}, std::size_t{7}, std::size_t{15}})
    CHECK(e.paths[k] == factor.sample(derive_seed(1234, k)).values);
}
