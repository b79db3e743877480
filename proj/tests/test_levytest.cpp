#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fracvar/levytest.hpp"
#include "fracvar/report.hpp"
#include "fracvar/simulate.hpp"

using namespace fracvar;

namespace {

Ensemble line_ensemble(std::size_t n, std::size_t paths) {
  Ensemble e;
  e.grid = GridSpec{0.0, 1.0 / static_cast<double>(n), n};
  e.generator = "line";
  std::vector<double> v(n + 1);
  for (std::size_t k = 0; k <= n; ++k) v[k] = e.grid.time(k);
  e.paths.assign(paths, v);
  return e;
}

Ensemble with_jump(Ensemble e, double at, double size) {
  const std::size_t idx = grid_index(e.grid, at);
  for (auto& p : e.paths)
    for (std::size_t k = idx; k < p.size(); ++k) p[k] += size;
  return e;
}

const CriterionRecord& find(const TestReport& r, const std::string& name) {
  for (const auto& c : r.criteria)
    if (c.name == name) return c;
  throw std::runtime_error("criterion not found: " + name);
}

}  // namespace

TEST_CASE("holder criterion") {
  const Ensemble b7 = fbm_cholesky_ensemble(0.7, 1024, 1.0, 1000, 201);
  CHECK(check_holder(b7, 0.7, 0.1).verdict == "pass");

  const Ensemble bm = brownian_ensemble(1024, 1.0, 1000, 202);
  CHECK(check_holder(bm, 0.5, 0.1).verdict == "pass");

  const Ensemble jump = with_jump(brownian_ensemble(1024, 1.0, 1000, 203), 0.5, 1.0);
  CHECK(check_holder(jump, 0.7, 0.1).verdict == "fail");

  CHECK_THROWS_AS(check_holder(b7, 0.7, 0.9), std::domain_error);
}

TEST_CASE("martingale criterion") {
  const Ensemble bm = brownian_ensemble(512, 1.0, 2000, 211);
  CHECK(check_martingale(bm).verdict == "pass");

  const Ensemble b7 = fbm_cholesky_ensemble(0.7, 512, 1.0, 2000, 212);
  CHECK(check_martingale(b7).verdict == "fail");  // positively correlated increments

  const Ensemble m = transform_ensemble(b7, TransformOp::fundamental, 0.7);
  CHECK(check_martingale(m).verdict == "pass");

  CHECK_THROWS_AS(check_martingale(brownian_ensemble(64, 1.0, 10, 213)),
                  std::domain_error);
  CHECK(check_martingale(line_ensemble(512, 1000)).verdict == "error");
}

TEST_CASE("qv shape criterion resolves the exponent") {
  const Ensemble bm = brownian_ensemble(512, 1.0, 1000, 221);
  double expo = 0.0;
  CHECK(check_qv_shape(bm, 0.5, {0.25, 0.5, 1.0}, 0.10, 4.0, &expo).verdict == "pass");
  CHECK(expo == Catch::Approx(1.0).margin(0.1));

  for (double h : {0.7, 0.3}) {
    const Ensemble b = fbm_cholesky_ensemble(h, 512, 1.0, 1000, 222);
    const Ensemble m = transform_ensemble(b, TransformOp::fundamental, h);
    const CriterionRecord rec = check_qv_shape(m, h, {0.25, 0.5, 1.0}, 0.10, 4.0, &expo);
    CHECK(rec.verdict == "pass");
    CHECK(expo == Catch::Approx(2.0 - 2.0 * h).margin(0.1));
  }
}

TEST_CASE("variation criterion") {
  const Ensemble b7 = fbm_cholesky_ensemble(0.7, 1024, 1.0, 2000, 231);
  CHECK(check_variation(b7, 0.7).verdict == "pass");

  const Ensemble bm = brownian_ensemble(1024, 1.0, 2000, 232);
  CHECK(check_variation(bm, 0.7).verdict == "fail");

  CHECK(check_variation(line_ensemble(1024, 8), 0.7).verdict == "fail");
}

TEST_CASE("covariance crosscheck") {
  const Ensemble b7 = fbm_cholesky_ensemble(0.7, 512, 1.0, 2000, 241);
  CHECK(covariance_crosscheck(b7, 0.7).verdict == "pass");

  const Ensemble bm = brownian_ensemble(512, 1.0, 2000, 242);
  CHECK(covariance_crosscheck(bm, 0.7).verdict == "fail");
}

TEST_CASE("battery passes on matching fractional ensembles") {
  for (double h : {0.3, 0.7}) {
    const Ensemble b = fbm_cholesky_ensemble(h, 1024, 1.0, 1000, 251);
    const TestReport rep = levy_characterization_test(b, h);
    INFO(to_json(rep).dump(2));
    CHECK(rep.pass);
  }
}

TEST_CASE("battery discriminates") {
  // Brownian motion mislabeled as H=0.7
  const Ensemble bm = brownian_ensemble(1024, 1.0, 1000, 252);
  const TestReport r1 = levy_characterization_test(bm, 0.7);
  CHECK_FALSE(r1.pass);
  CHECK(find(r1, "variation").verdict == "fail");

  // mislabeled fractional path
  const Ensemble b6 = fbm_cholesky_ensemble(0.6, 1024, 1.0, 1000, 253);
  CHECK_FALSE(levy_characterization_test(b6, 0.7).pass);

  // smooth deterministic path
  CHECK_FALSE(levy_characterization_test(line_ensemble(1024, 1000), 0.7).pass);
}

TEST_CASE("half route runs the classical checks") {
  const Ensemble bm = brownian_ensemble(512, 1.0, 1000, 254);
  const TestReport rep = levy_characterization_test(bm, 0.5);
  CHECK(rep.title == "levy-classical");
  CHECK(rep.pass);
}

TEST_CASE("reports are deterministic") {
  const Ensemble b = fbm_cholesky_ensemble(0.7, 512, 1.0, 1000, 255);
  // martingale + covariance subset keeps this quick
  const auto r1 = covariance_crosscheck(b, 0.7);
  const auto r2 = covariance_crosscheck(b, 0.7);
  CHECK(to_json(r1).dump() == to_json(r2).dump());
}

TEST_CASE("counterexample ensemble separates the battery criteria") {
  const double h = 0.7;
  const Ensemble bt = build_counterexample(h, 0.48, 14, 512, 1000, 261);

  // the martingale transform stays a martingale
  const Ensemble m = transform_ensemble(bt, TransformOp::fundamental, h);
  CHECK(check_martingale(m).verdict == "pass");

  // the covariance oracle rejects the perturbed process
  CHECK(covariance_crosscheck(bt, h).verdict == "fail");

  // at desk scale the perturbation's variation has not yet vanished: the
  // 1/H-variation estimate sits well above c_H t (see the decisions ledger)
  const CriterionRecord var = check_variation(bt, h);
  CHECK(var.statistic > 0.10);

  CHECK_THROWS_AS(build_counterexample(0.8, 0.48, 14, 128, 4, 1), std::domain_error);
  CHECK_THROWS_AS(build_counterexample(0.5, 0.48, 14, 128, 4, 1), std::domain_error);
}

TEST_CASE("counterexample components stay mass-conserving as depth grows") {
  for (int depth : {10, 14}) {
    const SingularFunction phi(0.48, depth);
    const Ensemble n = time_changed_bm_ensemble(phi, 256, 4000, 262);
    double acc = 0.0;
    for (const auto& p : n.paths) acc += p.back() * p.back();
    acc /= static_cast<double>(n.size());
    CHECK(acc == Catch::Approx(1.0).epsilon(0.07));
  }
}
