#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fracvar/csv.hpp"
#include "fracvar/report.hpp"
#include "fracvar/simulate.hpp"

using namespace fracvar;

namespace {

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("ensemble CSV round trip is bit-identical") {
  const Ensemble e = fbm_cholesky_ensemble(0.3, 64, 1.0, 5, 77);
  const auto file = temp_file("fracvar_roundtrip.csv");
  write_ensemble_csv(file.string(), e);
  const Ensemble back = read_ensemble_csv(file.string());
  REQUIRE(back.size() == e.size());
  CHECK(back.grid.steps == e.grid.steps);
  CHECK(back.grid.t0 == e.grid.t0);
  for (std::size_t k = 0; k < e.size(); ++k) CHECK(back.paths[k] == e.paths[k]);
  std::filesystem::remove(file);
}

TEST_CASE("extreme magnitudes survive the round trip") {
  Ensemble e;
  e.grid = GridSpec{0.0, 0.25, 2};
  e.paths = {{0.0, 1e-300, -3.0}, {0.0, 1.7976931348623157e308 / 2, 5e-324}};
  const auto file = temp_file("fracvar_extremes.csv");
  write_ensemble_csv(file.string(), e);
  const Ensemble back = read_ensemble_csv(file.string());
  for (std::size_t k = 0; k < e.size(); ++k) CHECK(back.paths[k] == e.paths[k]);
  std::filesystem::remove(file);
}

TEST_CASE("csv parse errors carry position information") {
  const auto file = temp_file("fracvar_bad.csv");
  {
    std::ofstream f(file);
    f << "time,p0\n0,0\n0.5,1\n";
  }
  CHECK_THROWS_AS(read_ensemble_csv(file.string()), parse_error);

  {
    std::ofstream f(file);
    f << "t,p0\n0,0\n0.5,abc\n";
  }
  CHECK_THROWS_WITH(read_ensemble_csv(file.string()),
                    Catch::Matchers::ContainsSubstring("line 3"));

  {
    std::ofstream f(file);
    f << "t,p0\n0,0\n0.5,1\n0.7,2\n";
  }
  CHECK_THROWS_AS(read_ensemble_csv(file.string()), parse_error);

  {
    std::ofstream f(file);
    f << "t,p0\n0,0\n0.5\n";
  }
  CHECK_THROWS_WITH(read_ensemble_csv(file.string()),
                    Catch::Matchers::ContainsSubstring("field count"));
  std::filesystem::remove(file);
}

TEST_CASE("report serialization validates against the schema") {
  TestReport rep;
  rep.title = "demo";
  rep.grid = GridSpec{0.0, 0.125, 8};
  rep.master_seed = 9;
  rep.ensemble_size = 4;
  rep.schedule = {2, 4};
  CriterionRecord c;
  c.name = "unit";
  c.statistic = 1.0;
  c.reference = 1.0;
  c.tolerance = 0.1;
  c.verdict = "pass";
  rep.criteria.push_back(c);
  rep.finalize();
  CHECK(rep.pass);

  nlohmann::json j = to_json(rep);
  CHECK_NOTHROW(validate_report_json(j));

  j.erase("provenance");
  CHECK_THROWS_AS(validate_report_json(j), parse_error);

  nlohmann::json j2 = to_json(rep);
  j2["criteria"][0]["verdict"] = "maybe";
  CHECK_THROWS_AS(validate_report_json(j2), parse_error);
}

TEST_CASE("report files are written and reread") {
  TestReport rep;
  rep.title = "demo";
  CriterionRecord c;
  c.name = "unit";
  c.verdict = "fail";
  rep.criteria.push_back(c);
  rep.finalize();
  const auto file = temp_file("fracvar_report.json");
  write_report_json(file.string(), rep);
  std::ifstream f(file);
  nlohmann::json j = nlohmann::json::parse(f);
  CHECK_NOTHROW(validate_report_json(j));
  CHECK(j["overall"] == "fail");
  std::filesystem::remove(file);
}
