// Command-line surface: generators, transforms, variation statistics, the
// characterization battery, and the named experiment presets.
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracvar/cascade.hpp"
#include "fracvar/constants.hpp"
#include "fracvar/csv.hpp"
#include "fracvar/experiments.hpp"
#include "fracvar/fractrans.hpp"
#include "fracvar/levytest.hpp"
#include "fracvar/parallel.hpp"
#include "fracvar/report.hpp"
#include "fracvar/simulate.hpp"
#include "fracvar/variation.hpp"

namespace {

using nlohmann::json;

void print_report_lines(const fracvar::TestReport& rep) {
  for (const auto& c : rep.criteria) {
    std::printf("[%s] %s: statistic=%.6g reference=%.6g  %s\n",
                c.verdict == "pass" ? "PASS" : (c.verdict == "error" ? "ERR " : "FAIL"),
                c.name.c_str(), c.statistic, c.reference, c.note.c_str());
  }
  std::printf("%s: overall %s\n", rep.title.c_str(), rep.pass ? "PASS" : "FAIL");
}

std::vector<std::size_t> parse_schedule(const std::string& s) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start < s.size()) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    out.push_back(static_cast<std::size_t>(std::stoull(s.substr(start, comma - start))));
    start = comma + 1;
  }
  if (out.empty()) throw CLI::ValidationError("schedule", "empty schedule");
  return out;
}

std::pair<double, double> parse_interval(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos)
    throw CLI::ValidationError("interval", "expected A,B");
  return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional martingale transforms, variation statistics, and the "
               "characterization battery"};
  app.require_subcommand(1);

  std::uint64_t seed = 42;
  unsigned threads = 0;
  std::string out_dir = ".";
  app.add_option("--seed", seed, "master seed (env FRACVAR_SEED overrides)");
  app.add_option("--threads", threads, "worker threads (0 = hardware)");
  app.add_option("--out-dir", out_dir, "directory for generated files");

  // --- constants -----------------------------------------------------------
  auto* c_cmd = app.add_subcommand("constants", "closed-form constants for a given H");
  double c_hurst = 0.5;
  c_cmd->add_option("--hurst", c_hurst, "Hurst parameter in (0,1)")->required();

  // --- simulate -------------------------------------------------------------
  auto* s_cmd = app.add_subcommand("simulate", "generate an ensemble CSV");
  std::string s_process, s_out;
  double s_hurst = 0.7, s_alpha = 0.2, s_T = 1.0, s_cp = 0.45;
  std::size_t s_n = 256, s_paths = 1, s_tail = 50;
  int s_depth = 14;
  s_cmd->add_option("--process", s_process, "bm|fbm-chol|fbm-mvn|fbm-volterra|tcbm")
      ->required()
      ->check(CLI::IsMember({"bm", "fbm-chol", "fbm-mvn", "fbm-volterra", "tcbm"}));
  s_cmd->add_option("--hurst", s_hurst, "Hurst parameter");
  s_cmd->add_option("--alpha", s_alpha, "fractional order");
  s_cmd->add_option("--n", s_n, "grid cells");
  s_cmd->add_option("--t", s_T, "horizon");
  s_cmd->add_option("--paths", s_paths, "ensemble size");
  s_cmd->add_option("--tail-len", s_tail, "two-sided tail length (fbm-mvn)");
  s_cmd->add_option("--cascade-p", s_cp, "cascade parameter (tcbm)");
  s_cmd->add_option("--cascade-depth", s_depth, "cascade depth (tcbm)");
  s_cmd->add_option("--out", s_out, "output CSV")->required();

  // --- transform --------------------------------------------------------------
  auto* t_cmd = app.add_subcommand("transform", "apply a transform column-wise");
  std::string t_op, t_in, t_out;
  double t_alpha = 0.0, t_hurst = 0.0;
  t_cmd->add_option("--op", t_op, "frac|invfrac|fundamental|reconstruct|counterexample-y")
      ->required()
      ->check(CLI::IsMember(
          {"frac", "invfrac", "fundamental", "reconstruct", "counterexample-y"}));
  t_cmd->add_option("--alpha", t_alpha, "fractional order (frac/invfrac)");
  t_cmd->add_option("--hurst", t_hurst, "Hurst parameter (fundamental/reconstruct/...)");
  t_cmd->add_option("--in", t_in, "input ensemble CSV")->required();
  t_cmd->add_option("--out", t_out, "output ensemble CSV")->required();

  // --- variation ---------------------------------------------------------------
  auto* v_cmd = app.add_subcommand("variation", "variation statistic over a schedule");
  std::string v_in, v_report, v_interval = "0,1", v_schedule;
  double v_beta = 2.0;
  v_cmd->add_option("--beta", v_beta, "variation order (>= 1)")->required();
  v_cmd->add_option("--interval", v_interval, "A,B");
  v_cmd->add_option("--schedule", v_schedule, "comma-separated partition sizes");
  v_cmd->add_option("--in", v_in, "input ensemble CSV")->required();
  v_cmd->add_option("--report", v_report, "output JSON report");

  // --- hurst ---------------------------------------------------------------------
  auto* h_cmd = app.add_subcommand("hurst", "estimate H by variation-moment inversion");
  std::string h_in, h_interval = "0,1";
  h_cmd->add_option("--in", h_in, "input ensemble CSV")->required();
  h_cmd->add_option("--interval", h_interval, "A,B");

  // --- levytest --------------------------------------------------------------------
  auto* l_cmd = app.add_subcommand("levytest", "characterization battery");
  std::string l_in, l_report, l_config;
  double l_hurst = 0.7;
  l_cmd->add_option("--hurst", l_hurst, "claimed Hurst parameter")->required();
  l_cmd->add_option("--in", l_in, "input ensemble CSV")->required();
  l_cmd->add_option("--config", l_config, "JSON config overriding tolerances");
  l_cmd->add_option("--report", l_report, "output JSON report");

  // --- experiment ---------------------------------------------------------------------
  auto* e_cmd = app.add_subcommand("experiment", "run a named experiment preset");
  std::string e_name;
  bool e_list = false;
  fracvar::ExperimentConfig ecfg;
  std::vector<double> e_alphas;
  e_cmd->add_option("name", e_name, "experiment name");
  e_cmd->add_flag("--list", e_list, "list experiment names");
  e_cmd->add_option("--paths", ecfg.paths, "ensemble size override");
  e_cmd->add_option("--n", ecfg.n, "grid size override");
  e_cmd->add_option("--hurst", ecfg.hurst, "Hurst parameter override");
  e_cmd->add_option("--cascade-p", ecfg.cascade_p, "cascade parameter override");
  e_cmd->add_option("--cascade-depth", ecfg.cascade_depth, "cascade depth override");
  e_cmd->add_option("--alpha", e_alphas, "fractional order override (repeatable)");
  e_cmd->add_option("--rel-tol", ecfg.rel_tol, "relative tolerance");
  e_cmd->add_option("--z-band", ecfg.z_band, "CLT band width in sigmas");

  CLI11_PARSE(app, argc, argv);

  if (const char* env = std::getenv("FRACVAR_SEED")) seed = std::strtoull(env, nullptr, 10);
  fracvar::set_default_threads(threads);

  try {
    if (*c_cmd) {
      const double h = c_hurst;
      const double a = h - 0.5;
      json out{{"hurst", h},
               {"alpha", a},
               {"beta_of_alpha", fracvar::beta_of_alpha(a)},
               {"kappa", fracvar::kappa(h)},
               {"c_h", fracvar::c_h(h)},
               {"c_alpha", fracvar::c_alpha(a)},
               {"d_h", fracvar::d_h(h)}};
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (*s_cmd) {
      fracvar::Ensemble e;
      if (s_process == "bm") {
        e = fracvar::brownian_ensemble(s_n, s_T, s_paths, seed);
      } else if (s_process == "fbm-chol") {
        e = fracvar::fbm_cholesky_ensemble(s_hurst, s_n, s_T, s_paths, seed);
      } else if (s_process == "fbm-mvn") {
        e = fracvar::fbm_mvn_ensemble(s_alpha, s_n, s_T, s_tail, s_paths, seed);
      } else if (s_process == "fbm-volterra") {
        e = fracvar::fbm_volterra_ensemble(s_hurst, s_n, s_T, s_paths, seed);
      } else {
        const fracvar::SingularFunction phi(s_cp, s_depth);
        e = fracvar::time_changed_bm_ensemble(phi, s_n, s_paths, seed);
      }
      fracvar::write_ensemble_csv(s_out, e);
      std::cout << "wrote " << s_out << " (" << e.size() << " paths, n=" << e.grid.steps
                << ")\n";
      return 0;
    }

    if (*t_cmd) {
      const fracvar::Ensemble in = fracvar::read_ensemble_csv(t_in);
      fracvar::TransformOp op;
      double param;
      if (t_op == "frac") { op = fracvar::TransformOp::frac; param = t_alpha; }
      else if (t_op == "invfrac") { op = fracvar::TransformOp::invfrac; param = t_alpha; }
      else if (t_op == "fundamental") { op = fracvar::TransformOp::fundamental; param = t_hurst; }
      else if (t_op == "reconstruct") { op = fracvar::TransformOp::reconstruct; param = t_hurst; }
      else { op = fracvar::TransformOp::counterexample_y; param = t_hurst; }
      const fracvar::Ensemble out = fracvar::transform_ensemble(in, op, param);
      fracvar::write_ensemble_csv(t_out, out);
      std::cout << "wrote " << t_out << "\n";
      return 0;
    }

    if (*v_cmd) {
      const fracvar::Ensemble in = fracvar::read_ensemble_csv(v_in);
      const auto [a, b] = parse_interval(v_interval);
      std::vector<std::size_t> schedule =
          v_schedule.empty()
              ? fracvar::dyadic_schedule(fracvar::grid_index(in.grid, b, "interval end") -
                                         fracvar::grid_index(in.grid, a, "interval start"))
              : parse_schedule(v_schedule);
      const fracvar::VariationEstimate est = fracvar::beta_variation_estimate(
          in, v_beta, a, b, schedule);
      json series = json::array();
      for (std::size_t i = 0; i < est.series.ns.size(); ++i)
        series.push_back({{"n", est.series.ns[i]},
                          {"value", est.series.values[i]},
                          {"se", est.series.std_errors[i]}});
      json out{{"schema_version", fracvar::kReportSchemaVersion},
               {"beta", v_beta},
               {"interval", {a, b}},
               {"series", series},
               {"verdict", fracvar::to_string(est.verdict)},
               {"paths", in.size()}};
      if (est.final) out["final"] = *est.final;
      std::cout << out.dump(2) << "\n";
      if (!v_report.empty()) {
        std::ofstream f(v_report);
        f << out.dump(2) << "\n";
      }
      return 0;
    }

    if (*h_cmd) {
      const fracvar::Ensemble in = fracvar::read_ensemble_csv(h_in);
      const auto [a, b] = parse_interval(h_interval);
      const double hhat = in.size() == 1 ? fracvar::hurst_estimate(in.path(0), a, b)
                                         : fracvar::hurst_estimate(in, a, b);
      json out{{"hurst_estimate", hhat}, {"interval", {a, b}}, {"paths", in.size()}};
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (*l_cmd) {
      const fracvar::Ensemble in = fracvar::read_ensemble_csv(l_in);
      fracvar::LevyTestConfig cfg;
      if (!l_config.empty()) {
        std::ifstream f(l_config);
        if (!f) throw fracvar::parse_error("cannot open config: " + l_config);
        json j = json::parse(f);
        if (j.contains("rel_tol")) cfg.rel_tol = j["rel_tol"].get<double>();
        if (j.contains("z_band")) cfg.z_band = j["z_band"].get<double>();
        if (j.contains("holder_eps")) cfg.holder_eps = j["holder_eps"].get<double>();
        if (j.contains("martingale_windows"))
          cfg.martingale_windows = j["martingale_windows"].get<std::size_t>();
        if (j.contains("martingale_lags"))
          cfg.martingale_lags = j["martingale_lags"].get<std::size_t>();
      }
      const fracvar::TestReport rep =
          fracvar::levy_characterization_test(in, l_hurst, cfg);
      print_report_lines(rep);
      if (!l_report.empty()) fracvar::write_report_json(l_report, rep);
      return rep.pass ? 0 : 1;
    }

    if (*e_cmd) {
      if (e_list) {
        for (const auto& n : fracvar::experiment_names()) std::cout << n << "\n";
        return 0;
      }
      if (e_name.empty()) {
        std::cerr << "experiment: name required (or --list)\n";
        return 2;
      }
      ecfg.seed = seed;
      ecfg.alphas = e_alphas;
      ecfg.out_dir = out_dir;
      const fracvar::TestReport rep = fracvar::run_experiment(e_name, ecfg);
      print_report_lines(rep);
      return rep.pass ? 0 : 1;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
