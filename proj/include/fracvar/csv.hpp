#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "fracvar/path.hpp"

namespace fracvar {

namespace detail {

inline std::string fmt_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double parse_double(std::string_view tok, std::size_t line, std::size_t col) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || p != last)
    throw parse_error("malformed number at line " + std::to_string(line) + ", column " +
                      std::to_string(col));
  return v;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace detail

/// Header `t,p0,...,p{P-1}`, one row per grid time, 17 significant digits
/// (lossless double round trip).
inline void write_ensemble_csv(const std::string& filename, const Ensemble& e) {
  std::ofstream out(filename);
  if (!out) throw std::runtime_error("cannot open for writing: " + filename);
  out << "t";
  for (std::size_t p = 0; p < e.size(); ++p) out << ",p" << p;
  out << "\n";
  for (std::size_t k = 0; k <= e.grid.steps; ++k) {
    out << detail::fmt_g17(e.grid.time(k));
    for (std::size_t p = 0; p < e.size(); ++p)
      out << ',' << detail::fmt_g17(e.paths[p][k]);
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + filename);
}

inline void write_path_csv(const std::string& filename, const Path& p) {
  Ensemble e;
  e.grid = GridSpec{p.t0, p.dt, p.steps()};
  e.paths.push_back(p.values);
  e.generator = p.meta.generator;
  e.master_seed = p.meta.seed;
  write_ensemble_csv(filename, e);
}

inline Ensemble read_ensemble_csv(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw parse_error("cannot open: " + filename);
  std::string line;
  if (!std::getline(in, line)) throw parse_error("empty file: " + filename);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = detail::split_csv(line);
  if (header.empty() || header[0] != "t")
    throw parse_error("header mismatch at line 1: expected leading column 't'");
  const std::size_t P = header.size() - 1;
  if (P == 0) throw parse_error("header mismatch at line 1: no path columns");
  for (std::size_t p = 0; p < P; ++p) {
    const std::string want = "p" + std::to_string(p);
    if (header[p + 1] != want)
      throw parse_error("header mismatch at line 1, column " + std::to_string(p + 2) +
                        ": expected '" + want + "'");
  }

  std::vector<double> times;
  std::vector<std::vector<double>> cols(P);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto toks = detail::split_csv(line);
    if (toks.size() != P + 1)
      throw parse_error("wrong field count at line " + std::to_string(lineno) + ": got " +
                        std::to_string(toks.size()) + ", expected " +
                        std::to_string(P + 1));
    times.push_back(detail::parse_double(toks[0], lineno, 1));
    for (std::size_t p = 0; p < P; ++p)
      cols[p].push_back(detail::parse_double(toks[p + 1], lineno, p + 2));
  }
  if (times.size() < 2) throw parse_error("need at least two rows: " + filename);

  const double t0 = times.front();
  const double dt = times[1] - times[0];
  if (!(dt > 0.0)) throw parse_error("time column is not increasing: " + filename);
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double expect = t0 + static_cast<double>(k) * dt;
    if (std::abs(times[k] - expect) > 1e-9 * (std::abs(expect) + 1.0))
      throw parse_error("non-uniform grid at line " + std::to_string(k + 2));
  }

  Ensemble e;
  e.grid = GridSpec{t0, dt, times.size() - 1};
  e.paths = std::move(cols);
  e.generator = "csv";
  return e;
}

/// Small convergence tables: header row plus numeric rows.
inline void write_table_csv(const std::string& filename,
                            const std::vector<std::string>& header,
                            const std::vector<std::vector<double>>& rows) {
  std::ofstream out(filename);
  if (!out) throw std::runtime_error("cannot open for writing: " + filename);
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << detail::fmt_g17(row[i]);
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + filename);
}

}  // namespace fracvar
