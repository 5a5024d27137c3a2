#pragma once

// Convergence planes: a grid of initial estimates (one axis) against the
// order α (other axis), each cell tagged with the root it reaches.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fracroot/errors.hpp"
#include "fracroot/funcmodel.hpp"
#include "fracroot/solvers.hpp"

namespace fracroot {

inline constexpr int kDiverged = -1;

enum class PlaneAxis { RealLine, ImaginaryLine };

inline const char* to_string(PlaneAxis a) { return a == PlaneAxis::RealLine ? "real" : "imag"; }

struct PlaneConfig {
  MethodKind method = MethodKind::CFN1;
  FunctionModel f;
  PlaneAxis axis = PlaneAxis::RealLine;
  double lo = -3.0;
  double hi = 3.0;
  double alpha_lo = 0.6;
  double alpha_hi = 1.0;
  int n_x0 = 400;
  int n_alpha = 200;
  std::vector<Complex> roots;
  double match_tol = 1e-3;
  SolverConfig solver;  // alpha is overridden per row

  void validate() const {
    if (n_x0 < 1 || n_alpha < 1) throw ConfigError("plane: resolution must be positive");
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw ConfigError("plane: segment must be finite");
    if (n_x0 >= 2 ? !(lo < hi) : !(lo <= hi)) throw ConfigError("plane: segment requires lo < hi");
    if (!(alpha_lo > 0.0 && alpha_lo <= alpha_hi && alpha_hi <= 1.0)) {
      throw ConfigError("plane: alpha range must satisfy 0 < alpha_lo <= alpha_hi <= 1");
    }
    if (roots.empty()) throw ConfigError("plane: at least one root is required");
    if (!(match_tol > 0.0)) throw ConfigError("plane: match tolerance must be positive");
    for (std::size_t i = 0; i < roots.size(); ++i) {
      for (std::size_t j = i + 1; j < roots.size(); ++j) {
        if (std::abs(roots[i] - roots[j]) <= 2.0 * match_tol) {
          throw ConfigError("plane: roots must be separated by more than twice the match tolerance");
        }
      }
    }
  }

  /// Initial estimate of column col (column 0 = lo).
  Complex x0_at(int col) const {
    const double t = n_x0 == 1 ? 0.5 : static_cast<double>(col) / (n_x0 - 1);
    const double v = col == n_x0 - 1 && n_x0 > 1 ? hi : lo + (hi - lo) * t;
    return axis == PlaneAxis::RealLine ? Complex(v, 0.0) : Complex(0.0, v);
  }

  /// Order of row row (row 0 = alpha_hi, the last row = alpha_lo).
  double alpha_at(int row) const {
    if (n_alpha == 1 || row == 0) return alpha_hi;
    if (row == n_alpha - 1) return alpha_lo;
    return alpha_hi - (alpha_hi - alpha_lo) * static_cast<double>(row) / (n_alpha - 1);
  }
};

struct PlaneResult {
  PlaneConfig config;
  std::vector<int> cells;       // row-major, n_alpha rows of n_x0 columns
  std::vector<int> iterations;  // same shape
  double percentage = 0.0;

  int width() const { return config.n_x0; }
  int height() const { return config.n_alpha; }
  int cell(int row, int col) const { return cells[static_cast<std::size_t>(row) * width() + col]; }
  int iteration_count(int row, int col) const {
    return iterations[static_cast<std::size_t>(row) * width() + col];
  }
};

/// Index of the unique root within tol of x, or kDiverged.
inline int classify_root(Complex x, const std::vector<Complex>& roots, double tol) {
  int found = kDiverged;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (std::abs(x - roots[i]) <= tol) {
      if (found != kDiverged) return kDiverged;
      found = static_cast<int>(i);
    }
  }
  return found;
}

inline double percentage_of(const std::vector<int>& cells) {
  if (cells.empty()) return 0.0;
  const auto hits = std::count_if(cells.begin(), cells.end(), [](int c) { return c != kDiverged; });
  return 100.0 * static_cast<double>(hits) / static_cast<double>(cells.size());
}

/// Runs every cell; output is independent of the worker count. workers <= 0
/// selects the hardware concurrency.
inline PlaneResult generate_plane(const PlaneConfig& config, int workers = 1) {
  config.validate();
  PlaneResult result;
  result.config = config;
  const std::size_t n = static_cast<std::size_t>(config.n_x0) * config.n_alpha;
  result.cells.assign(n, kDiverged);
  result.iterations.assign(n, 0);

  auto run_row = [&](int row) {
    SolverConfig sc = config.solver;
    sc.alpha = config.alpha_at(row);
    for (int col = 0; col < config.n_x0; ++col) {
      const auto trace = solve(config.method, config.f, config.x0_at(col), sc);
      const std::size_t idx = static_cast<std::size_t>(row) * config.n_x0 + col;
      result.iterations[idx] = trace.iterations;
      if (is_converged(trace.status)) {
        result.cells[idx] = classify_root(trace.final_iterate(), config.roots, config.match_tol);
      }
    }
  };

  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, config.n_alpha);
  if (workers <= 1) {
    for (int row = 0; row < config.n_alpha; ++row) run_row(row);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int row = next++; row < config.n_alpha; row = next++) run_row(row);
      });
    }
    for (auto& t : pool) t.join();
  }
  result.percentage = percentage_of(result.cells);
  return result;
}

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

/// 13 qualitative colours for roots, then black for divergence.
inline std::vector<Rgb> default_palette() {
  return {{228, 26, 28},  {55, 126, 184}, {77, 175, 74},  {152, 78, 163}, {255, 127, 0},
          {255, 255, 51}, {166, 86, 40},  {247, 129, 191}, {153, 153, 153}, {27, 158, 119},
          {217, 95, 2},   {117, 112, 179}, {231, 41, 138}, {0, 0, 0}};
}

/// Binary P6 image, one pixel per cell; the palette's last entry marks
/// divergence.
inline std::string render_ppm(const PlaneResult& result, const std::vector<Rgb>& palette) {
  if (palette.size() < result.config.roots.size() + 1) {
    throw PaletteTooSmallError("render_ppm: palette needs one colour per root plus one");
  }
  std::string out = "P6 " + std::to_string(result.width()) + " " +
                    std::to_string(result.height()) + " 255\n";
  out.reserve(out.size() + result.cells.size() * 3);
  for (int c : result.cells) {
    const Rgb& px = c == kDiverged ? palette.back() : palette[static_cast<std::size_t>(c)];
    out.push_back(static_cast<char>(px.r));
    out.push_back(static_cast<char>(px.g));
    out.push_back(static_cast<char>(px.b));
  }
  return out;
}

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string write_csv(const PlaneResult& result) {
  std::string out = "alpha,x0_re,x0_im,root_index,iterations\n";
  const auto& cfg = result.config;
  for (int row = 0; row < cfg.n_alpha; ++row) {
    const std::string alpha = format_g17(cfg.alpha_at(row));
    for (int col = 0; col < cfg.n_x0; ++col) {
      const Complex x0 = cfg.x0_at(col);
      out += alpha;
      out += ',';
      out += format_g17(x0.real());
      out += ',';
      out += format_g17(x0.imag());
      out += ',';
      out += std::to_string(result.cell(row, col));
      out += ',';
      out += std::to_string(result.iteration_count(row, col));
      out += '\n';
    }
  }
  return out;
}

struct PlaneCsvRow {
  double alpha;
  Complex x0;
  int root_index;
  int iterations;
};

inline std::vector<PlaneCsvRow> read_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "alpha,x0_re,x0_im,root_index,iterations") {
    throw ConfigError("plane CSV: unexpected header");
  }
  std::vector<PlaneCsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double a, re, im;
    int idx, it;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%d,%d", &a, &re, &im, &idx, &it) != 5) {
      throw ConfigError("plane CSV: malformed row: " + line);
    }
    rows.push_back({a, {re, im}, idx, it});
  }
  return rows;
}

inline double percentage_from_csv(const std::string& text) {
  std::vector<int> cells;
  for (const auto& r : read_csv(text)) cells.push_back(r.root_index);
  return percentage_of(cells);
}

}  // namespace fracroot
