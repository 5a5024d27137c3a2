#pragma once

// fracroot command-line front end: solve, plane, order, selftest.

#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fracroot/fracroot.hpp"
#include "fracroot/json_io.hpp"
#include "selftest.hpp"

namespace fracroot::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitMaxIter = 2,
  kExitFailure = 3,
  kExitInsufficientData = 4,
  kExitSelftestFailed = 5,
};

inline std::string fmt5(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5g", v);
  return buf;
}

/// 5 significant digits per component, imaginary part omitted when zero.
inline std::string fmt5(Complex z) {
  std::string s = fmt5(z.real());
  if (z.imag() != 0.0) {
    if (z.imag() > 0.0) s += '+';
    s += fmt5(z.imag()) + "i";
  }
  return s;
}

inline Complex parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  try {
    std::size_t used = 0;
    const double re = std::stod(text.substr(0, comma), &used);
    if (used != (comma == std::string::npos ? text.size() : comma)) throw std::invalid_argument(text);
    double im = 0.0;
    if (comma != std::string::npos) {
      const std::string tail = text.substr(comma + 1);
      im = std::stod(tail, &used);
      if (used != tail.size()) throw std::invalid_argument(text);
    }
    return {re, im};
  } catch (const std::logic_error&) {
    throw ConfigError("expected <re>[,<im>], got '" + text + "'");
  }
}

struct LoadedFunction {
  FunctionModel model;
  nlohmann::json json;
  std::vector<Complex> roots;  // empty unless built in
};

inline LoadedFunction load_function(const std::string& spec) {
  if (auto b = find_builtin(spec)) return {b->model, function_to_json(b->model), b->roots};
  const auto j = read_json_file(spec);
  auto model = function_from_json(j);
  return {model, function_to_json(model), {}};
}

inline bool write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out << bytes;
  return static_cast<bool>(out);
}

inline int worker_default() {
  if (const char* env = std::getenv("FRACROOT_WORKERS")) {
    try {
      return std::stoi(env);
    } catch (const std::logic_error&) {
    }
  }
  return 1;
}

inline std::string trace_csv(const IterationTrace& t) {
  std::string out = "k,re,im,residual\n";
  for (std::size_t k = 0; k < t.iterates.size(); ++k) {
    out += std::to_string(k) + "," + format_g17(t.iterates[k].real()) + "," +
           format_g17(t.iterates[k].imag()) + "," + format_g17(t.residuals[k]) + "\n";
  }
  return out;
}

/// Iterates from a trace CSV (k,re,im[,residual]).
inline std::vector<Complex> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::vector<Complex> xs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || !(std::isdigit(static_cast<unsigned char>(line[0])) || line[0] == '-')) continue;
    double k, re, im = 0.0;
    const int n = std::sscanf(line.c_str(), "%lf,%lf,%lf", &k, &re, &im);
    if (n < 2) throw ConfigError("malformed trace row: " + line);
    xs.emplace_back(re, im);
  }
  return xs;
}

struct SolveArgs {
  std::string method = "cfn1";
  std::string function = "f1";
  double alpha = 1.0;
  std::string x0;
  double base = 0.0;
  double tol_step = 1e-8;
  double tol_res = 1e-8;
  int max_iter = 500;
};

inline void add_solve_flags(CLI::App* cmd, SolveArgs& a, bool require_x0) {
  cmd->add_option("--method", a.method, "cfn1|cfn2|rlfn1|rlfn2|cft|rlft")->required();
  cmd->add_option("--function", a.function, "built-in name (f1..f4) or JSON path")->required();
  cmd->add_option("--alpha", a.alpha, "fractional order in (0, 1]")->required();
  auto* x0 = cmd->add_option("--x0", a.x0, "initial estimate <re>[,<im>]");
  if (require_x0) x0->required();
  cmd->add_option("--base", a.base, "base point of the derivative");
  cmd->add_option("--tol-step", a.tol_step, "step tolerance");
  cmd->add_option("--tol-res", a.tol_res, "residual tolerance");
  cmd->add_option("--max-iter", a.max_iter, "iteration budget");
}

inline MethodKind require_method(const std::string& name) {
  auto m = parse_method(name);
  if (!m) throw ConfigError("unknown method '" + name + "'");
  return *m;
}

inline SolverConfig solver_config(const SolveArgs& a) {
  SolverConfig c{a.alpha, a.base, a.tol_step, a.tol_res, a.max_iter};
  try {
    c.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

inline int exit_for(TraceStatus s) {
  switch (s) {
    case TraceStatus::ConvergedStep:
    case TraceStatus::ConvergedResidual: return kExitOk;
    case TraceStatus::MaxIterations: return kExitMaxIter;
    case TraceStatus::NumericalFailure: return kExitFailure;
  }
  return kExitFailure;
}

inline void print_solve_table(std::ostream& out, MethodKind m, double alpha,
                              const IterationTrace& t) {
  out << "method  alpha  x_bar  |x_{k+1}-x_k|  |f(x_{k+1})|  iter  status\n";
  out << method_name(m) << "  " << fmt5(alpha) << "  " << fmt5(t.final_iterate()) << "  "
      << fmt5(t.final_step()) << "  " << fmt5(t.final_residual()) << "  " << t.iterations << "  "
      << status_name(t.status) << "\n";
  if (t.status == TraceStatus::NumericalFailure) out << "failure: " << t.failure << "\n";
}

inline int cmd_solve(const SolveArgs& a, const std::string& trace_path,
                     const std::vector<std::string>& argv, std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  const MethodKind m = require_method(a.method);
  const auto fn = load_function(a.function);
  const SolverConfig cfg = solver_config(a);
  const auto trace = solve(m, fn.model, parse_complex(a.x0), cfg);
  print_solve_table(out, m, a.alpha, trace);
  if (!trace_path.empty()) {
    if (!write_file(trace_path, trace_csv(trace))) throw ConfigError("cannot write " + trace_path);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    nlohmann::json manifest = {
        {"command", argv},
        {"tool_version", kVersion},
        {"config",
         {{"subcommand", "solve"},
          {"method", a.method},
          {"function", fn.json},
          {"alpha", a.alpha},
          {"x0", a.x0},
          {"base", a.base},
          {"tol_step", a.tol_step},
          {"tol_res", a.tol_res},
          {"max_iter", a.max_iter}}},
        {"duration_seconds", secs},
        {"outputs", nlohmann::json::array({trace_path, trace_path + ".manifest.json"})}};
    write_file(trace_path + ".manifest.json", manifest.dump(2) + "\n");
  }
  return exit_for(trace.status);
}

struct PlaneArgs {
  SolveArgs solve;
  std::string axis = "real";
  double lo = -3.0;
  double hi = 3.0;
  double alpha_lo = 0.6;
  double alpha_hi = 1.0;
  int nx = 400;
  int nalpha = 200;
  std::string roots;
  double match_tol = 1e-3;
  std::string out;
  int workers = 0;
  std::string config;
};

inline nlohmann::json plane_config_json(const PlaneConfig& c) {
  return {{"subcommand", "plane"},
          {"method", method_name(c.method)},
          {"function", function_to_json(c.f)},
          {"axis", to_string(c.axis)},
          {"lo", c.lo},
          {"hi", c.hi},
          {"alpha_lo", c.alpha_lo},
          {"alpha_hi", c.alpha_hi},
          {"nx", c.n_x0},
          {"nalpha", c.n_alpha},
          {"roots", roots_to_json(c.roots)},
          {"match_tol", c.match_tol},
          {"base", c.solver.base},
          {"tol_step", c.solver.step_tol},
          {"tol_res", c.solver.residual_tol},
          {"max_iter", c.solver.max_iter}};
}

inline PlaneConfig plane_config_from_json(const nlohmann::json& j) {
  try {
    PlaneConfig c;
    c.method = require_method(j.at("method").get<std::string>());
    c.f = function_from_json(j.at("function"));
    const auto axis = j.at("axis").get<std::string>();
    if (axis != "real" && axis != "imag") throw ConfigError("axis must be real or imag");
    c.axis = axis == "real" ? PlaneAxis::RealLine : PlaneAxis::ImaginaryLine;
    c.lo = j.at("lo").get<double>();
    c.hi = j.at("hi").get<double>();
    c.alpha_lo = j.at("alpha_lo").get<double>();
    c.alpha_hi = j.at("alpha_hi").get<double>();
    c.n_x0 = j.at("nx").get<int>();
    c.n_alpha = j.at("nalpha").get<int>();
    c.roots = roots_from_json(j.at("roots"));
    c.match_tol = j.at("match_tol").get<double>();
    c.solver.base = j.at("base").get<double>();
    c.solver.step_tol = j.at("tol_step").get<double>();
    c.solver.residual_tol = j.at("tol_res").get<double>();
    c.solver.max_iter = j.at("max_iter").get<int>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed plane configuration: ") + e.what());
  }
}

inline int cmd_plane(const PlaneArgs& a, const std::vector<std::string>& argv, std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  PlaneConfig c;
  std::string prefix = a.out;
  if (!a.config.empty()) {
    const auto manifest = read_json_file(a.config);
    c = plane_config_from_json(manifest.contains("config") ? manifest.at("config") : manifest);
    if (prefix.empty() && manifest.contains("prefix")) prefix = manifest.at("prefix").get<std::string>();
  } else {
    c.method = require_method(a.solve.method);
    const auto fn = load_function(a.solve.function);
    c.f = fn.model;
    if (a.axis != "real" && a.axis != "imag") throw ConfigError("--axis must be real or imag");
    c.axis = a.axis == "real" ? PlaneAxis::RealLine : PlaneAxis::ImaginaryLine;
    c.lo = a.lo;
    c.hi = a.hi;
    c.alpha_lo = a.alpha_lo;
    c.alpha_hi = a.alpha_hi;
    c.n_x0 = a.nx;
    c.n_alpha = a.nalpha;
    if (a.roots.empty()) {
      if (fn.roots.empty()) throw ConfigError("--roots is required for functions loaded from JSON");
      c.roots = fn.roots;
    } else if (auto b = find_builtin(a.roots)) {
      c.roots = b->roots;
    } else {
      c.roots = roots_from_json(read_json_file(a.roots));
    }
    c.match_tol = a.match_tol;
    SolveArgs s = a.solve;
    s.alpha = 1.0;
    c.solver = solver_config(s);
  }
  if (prefix.empty()) throw ConfigError("--out is required");
  const int workers = a.workers > 0 ? a.workers : worker_default();
  const auto result = generate_plane(c, workers);

  const std::string ppm = prefix + ".ppm", csv = prefix + ".csv", mf = prefix + ".manifest.json";
  if (!write_file(ppm, render_ppm(result, default_palette())) || !write_file(csv, write_csv(result))) {
    throw ConfigError("cannot write outputs with prefix " + prefix);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  nlohmann::json manifest = {{"command", argv},
                             {"tool_version", kVersion},
                             {"config", plane_config_json(c)},
                             {"prefix", prefix},
                             {"workers", workers},
                             {"percentage", result.percentage},
                             {"duration_seconds", secs},
                             {"outputs", nlohmann::json::array({ppm, csv, mf})}};
  write_file(mf, manifest.dump(2) + "\n");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", result.percentage);
  out << buf << "\n";
  return kExitOk;
}

struct OrderArgs {
  SolveArgs solve;
  std::string root;
  std::string replay;
};

inline int cmd_order(const OrderArgs& a, std::ostream& out) {
  if (!a.replay.empty()) {
    const Complex root = a.root.empty() ? Complex{} : parse_complex(a.root);
    IterationTrace t;
    t.iterates = read_trace_csv(a.replay);
    char buf[64];
    std::snprintf(buf, sizeof buf, "ACOC: %.4f\n", acoc(t, root));
    out << buf;
    return kExitOk;
  }
  const MethodKind m = require_method(a.solve.method);
  const auto fn = load_function(a.solve.function);
  if (a.solve.x0.empty()) throw ConfigError("--x0 is required unless --replay is given");
  const SolverConfig cfg = solver_config(a.solve);
  const auto trace = solve(m, fn.model, parse_complex(a.solve.x0), cfg);
  print_solve_table(out, m, a.solve.alpha, trace);
  const bool root_given = !a.root.empty();
  const Complex root =
      polish_root(fn.model, root_given ? parse_complex(a.root) : trace.final_iterate());
  const double alpha = a.solve.alpha;
  char buf[160];
  std::snprintf(buf, sizeof buf, "root: %s\nACOC: %.4f\n", fmt5(root).c_str(), acoc(trace, root));
  out << buf;
  if (is_damped(m)) {
    out << "theoretical order: 2a (cited) = " << fmt5(2.0 * alpha) << "\n";
    return kExitOk;
  }
  const double order = is_traub(m) ? 2.0 * alpha + 1.0 : alpha + 1.0;
  out << "theoretical order: " << (is_traub(m) ? "2a+1" : "a+1") << " = " << fmt5(order) << "\n";
  if (root_given) {
    const auto ec = error_constants(fn.model, root, alpha, derivative_kind(m), a.solve.base);
    const double empirical = empirical_error_constant(trace, root, order);
    if (is_traub(m)) {
      out << "empirical constant: " << fmt5(empirical) << "\n"
          << "ratio to |traub_constant|: " << fmt5(empirical / std::abs(ec.traub_constant)) << "\n"
          << "ratio to |traub_constant_rederived|: "
          << fmt5(empirical / std::abs(ec.traub_constant_rederived)) << "\n";
    } else {
      out << "empirical constant: " << fmt5(empirical) << "\n"
          << "ratio to |newton_constant|: " << fmt5(empirical / std::abs(ec.newton_constant)) << "\n";
    }
  }
  return kExitOk;
}

/// Entry point shared by the executable and the tests.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv, argv + argc);
  CLI::App app{"Fractional Newton and Traub root finding", "fracroot"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  SolveArgs solve_args;
  std::string trace_path;
  auto* solve_cmd = app.add_subcommand("solve", "run one method from one initial estimate");
  add_solve_flags(solve_cmd, solve_args, true);
  solve_cmd->add_option("--trace", trace_path, "write the full trace as CSV");

  PlaneArgs plane_args;
  auto* plane_cmd = app.add_subcommand("plane", "generate a convergence plane");
  plane_cmd->add_option("--method", plane_args.solve.method, "method name");
  plane_cmd->add_option("--function", plane_args.solve.function, "built-in name or JSON path");
  plane_cmd->add_option("--axis", plane_args.axis, "real|imag");
  plane_cmd->add_option("--lo", plane_args.lo, "segment start");
  plane_cmd->add_option("--hi", plane_args.hi, "segment end");
  plane_cmd->add_option("--alpha-lo", plane_args.alpha_lo, "smallest order");
  plane_cmd->add_option("--alpha-hi", plane_args.alpha_hi, "largest order");
  plane_cmd->add_option("--nx", plane_args.nx, "initial estimates per row");
  plane_cmd->add_option("--nalpha", plane_args.nalpha, "number of orders");
  plane_cmd->add_option("--roots", plane_args.roots, "built-in name or JSON path");
  plane_cmd->add_option("--match-tol", plane_args.match_tol, "root matching tolerance");
  plane_cmd->add_option("--base", plane_args.solve.base, "base point of the derivative");
  plane_cmd->add_option("--tol-step", plane_args.solve.tol_step, "step tolerance");
  plane_cmd->add_option("--tol-res", plane_args.solve.tol_res, "residual tolerance");
  plane_cmd->add_option("--max-iter", plane_args.solve.max_iter, "iteration budget");
  plane_cmd->add_option("--out", plane_args.out, "output prefix");
  plane_cmd->add_option("--workers", plane_args.workers, "worker threads (default $FRACROOT_WORKERS or 1)");
  plane_cmd->add_option("--config", plane_args.config, "rerun from a manifest");

  OrderArgs order_args;
  auto* order_cmd = app.add_subcommand("order", "estimate the convergence order");
  order_cmd->add_option("--method", order_args.solve.method, "method name");
  order_cmd->add_option("--function", order_args.solve.function, "built-in name or JSON path");
  order_cmd->add_option("--alpha", order_args.solve.alpha, "fractional order in (0, 1]");
  order_cmd->add_option("--x0", order_args.solve.x0, "initial estimate <re>[,<im>]");
  order_cmd->add_option("--base", order_args.solve.base, "base point of the derivative");
  order_cmd->add_option("--tol-step", order_args.solve.tol_step, "step tolerance");
  order_cmd->add_option("--tol-res", order_args.solve.tol_res, "residual tolerance");
  order_cmd->add_option("--max-iter", order_args.solve.max_iter, "iteration budget");
  order_cmd->add_option("--root", order_args.root, "known root <re>[,<im>]");
  order_cmd->add_option("--replay", order_args.replay, "trace CSV to analyse instead of solving");

  SelftestOptions selftest_opts;
  std::string sabotage;
  auto* selftest_cmd = app.add_subcommand("selftest", "run the built-in checks");
  selftest_cmd->add_option("--sabotage", sabotage, "inject a fault (gamma)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve_args, trace_path, args, out);
    if (*plane_cmd) return cmd_plane(plane_args, args, out);
    if (*order_cmd) return cmd_order(order_args, out);
    if (*selftest_cmd) {
      if (!sabotage.empty() && sabotage != "gamma") throw ConfigError("unknown sabotage target");
      selftest_opts.sabotage_gamma = sabotage == "gamma";
      const auto report = run_selftest(selftest_opts, out);
      return report.failed == 0 ? kExitOk : kExitSelftestFailed;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InsufficientDataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInsufficientData;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace fracroot::cli
