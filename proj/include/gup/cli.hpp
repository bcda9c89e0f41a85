#pragma once

// Command-line surface. Subcommands mirror the library operations and emit
// machine-readable JSON (or CSV for the scan outputs). Output is
// deterministic: identical argv produces byte-identical output, and every
// numeric flag is echoed back in the params block. Exit codes: 0 success,
// 2 no bound state, 1 usage or validation error.

#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gup/core.hpp"
#include "gup/existence.hpp"
#include "gup/harmonic.hpp"
#include "gup/oracle.hpp"
#include "gup/potential.hpp"
#include "gup/solver.hpp"

namespace gup::cli {

using json = nlohmann::json;

class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline const std::map<std::string, std::set<std::string>>& command_flags() {
  static const std::set<std::string> common = {"format", "out", "config"};
  static const std::map<std::string, std::set<std::string>> table = [] {
    std::map<std::string, std::set<std::string>> t;
    const auto with_common = [](std::set<std::string> s) {
      s.insert(common.begin(), common.end());
      return s;
    };
    t["solve-harmonic"] = with_common({"alpha", "beta", "alpha-prime",
                                       "beta-prime", "hbar", "mass", "omega"});
    t["solve"] = with_common({"potential", "n", "v0", "alpha", "beta", "tol",
                              "grid-min", "grid-max", "grid-points", "hbar",
                              "mass", "a"});
    t["linearize"] = with_common(
        {"potential", "n", "v0", "alpha", "beta", "hbar", "mass", "a"});
    t["oracle"] = with_common({"potential", "n", "v0", "alpha", "beta", "tol",
                               "grid-min", "grid-max", "grid-points", "hbar",
                               "mass", "a"});
    t["scan-region"] =
        with_common({"n", "v0", "grid-min", "grid-max", "grid-points"});
    t["beta-limit"] = with_common({"n", "v0", "alpha", "tol"});
    t["box-energy"] = with_common({"beta-prime", "n", "a", "mass", "hbar"});
    return t;
  }();
  return table;
}

struct Args {
  std::string command;
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) != 0; }

  double number(const std::string& key, double fallback) const {
    const auto it = values.find(key);
    if (it == values.end()) return fallback;
    const char* begin = it->second.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
      throw usage_error("invalid number for --" + key + ": '" + it->second +
                        "'");
    return v;
  }

  int integer(const std::string& key, int fallback) const {
    const auto it = values.find(key);
    if (it == values.end()) return fallback;
    const char* begin = it->second.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0' || v < -1000000000L || v > 1000000000L)
      throw usage_error("invalid integer for --" + key + ": '" + it->second +
                        "'");
    return static_cast<int>(v);
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  }
};

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

/// `key = value` lines; '#' starts a comment. Config supplies defaults only:
/// explicit command-line flags win.
inline void merge_config(Args& args, const std::string& path,
                         const std::set<std::string>& allowed) {
  std::ifstream in(path);
  if (!in) throw usage_error("cannot open config file '" + path + "'");
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw usage_error("config line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (!allowed.count(key))
      throw usage_error("config line " + std::to_string(lineno) +
                        ": unknown key '" + key + "'");
    args.values.emplace(key, value);  // keeps any CLI-provided value
  }
}

inline Args parse_args(const std::vector<std::string>& argv) {
  if (argv.empty())
    throw usage_error(
        "missing command (solve-harmonic, solve, linearize, oracle, "
        "scan-region, beta-limit, box-energy)");
  Args args;
  args.command = argv[0];
  const auto& table = command_flags();
  const auto cmd = table.find(args.command);
  if (cmd == table.end())
    throw usage_error("unknown command '" + args.command + "'");

  for (std::size_t i = 1; i < argv.size(); ++i) {
    const std::string& tok = argv[i];
    if (tok.rfind("--", 0) != 0)
      throw usage_error("expected a --flag, got '" + tok + "'");
    const std::string key = tok.substr(2);
    if (!cmd->second.count(key))
      throw usage_error("unknown flag --" + key + " for command '" +
                        args.command + "'");
    if (i + 1 >= argv.size())
      throw usage_error("flag --" + key + " needs a value");
    args.values[key] = argv[++i];
  }

  if (args.has("config")) merge_config(args, args.values["config"], cmd->second);

  const std::string format = args.text("format", "json");
  if (format != "json" && format != "csv")
    throw usage_error("--format must be json or csv");
  return args;
}

inline json result_json(const SolveResult& r) {
  json d;
  d["k2"] = r.diagnostics.k2;
  d["residual"] = r.diagnostics.residual;
  d["iterations"] = r.diagnostics.iterations;
  d["converged"] = r.diagnostics.converged;
  d["interior"] = r.diagnostics.interior;
  d["roots"] = r.diagnostics.roots;

  json j;
  j["xi_min"] = r.point.xi;
  j["q_min"] = r.point.q;
  j["energy_nd"] = r.energy_nd;
  if (r.energy_physical) j["energy_physical"] = *r.energy_physical;
  j["method"] = method_name(r.method);
  j["diagnostics"] = d;
  return j;
}

struct Emitted {
  std::string payload;
  int code = 0;
};

/// Deformation parameters from either --alpha/--beta or the primed pair.
inline DeformationParams deformation_from(const Args& args,
                                          const Nondimensionalization& nd) {
  const bool primed = args.has("alpha-prime") || args.has("beta-prime");
  const bool plain = args.has("alpha") || args.has("beta");
  if (primed && plain)
    throw usage_error(
        "give either --alpha/--beta or --alpha-prime/--beta-prime, not both");
  if (primed)
    return DeformationParams::physical(args.number("alpha-prime", 0.0),
                                       args.number("beta-prime", 0.0), nd);
  return DeformationParams::nondim(args.number("alpha", 0.0),
                                   args.number("beta", 0.0));
}

/// Potential from --potential or the --n/--v0 power-law shorthand.
inline PotentialSpec potential_from(const Args& args) {
  const bool text = args.has("potential");
  const bool shorthand = args.has("n");
  if (text && shorthand)
    throw usage_error("give either --potential or --n/--v0, not both");
  if (text) return parse_potential(args.values.at("potential"));
  if (shorthand) {
    const int n = args.integer("n", 1);
    if (n < 1) throw usage_error("--n must be >= 1");
    return PotentialSpec::power(n, args.number("v0", 1.0));
  }
  throw usage_error("a potential is required (--potential or --n/--v0)");
}

inline ScanSpec scan_from(const Args& args, const ScanSpec& defaults) {
  ScanSpec scan = defaults;
  scan.xi_min = args.number("grid-min", scan.xi_min);
  scan.xi_max = args.number("grid-max", scan.xi_max);
  scan.points = args.integer("grid-points", scan.points);
  if (!(scan.xi_min > 0.0) || !(scan.xi_max > scan.xi_min) || scan.points < 2)
    throw usage_error("bad scan grid: need 0 < grid-min < grid-max, points >= 2");
  return scan;
}

inline void require_json(const Args& args) {
  if (args.text("format", "json") != "json")
    throw usage_error("csv output is only available for scan-region and "
                      "beta-limit");
}

// --- subcommands -----------------------------------------------------------

inline Emitted cmd_solve_harmonic(const Args& args) {
  require_json(args);
  const PhysicalContext ctx = PhysicalContext::harmonic(
      args.number("omega", 1.0), args.number("mass", 1.0),
      args.number("hbar", 1.0));
  const Nondimensionalization nd = nondimensionalize_harmonic(ctx);
  const DeformationParams dp = deformation_from(args, nd);
  const auto [alpha_prime, beta_prime] = dp.to_physical(nd);

  SolveResult r = harmonic_minimum(dp.alpha(), dp.beta());
  r.energy_physical = nd.e0 * r.energy_nd;

  json j;
  j["command"] = "solve-harmonic";
  j["params"] = {{"alpha", dp.alpha()},
                 {"beta", dp.beta()},
                 {"alpha_prime", alpha_prime},
                 {"beta_prime", beta_prime},
                 {"hbar", ctx.hbar},
                 {"mass", ctx.mass},
                 {"omega", *ctx.omega}};
  j["result"] = result_json(r);
  j["linear"] = {{"energy_physical",
                  harmonic_linear(ctx, alpha_prime, beta_prime)}};
  return {j.dump() + "\n", 0};
}

inline json general_params(const Args& args, const PhysicalContext& ctx,
                           const PotentialSpec& spec,
                           const DeformationParams& dp) {
  json p;
  p["alpha"] = dp.alpha();
  p["beta"] = dp.beta();
  p["potential"] = to_string(spec);
  p["hbar"] = ctx.hbar;
  p["mass"] = ctx.mass;
  p["a"] = *ctx.a;
  if (args.has("n")) p["n"] = args.integer("n", 1);
  if (args.has("v0")) p["v0"] = args.number("v0", 1.0);
  return p;
}

inline Emitted cmd_solve(const Args& args) {
  require_json(args);
  const PhysicalContext ctx = PhysicalContext::general(
      args.number("a", 1.0), args.number("mass", 1.0), args.number("hbar", 1.0));
  const Nondimensionalization nd = nondimensionalize_general(ctx);
  const PotentialSpec spec = potential_from(args);
  const PotentialEvaluator pot = evaluator(spec);
  const DeformationParams dp =
      DeformationParams::nondim(args.number("alpha", 0.0), args.number("beta", 0.0));
  const double tol = args.number("tol", 1e-12);
  const ScanSpec scan = scan_from(args, ScanSpec{});

  json j;
  j["command"] = "solve";
  j["params"] = general_params(args, ctx, spec, dp);
  j["params"]["tol"] = tol;
  j["params"]["grid_min"] = scan.xi_min;
  j["params"]["grid_max"] = scan.xi_max;
  j["params"]["grid_points"] = scan.points;

  const auto r = solve_full(pot, dp.alpha(), dp.beta(), tol, scan);
  if (!r) {
    j["status"] = "no_bound_state";
    return {j.dump() + "\n", 2};
  }
  SolveResult res = *r;
  res.energy_physical = nd.e0 * res.energy_nd;
  j["status"] = "ok";
  j["result"] = result_json(res);

  const LinearCoefficients lc = linear_coefficients(pot);
  const double elin = linear_energy(pot, dp.alpha(), dp.beta());
  j["linear"] = {{"xi0", lc.xi0},
                 {"xi1", lc.xi1},
                 {"xi2", lc.xi2},
                 {"energy_nd", elin},
                 {"energy_physical", nd.e0 * elin}};
  return {j.dump() + "\n", 0};
}

inline Emitted cmd_linearize(const Args& args) {
  require_json(args);
  const PhysicalContext ctx = PhysicalContext::general(
      args.number("a", 1.0), args.number("mass", 1.0), args.number("hbar", 1.0));
  const Nondimensionalization nd = nondimensionalize_general(ctx);
  const PotentialSpec spec = potential_from(args);
  const PotentialEvaluator pot = evaluator(spec);
  const DeformationParams dp =
      DeformationParams::nondim(args.number("alpha", 0.0), args.number("beta", 0.0));

  const LinearCoefficients lc = linear_coefficients(pot);
  const double elin = linear_energy(pot, dp.alpha(), dp.beta());

  json j;
  j["command"] = "linearize";
  j["params"] = general_params(args, ctx, spec, dp);
  j["coefficients"] = {{"xi0", lc.xi0},         {"xi1", lc.xi1},
                       {"xi2", lc.xi2},         {"vtilde0", lc.vtilde0},
                       {"dvtilde0", lc.dvtilde0}, {"v0", lc.v0}};
  j["energy_nd"] = elin;
  j["energy_physical"] = nd.e0 * elin;
  return {j.dump() + "\n", 0};
}

inline Emitted cmd_oracle(const Args& args) {
  require_json(args);
  const PhysicalContext ctx = PhysicalContext::general(
      args.number("a", 1.0), args.number("mass", 1.0), args.number("hbar", 1.0));
  const Nondimensionalization nd = nondimensionalize_general(ctx);
  const PotentialSpec spec = potential_from(args);
  const PotentialEvaluator pot = evaluator(spec);
  const DeformationParams dp =
      DeformationParams::nondim(args.number("alpha", 0.0), args.number("beta", 0.0));

  OracleSpec ospec;
  ospec.xi_min = args.number("grid-min", ospec.xi_min);
  ospec.xi_max = args.number("grid-max", ospec.xi_max);
  ospec.points = args.integer("grid-points", ospec.points);
  ospec.xtol = args.number("tol", ospec.xtol);
  if (!(ospec.xi_min > 0.0) || !(ospec.xi_max > ospec.xi_min) ||
      ospec.points < 2 || !(ospec.xtol > 0.0))
    throw usage_error("bad oracle grid");

  SolveResult r = oracle_min(pot, dp.alpha(), dp.beta(), ospec);
  r.energy_physical = nd.e0 * r.energy_nd;

  json j;
  j["command"] = "oracle";
  j["params"] = general_params(args, ctx, spec, dp);
  j["params"]["tol"] = ospec.xtol;
  j["params"]["grid_min"] = ospec.xi_min;
  j["params"]["grid_max"] = ospec.xi_max;
  j["params"]["grid_points"] = ospec.points;
  j["result"] = result_json(r);
  return {j.dump() + "\n", 0};
}

inline Emitted cmd_scan_region(const Args& args) {
  const int n = args.integer("n", 1);
  const double v0 = args.number("v0", 1.0);
  const double gmin = args.number("grid-min", 0.006);
  const double gmax = args.number("grid-max", 1.2);
  const int gpoints = args.integer("grid-points", 200);
  if (!(gmin > 0.0) || !(gmax > gmin) || gpoints < 2)
    throw usage_error("bad region grid: need 0 < grid-min < grid-max");

  const auto grid = linear_grid(gmin, gmax, gpoints);
  const RegionScan scan = region_scan(n, v0, grid, grid);

  if (args.text("format", "json") == "csv") return {region_csv(scan), 0};

  json j;
  j["command"] = "scan-region";
  j["params"] = {{"n", n},
                 {"v0", v0},
                 {"grid_min", gmin},
                 {"grid_max", gmax},
                 {"grid_points", gpoints}};
  j["alpha_grid"] = scan.alpha_grid;
  j["beta_grid"] = scan.beta_grid;
  json rows = json::array();
  for (std::size_t i = 0; i < scan.beta_grid.size(); ++i) {
    json row = json::array();
    for (std::size_t j2 = 0; j2 < scan.alpha_grid.size(); ++j2)
      row.push_back(scan.cell(i, j2) ? 1 : 0);
    rows.push_back(std::move(row));
  }
  j["exists"] = std::move(rows);
  json curve = json::array();
  for (const auto& [a, b] : scan.reference_curve)
    curve.push_back(json::array({a, b}));
  j["reference_curve"] = std::move(curve);
  return {j.dump() + "\n", 0};
}

inline Emitted cmd_beta_limit(const Args& args) {
  if (!args.has("n")) throw usage_error("beta-limit requires --n");
  const int n = args.integer("n", 1);
  const double v0 = args.number("v0", 1.0);
  const double alpha = args.number("alpha", 0.0);
  const double tol = args.number("tol", 1e-4);

  const BetaLimit bl = beta_limit(n, v0, alpha, tol);

  if (args.text("format", "json") == "csv") {
    BetaLimitCurve curve;
    curve.n_values = {n};
    curve.limits = {bl};
    curve.v0 = v0;
    curve.alpha = alpha;
    return {beta_limit_csv(curve), 0};
  }

  json j;
  j["command"] = "beta-limit";
  j["params"] = {{"n", n}, {"v0", v0}, {"alpha", alpha}, {"tol", tol}};
  j["unbounded"] = bl.unbounded;
  if (bl.unbounded)
    j["beta_limit"] = nullptr;
  else
    j["beta_limit"] = bl.value;
  return {j.dump() + "\n", 0};
}

inline Emitted cmd_box_energy(const Args& args) {
  require_json(args);
  const PhysicalContext ctx = PhysicalContext::general(
      args.number("a", 1.0), args.number("mass", 1.0), args.number("hbar", 1.0));
  const double beta_prime = args.number("beta-prime", 0.0);
  const int level = args.integer("n", 1);

  json j;
  j["command"] = "box-energy";
  j["params"] = {{"beta_prime", beta_prime},
                 {"n", level},
                 {"a", *ctx.a},
                 {"mass", ctx.mass},
                 {"hbar", ctx.hbar}};

  const auto e = box_energy(ctx, beta_prime, level);
  if (!e) {
    j["status"] = "no_bound_state";
    return {j.dump() + "\n", 2};
  }
  j["status"] = "ok";
  j["energy"] = *e;
  return {j.dump() + "\n", 0};
}

inline Emitted dispatch(const Args& args) {
  if (args.command == "solve-harmonic") return cmd_solve_harmonic(args);
  if (args.command == "solve") return cmd_solve(args);
  if (args.command == "linearize") return cmd_linearize(args);
  if (args.command == "oracle") return cmd_oracle(args);
  if (args.command == "scan-region") return cmd_scan_region(args);
  if (args.command == "beta-limit") return cmd_beta_limit(args);
  if (args.command == "box-energy") return cmd_box_energy(args);
  throw usage_error("unknown command '" + args.command + "'");
}

inline void emit_error(std::ostream& err, const std::string& kind,
                       const std::string& message) {
  json j;
  j["error"] = {{"kind", kind}, {"message", message}};
  err << j.dump() << "\n";
}

}  // namespace detail

/// Runs one CLI invocation. Payload goes to `out` or the --out file;
/// errors are single-line JSON records on `err`.
inline int run(const std::vector<std::string>& argv, std::ostream& out,
               std::ostream& err) {
  try {
    const detail::Args args = detail::parse_args(argv);
    const detail::Emitted result = detail::dispatch(args);
    const std::string out_path = args.text("out", "");
    if (out_path.empty()) {
      out << result.payload;
    } else {
      std::ofstream file(out_path, std::ios::binary);
      if (!file) {
        detail::emit_error(err, "io", "cannot write to '" + out_path + "'");
        return 1;
      }
      file << result.payload;
    }
    return result.code;
  } catch (const usage_error& e) {
    detail::emit_error(err, "usage", e.what());
  } catch (const parse_error& e) {
    detail::emit_error(err, "potential", e.what());
  } catch (const invalid_deformation& e) {
    detail::emit_error(err, "deformation", e.what());
  } catch (const config_error& e) {
    detail::emit_error(err, "config", e.what());
  } catch (const std::exception& e) {
    detail::emit_error(err, "internal", e.what());
  }
  return 1;
}

}  // namespace gup::cli
