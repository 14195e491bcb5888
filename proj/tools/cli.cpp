#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gaptooth/errors.hpp"
#include "gaptooth/microsim.hpp"
#include "gaptooth/opcalc.hpp"
#include "gaptooth/ptbc.hpp"
#include "gaptooth/refmodel.hpp"
#include "gaptooth/spectra.hpp"

namespace gaptooth::cli {

namespace {

class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct Geometry {
  double length = 2.0 * std::numbers::pi;
  std::vector<int> patches;
  int npoints = 11;
  std::string r = "0.1";
};

struct Settings {
  Geometry geo;
  int order = 4;
  int delta_order = 8;
  std::string edge = "plus";
  std::string format;
  std::string output;
  std::string spectrum_csv;
  std::optional<std::string> expand_r;
  double dt = 1e-6;
  double t_end = 0.1;
  double every = 0.025;
  std::string scheme = "euler";
  std::string model = "burgers";
  std::string init = "burgers-demo";
  double c = 0.0;
  double strength = 100.0;
  double a = 0.0;
  double b = 0.0;
  std::string method = "dense";
  double blowup_cap = 1e6;
  bool no_stability_check = false;
  bool no_floor = false;
};

Rational ratio_from(const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

int ptbc_p(int order) {
  if (order < 2 || order > 16 || order % 2 != 0) throw ConfigError("--order must be an even number in 2..16");
  return order / 2;
}

Edge edge_from(const std::string& name) {
  if (name == "plus") return Edge::plus;
  if (name == "minus") return Edge::minus;
  throw ConfigError("--edge must be plus or minus");
}

TimeScheme scheme_from(const std::string& name) {
  if (name == "euler") return TimeScheme::euler;
  if (name == "rk4") return TimeScheme::rk4;
  throw ConfigError("--scheme must be euler or rk4");
}

ModelSpec model_from(const Settings& s) {
  ModelSpec model;
  model.c = s.c;
  model.burgers_strength = s.strength;
  if (s.model == "diffusion") {
    model.kind = ModelKind::diffusion;
  } else if (s.model == "advection-diffusion") {
    model.kind = ModelKind::advection_diffusion;
  } else if (s.model == "burgers") {
    model.kind = ModelKind::burgers;
  } else {
    throw ConfigError("--model must be diffusion, advection-diffusion or burgers");
  }
  return model;
}

std::function<double(double)> initial_profile(const std::string& name) {
  if (name == "burgers-demo") return [](double x) { return 0.3 + 0.25 * std::sin(x) + 0.2 * std::cos(2 * x); };
  if (name == "mild") return [](double x) { return 0.3 + 0.08 * std::sin(x); };
  if (name == "cos") return [](double x) { return std::cos(x); };
  if (name == "sin") return [](double x) { return std::sin(x); };
  if (name == "zero") return [](double) { return 0.0; };
  if (name == "constant") return [](double) { return 1.0; };
  throw ConfigError("--init must be one of burgers-demo, mild, cos, sin, zero, constant");
}

PatchConfig geometry(const Settings& s, int m) {
  try {
    return build_patch_config(s.geo.length, m, ratio_from(s.geo.r), s.geo.npoints);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

// Writes to --output when given, otherwise to the primary stream.
class Sink {
public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError("cannot open output file " + path);
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

private:
  std::ofstream file_;
  std::ostream* stream_;
};

void add_geometry(CLI::App* cmd, Settings& s, std::vector<int> default_patches) {
  s.geo.patches = std::move(default_patches);
  cmd->add_option("--length", s.geo.length, "Macroscopic domain length")->capture_default_str();
  cmd->add_option("--patches,-m", s.geo.patches, "Patch counts (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--npoints,-n", s.geo.npoints, "Fine points per patch (odd)")->capture_default_str();
  cmd->add_option("--r", s.geo.r, "Patch ratio h/(2H), exact decimal or fraction")->capture_default_str();
}

int cmd_expand(const Settings& s, std::ostream& out) {
  if (s.delta_order < 1 || s.delta_order > 16) throw ConfigError("--order must lie in 1..16 for expand");
  const DeltaSeries series = expand_edge_derivative(sign_of(edge_from(s.edge)), s.delta_order);
  Sink sink(s.output, out);
  std::optional<Rational> r;
  if (s.expand_r) r = ratio_from(*s.expand_r);

  if (s.format == "csv") {
    *sink << (r ? "delta_power,has_mu,coeff,value\n" : "delta_power,has_mu,coeff\n");
    for (int k = 0; k <= series.order(); ++k) {
      for (bool has_mu : {false, true}) {
        const RPoly& c = has_mu ? series.mu(k) : series.plain(k);
        if (c.is_zero()) continue;
        *sink << k << ',' << (has_mu ? 1 : 0) << ',';
        if (r) {
          const Rational v = c.eval(*r);
          char num[40];
          std::snprintf(num, sizeof num, "%.17g", to_double(v));
          *sink << to_string(v) << ',' << num << '\n';
        } else {
          *sink << '"' << c.to_string() << '"' << '\n';
        }
      }
    }
    return kExitOk;
  }
  if (!s.format.empty() && s.format != "json") throw ConfigError("--format must be json or csv for expand");

  nlohmann::json j;
  if (r) {
    j = to_json(series.substituted(*r));
    j["r"] = to_string(*r);
    for (auto& term : j["terms"]) {
      Rational value = 0;
      for (const auto& c : term["coeff"]) value += parse_rational(c[0].get<std::string>());
      term["value"] = to_double(value);
    }
  } else {
    j = to_json(series);
  }
  j["edge"] = s.edge;
  *sink << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_stencil(const Settings& s, std::ostream& out) {
  const Rational r = ratio_from(s.geo.r);
  if (r <= 0 || r > Rational(1, 2)) throw ConfigError("--r must lie in (0, 1/2]");
  const PtbcStencil st = make_stencil(ptbc_p(s.order), r, edge_from(s.edge));
  nlohmann::json j = to_json(st);
  j["exactness_order"] = exactness_order(st);
  Sink sink(s.output, out);
  *sink << j.dump(2) << '\n';
  return kExitOk;
}

std::string with_suffix(const std::string& path, int m) {
  const auto dot = path.rfind('.');
  const std::string tag = "_m" + std::to_string(m);
  if (dot == std::string::npos || dot < path.find_last_of('/') + 1) return path + tag;
  return path.substr(0, dot) + tag + path.substr(dot);
}

int cmd_spectrum(const Settings& s, std::ostream& out) {
  const int p = ptbc_p(s.order);
  const TimeScheme scheme = scheme_from(s.scheme);
  std::vector<TableRow> rows;
  for (int m : s.geo.patches) {
    const PatchConfig cfg = geometry(s, m);
    const Spectrum spectrum = diffusion_spectrum(cfg, p, s.dt, scheme);
    rows.push_back(table_row(spectrum));
    if (!s.spectrum_csv.empty()) {
      const std::string path = s.geo.patches.size() == 1 ? s.spectrum_csv : with_suffix(s.spectrum_csv, m);
      std::ofstream file(path);
      if (!file) throw ConfigError("cannot open " + path);
      write_spectrum_csv(file, spectrum);
    }
  }
  Sink sink(s.output, out);
  if (s.format == "csv") {
    write_table_csv(*sink, rows);
  } else if (s.format.empty() || s.format == "table") {
    write_table_text(*sink, rows);
  } else {
    throw ConfigError("--format must be table or csv for spectrum");
  }
  return kExitOk;
}

int cmd_simulate(const Settings& s, std::ostream& out) {
  if (s.geo.patches.size() != 1) throw ConfigError("simulate takes a single --patches value");
  const PatchConfig cfg = geometry(s, s.geo.patches.front());
  const ModelSpec model = model_from(s);
  const PtbcPair stencils = make_ptbc_pair(ptbc_p(s.order), cfg.r);
  const MicroState s0 = sample_state(cfg, initial_profile(s.init));

  IntegrateOptions opts;
  opts.blowup_cap = s.blowup_cap;
  opts.enforce_stability = !s.no_stability_check;
  if (s.every > 0.0) {
    const long count = std::lround(std::floor(s.t_end / s.every + 1e-9));
    for (long k = 0; k <= count; ++k) opts.output_times.push_back(static_cast<double>(k) * s.every);
    if (opts.output_times.back() < s.t_end - 0.5 * s.dt) opts.output_times.push_back(s.t_end);
  }
  std::vector<MicroState> trajectory;
  try {
    trajectory = integrate(s0, cfg, model, stencils, s.dt, s.t_end, scheme_from(s.scheme), opts);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  Sink sink(s.output, out);
  write_trajectory_csv(*sink, cfg, trajectory);
  return kExitOk;
}

int cmd_macro_eig(const Settings& s, std::ostream& out) {
  if (s.geo.patches.size() != 1) throw ConfigError("macro-eig takes a single --patches value");
  const int m = s.geo.patches.front();
  if (s.order < 2 || s.order > 6 || s.order % 2 != 0) throw ConfigError("--order must be 2, 4 or 6 for macro-eig");
  MacroOperator op;
  try {
    op = macro_stencil(m, s.order / 2, PdeCoefficients{s.a, s.b, s.c}, s.geo.length / m);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::vector<std::complex<double>> values;
  if (s.method == "dense") {
    values = macro_eigenvalues(op);
  } else if (s.method == "symbol") {
    values = macro_symbol_eigenvalues(op);
  } else {
    throw ConfigError("--method must be dense or symbol");
  }
  Sink sink(s.output, out);
  write_macro_spectrum_csv(*sink, values, s.dt);
  return kExitOk;
}

int cmd_convergence(const Settings& s, std::ostream& out) {
  const int p = ptbc_p(s.order);
  const TimeScheme scheme = scheme_from(s.scheme);
  if (s.geo.patches.size() < 3) throw ConfigError("convergence needs at least three --patches values");
  std::vector<double> spacing;
  std::vector<double> errors;
  std::vector<double> rates;
  double floor = 0.0;
  for (int m : s.geo.patches) {
    const PatchConfig cfg = geometry(s, m);
    const double lambda = diffusion_spectrum(cfg, p, s.dt, scheme).slow()[1].real();
    spacing.push_back(cfg.H);
    rates.push_back(lambda);
    errors.push_back(lambda + 1.0);
    if (!s.no_floor) floor = std::max(floor, time_step_floor(cfg, p, s.dt, scheme));
  }
  const ConvergenceFit fit = convergence_order(spacing, errors, floor);
  Sink sink(s.output, out);
  *sink << "m,H,lambda23,error,used\n";
  char line[200];
  for (std::size_t k = 0; k < spacing.size(); ++k) {
    const bool used = std::find(fit.used.begin(), fit.used.end(), static_cast<int>(k)) != fit.used.end();
    std::snprintf(line, sizeof line, "%d,%.12g,%.12g,%.6e,%d\n", s.geo.patches[k], spacing[k], rates[k],
                  errors[k], used ? 1 : 0);
    *sink << line;
  }
  if (fit.degenerate) {
    *sink << "# fitted order: degenerate (errors at or below the floor " << floor << ")\n";
  } else {
    std::snprintf(line, sizeof line, "# fitted order: %.4f (floor %.3e)\n", fit.order, floor);
    *sink << line;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gap-tooth patch simulations with high-order patch boundary conditions", "gaptooth"};
  app.set_config("--config", "", "TOML configuration file (command-line flags take precedence)");
  app.require_subcommand(1);

  Settings expand_s;
  auto* expand = app.add_subcommand("expand", "Exact operator series for the patch-edge gradient");
  expand->add_option("--order,-K", expand_s.delta_order, "Highest delta power (<= 16)")->capture_default_str();
  expand->add_option("--r", expand_s.expand_r, "Substitute a numeric patch ratio");
  expand->add_option("--edge", expand_s.edge, "plus or minus")->capture_default_str();
  expand->add_option("--format", expand_s.format, "json or csv");
  expand->add_option("--output,-o", expand_s.output, "Output file");

  Settings stencil_s;
  auto* stencil = app.add_subcommand("stencil", "Numeric PtBC weights over macroscopic grid offsets");
  stencil->add_option("--order", stencil_s.order, "Consistency order 2p")->capture_default_str();
  stencil->add_option("--r", stencil_s.geo.r, "Patch ratio")->capture_default_str();
  stencil->add_option("--edge", stencil_s.edge, "plus or minus")->capture_default_str();
  stencil->add_option("--output,-o", stencil_s.output, "Output file");

  Settings spectrum_s;
  auto* spectrum = app.add_subcommand("spectrum", "Growth rates of the one-microstep diffusion map");
  add_geometry(spectrum, spectrum_s, {4, 8, 16, 32});
  spectrum->add_option("--order", spectrum_s.order, "PtBC consistency order 2p")->capture_default_str();
  spectrum->add_option("--dt", spectrum_s.dt, "Microscopic time step")->capture_default_str();
  spectrum->add_option("--scheme", spectrum_s.scheme, "euler or rk4")->capture_default_str();
  spectrum->add_option("--format", spectrum_s.format, "table or csv");
  spectrum->add_option("--spectrum-csv", spectrum_s.spectrum_csv, "Write every growth rate to this CSV");
  spectrum->add_option("--output,-o", spectrum_s.output, "Output file");

  Settings simulate_s;
  simulate_s.order = 6;
  simulate_s.dt = 1e-4;
  simulate_s.scheme = "rk4";
  auto* simulate = app.add_subcommand("simulate", "Integrate the patch system and write a trajectory CSV");
  add_geometry(simulate, simulate_s, {8});
  simulate->add_option("--model", simulate_s.model, "diffusion, advection-diffusion or burgers")->capture_default_str();
  simulate->add_option("--c", simulate_s.c, "Advection speed")->capture_default_str();
  simulate->add_option("--strength", simulate_s.strength, "Burgers advection strength")->capture_default_str();
  simulate->add_option("--init", simulate_s.init, "burgers-demo, mild, cos, sin, zero, constant")->capture_default_str();
  simulate->add_option("--order", simulate_s.order, "PtBC consistency order 2p")->capture_default_str();
  simulate->add_option("--dt", simulate_s.dt, "Microscopic time step")->capture_default_str();
  simulate->add_option("--t-end", simulate_s.t_end, "End time")->capture_default_str();
  simulate->add_option("--every", simulate_s.every, "Output interval (0: first and last only)")->capture_default_str();
  simulate->add_option("--scheme", simulate_s.scheme, "euler or rk4")->capture_default_str();
  simulate->add_option("--blowup-cap", simulate_s.blowup_cap, "Abort when |u| exceeds this")->capture_default_str();
  simulate->add_flag("--no-stability-check", simulate_s.no_stability_check, "Skip the explicit time-step guard");
  simulate->add_option("--output,-o", simulate_s.output, "Output file");

  Settings macro_s;
  macro_s.order = 6;
  auto* macro = app.add_subcommand("macro-eig", "Eigenvalues of the classical macroscale discretisation");
  add_geometry(macro, macro_s, {16});
  macro->add_option("--order", macro_s.order, "2, 4 or 6")->capture_default_str();
  macro->add_option("--a", macro_s.a, "Fourth-order coefficient")->capture_default_str();
  macro->add_option("--b", macro_s.b, "Dispersion coefficient")->capture_default_str();
  macro->add_option("--c", macro_s.c, "Advection coefficient")->capture_default_str();
  macro->add_option("--method", macro_s.method, "dense or symbol")->capture_default_str();
  macro->add_option("--dt", macro_s.dt, "Step used for the abs_mu column")->capture_default_str();
  macro->add_option("--output,-o", macro_s.output, "Output file");

  Settings conv_s;
  auto* conv = app.add_subcommand("convergence", "Fitted order of |lambda_2 + 1| against H");
  add_geometry(conv, conv_s, {4, 8, 16, 32});
  conv->add_option("--order", conv_s.order, "PtBC consistency order 2p")->capture_default_str();
  conv->add_option("--dt", conv_s.dt, "Microscopic time step")->capture_default_str();
  conv->add_option("--scheme", conv_s.scheme, "euler or rk4")->capture_default_str();
  conv->add_flag("--no-floor", conv_s.no_floor, "Keep points below the time-step floor");
  conv->add_option("--output,-o", conv_s.output, "Output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (expand->parsed()) return cmd_expand(expand_s, out);
    if (stencil->parsed()) return cmd_stencil(stencil_s, out);
    if (spectrum->parsed()) return cmd_spectrum(spectrum_s, out);
    if (simulate->parsed()) return cmd_simulate(simulate_s, out);
    if (macro->parsed()) return cmd_macro_eig(macro_s, out);
    if (conv->parsed()) return cmd_convergence(conv_s, out);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace gaptooth::cli
