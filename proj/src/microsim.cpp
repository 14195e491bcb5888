#include "gaptooth/microsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gaptooth/errors.hpp"

namespace gaptooth {

PatchConfig build_patch_config(double length, int m, const Rational& r, int n) {
  if (!(length > 0.0) || !std::isfinite(length)) throw std::invalid_argument("domain length must be positive");
  if (m < 2) throw std::invalid_argument("need at least two patches");
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("fine points per patch must be odd and >= 3");
  if (r <= 0 || r > Rational(1, 2)) throw std::invalid_argument("patch ratio r must lie in (0, 1/2]");
  PatchConfig cfg{length, m, r, n, 0.0, 0.0, 0.0};
  cfg.H = length / m;
  cfg.h = 2.0 * to_double(r) * cfg.H;
  cfg.dx = cfg.h / (n - 1);
  return cfg;
}

MicroState sample_state(const PatchConfig& cfg, const std::function<double(double)>& f, double t) {
  MicroState s(cfg, t);
  for (int j = 0; j < cfg.m; ++j) {
    for (int i = 0; i < cfg.n; ++i) s.at(j, i) = f(cfg.x(j, i));
  }
  return s;
}

std::vector<double> extract_macro(const MicroState& s) {
  std::vector<double> macro(static_cast<std::size_t>(s.m));
  const int c = (s.n - 1) / 2;
  for (int j = 0; j < s.m; ++j) macro[static_cast<std::size_t>(j)] = s.at(j, c);
  return macro;
}

std::vector<GhostPair> ghost_values(const MicroState& s, const PatchConfig& cfg, const PtbcPair& stencils,
                                    std::span<const double> macro) {
  std::vector<GhostPair> ghosts(static_cast<std::size_t>(cfg.m));
  const double scale = 2.0 * cfg.dx / cfg.H;
  for (int j = 0; j < cfg.m; ++j) {
    const double g_minus = eval_edge_gradient(stencils.minus, macro, j);
    const double g_plus = eval_edge_gradient(stencils.plus, macro, j);
    ghosts[static_cast<std::size_t>(j)] = {s.at(j, 1) - scale * g_minus, s.at(j, cfg.n - 2) + scale * g_plus};
  }
  return ghosts;
}

std::vector<double> rhs(const MicroState& s, const PatchConfig& cfg, const ModelSpec& model,
                        const PtbcPair& stencils) {
  for (double x : s.v) {
    if (!std::isfinite(x)) {
      std::ostringstream msg;
      msg << "non-finite microscale value at t=" << s.t;
      throw NumericalError(msg.str());
    }
  }
  const auto macro = extract_macro(s);
  const auto ghosts = ghost_values(s, cfg, stencils, macro);
  const double inv_dx2 = 1.0 / (cfg.dx * cfg.dx);
  const double inv_2dx = 0.5 / cfg.dx;

  std::vector<double> dvdt(s.v.size());
  for (int j = 0; j < cfg.m; ++j) {
    const auto& g = ghosts[static_cast<std::size_t>(j)];
    for (int i = 0; i < cfg.n; ++i) {
      const double left = i == 0 ? g.left : s.at(j, i - 1);
      const double right = i == cfg.n - 1 ? g.right : s.at(j, i + 1);
      const double v = s.at(j, i);
      const double lap = (left - 2.0 * v + right) * inv_dx2;
      const double grad = (right - left) * inv_2dx;
      double value = lap;
      switch (model.kind) {
        case ModelKind::diffusion:
          break;
        case ModelKind::advection_diffusion:
          value -= model.c * grad;
          break;
        case ModelKind::burgers:
          value -= model.burgers_strength * v * grad;
          break;
      }
      dvdt[static_cast<std::size_t>(j * cfg.n + i)] = value;
    }
  }
  return dvdt;
}

namespace {

MicroState axpy(const MicroState& s, double a, const std::vector<double>& dir) {
  MicroState out = s;
  for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] += a * dir[k];
  return out;
}

}  // namespace

MicroState step(const MicroState& s, const PatchConfig& cfg, const ModelSpec& model, const PtbcPair& stencils,
                double dt, TimeScheme scheme) {
  if (scheme == TimeScheme::euler) {
    MicroState out = axpy(s, dt, rhs(s, cfg, model, stencils));
    out.t = s.t + dt;
    return out;
  }
  const auto k1 = rhs(s, cfg, model, stencils);
  const auto k2 = rhs(axpy(s, 0.5 * dt, k1), cfg, model, stencils);
  const auto k3 = rhs(axpy(s, 0.5 * dt, k2), cfg, model, stencils);
  const auto k4 = rhs(axpy(s, dt, k3), cfg, model, stencils);
  MicroState out = s;
  for (std::size_t k = 0; k < out.v.size(); ++k) {
    out.v[k] += dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
  }
  out.t = s.t + dt;
  return out;
}

double stability_limit(const PatchConfig& cfg, TimeScheme scheme) {
  const double dx2 = cfg.dx * cfg.dx;
  // Spectral radius of the fine Laplacian is below 4/dx^2; the RK4 region
  // reaches 2.785 on the negative real axis.
  return scheme == TimeScheme::euler ? 0.5 * dx2 : 2.785 * dx2 / 4.0;
}

std::vector<MicroState> integrate(const MicroState& s0, const PatchConfig& cfg, const ModelSpec& model,
                                  const PtbcPair& stencils, double dt, double t_end, TimeScheme scheme,
                                  const IntegrateOptions& options) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (t_end < s0.t) throw std::invalid_argument("end time precedes the initial state");
  if (s0.m != cfg.m || s0.n != cfg.n) throw std::invalid_argument("state does not match the patch configuration");
  if (options.enforce_stability && dt > stability_limit(cfg, scheme)) {
    std::ostringstream msg;
    msg << "dt=" << dt << " exceeds the explicit stability limit " << stability_limit(cfg, scheme);
    throw std::invalid_argument(msg.str());
  }

  const auto to_steps = [&](double t) { return static_cast<long>(std::llround((t - s0.t) / dt)); };
  const long total = to_steps(t_end);
  std::vector<long> outputs;
  if (options.output_times.empty()) {
    outputs = {0, total};
  } else {
    for (double t : options.output_times) {
      if (t < s0.t || t > t_end + 0.5 * dt) throw std::invalid_argument("output time outside the integration window");
      outputs.push_back(to_steps(t));
    }
    std::sort(outputs.begin(), outputs.end());
    outputs.erase(std::unique(outputs.begin(), outputs.end()), outputs.end());
  }

  std::vector<MicroState> trajectory;
  MicroState s = s0;
  auto next = outputs.begin();
  for (long k = 0;; ++k) {
    while (next != outputs.end() && *next == k) {
      MicroState snap = s;
      snap.t = s0.t + static_cast<double>(k) * dt;
      trajectory.push_back(std::move(snap));
      ++next;
    }
    if (k == total) break;
    s = step(s, cfg, model, stencils, dt, scheme);
    const auto worst = std::find_if(s.v.begin(), s.v.end(), [&](double u) {
      return !std::isfinite(u) || std::abs(u) > options.blowup_cap;
    });
    if (worst != s.v.end()) {
      const auto idx = static_cast<int>(worst - s.v.begin());
      std::ostringstream msg;
      msg << "blow-up at t=" << s.t << ": |u|=" << std::abs(*worst) << " in patch " << idx / cfg.n
          << " point " << idx % cfg.n << " (cap " << options.blowup_cap << ")";
      throw NumericalError(msg.str());
    }
  }
  return trajectory;
}

void write_trajectory_csv(std::ostream& os, const PatchConfig& cfg, std::span<const MicroState> trajectory) {
  os << "t,patch_j,fine_i,x,u\n";
  char line[160];
  for (const auto& s : trajectory) {
    for (int j = 0; j < cfg.m; ++j) {
      for (int i = 0; i < cfg.n; ++i) {
        std::snprintf(line, sizeof line, "%.10g,%d,%d,%.12g,%.12g\n", s.t, j, i, cfg.x(j, i), s.at(j, i));
        os << line;
      }
    }
  }
}

}  // namespace gaptooth
