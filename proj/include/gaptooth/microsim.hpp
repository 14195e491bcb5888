#pragma once

// Method-of-lines microscale solver on an array of small periodic-coupled
// patches. Each patch carries n fine points spanning [X_j - h/2, X_j + h/2];
// the flux at each patch edge is imposed through one ghost point whose value
// makes the centred difference at the edge point equal the PtBC gradient.

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "gaptooth/opcalc.hpp"
#include "gaptooth/ptbc.hpp"

namespace gaptooth {

struct PatchConfig {
  double length;  ///< macroscopic domain length L
  int m;          ///< number of patches
  Rational r;     ///< h / (2H)
  int n;          ///< fine points per patch (odd)
  double H;       ///< macroscopic spacing L/m
  double h;       ///< patch width 2 r H
  double dx;      ///< fine spacing h/(n-1)

  int centre_index() const { return (n - 1) / 2; }
  double centre(int j) const { return j * H; }
  /// Position of fine point i in patch j.
  double x(int j, int i) const { return centre(j) - 0.5 * h + i * dx; }
  int size() const { return m * n; }
};

/// Throws std::invalid_argument unless m >= 2, n odd >= 3, 0 < r <= 1/2, L > 0.
PatchConfig build_patch_config(double length, int m, const Rational& r, int n);

struct MicroState {
  double t = 0.0;
  int m = 0;
  int n = 0;
  std::vector<double> v;  ///< v[j*n + i]

  MicroState() = default;
  MicroState(const PatchConfig& cfg, double time = 0.0)
      : t(time), m(cfg.m), n(cfg.n), v(static_cast<std::size_t>(cfg.size()), 0.0) {}

  double& at(int j, int i) { return v[static_cast<std::size_t>(j * n + i)]; }
  double at(int j, int i) const { return v[static_cast<std::size_t>(j * n + i)]; }
  std::span<const double> patch(int j) const {
    return std::span<const double>(v).subspan(static_cast<std::size_t>(j * n), static_cast<std::size_t>(n));
  }
};

/// Samples f at every fine point.
MicroState sample_state(const PatchConfig& cfg, const std::function<double(double)>& f, double t = 0.0);

enum class ModelKind { diffusion, advection_diffusion, burgers };

struct ModelSpec {
  ModelKind kind = ModelKind::diffusion;
  double c = 0.0;                  ///< advection speed, u_t = u_xx - c u_x
  double burgers_strength = 100.0; ///< u_t = u_xx - strength * u u_x

  bool is_linear() const { return kind != ModelKind::burgers; }
};

enum class TimeScheme { euler, rk4 };

/// Macroscopic grid values: the centre fine value of each patch.
std::vector<double> extract_macro(const MicroState& s);

struct GhostPair {
  double left;
  double right;
};

/// One ghost value beyond each patch edge, from the PtBC gradients of U.
std::vector<GhostPair> ghost_values(const MicroState& s, const PatchConfig& cfg, const PtbcPair& stencils,
                                    std::span<const double> macro);

/// Time derivative of every fine value. Throws NumericalError on non-finite
/// input.
std::vector<double> rhs(const MicroState& s, const PatchConfig& cfg, const ModelSpec& model,
                        const PtbcPair& stencils);

/// One explicit step; ghosts are recomputed at every stage.
MicroState step(const MicroState& s, const PatchConfig& cfg, const ModelSpec& model, const PtbcPair& stencils,
                double dt, TimeScheme scheme);

/// Largest stable dt for pure diffusion on the fine grid.
double stability_limit(const PatchConfig& cfg, TimeScheme scheme);

struct IntegrateOptions {
  std::vector<double> output_times;  ///< empty: only the initial and final states
  double blowup_cap = 1e6;
  bool enforce_stability = true;
};

/// Snapshots at the requested output times (rounded to whole steps).
/// Throws std::invalid_argument for dt above the stability limit (unless
/// disabled) and NumericalError when |v| exceeds the blow-up cap.
std::vector<MicroState> integrate(const MicroState& s0, const PatchConfig& cfg, const ModelSpec& model,
                                  const PtbcPair& stencils, double dt, double t_end, TimeScheme scheme,
                                  const IntegrateOptions& options = {});

/// t, patch_j, fine_i, x, u
void write_trajectory_csv(std::ostream& os, const PatchConfig& cfg, std::span<const MicroState> trajectory);

}  // namespace gaptooth
