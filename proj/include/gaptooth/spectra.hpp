#pragma once

// Eigen-analysis of the one-microstep map of the coupled patch system.

#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gaptooth/microsim.hpp"

namespace gaptooth {

struct OneStepMap {
  Eigen::MatrixXd matrix;  ///< (m n) x (m n); column i is the step of unit state e_i
  double dt = 0.0;
  int m = 0;
  int n = 0;
  std::string provenance;
};

/// Assembles the map column by column from unit perturbations of zero.
/// Refuses nonlinear models with std::invalid_argument.
OneStepMap assemble_map(const PatchConfig& cfg, const ModelSpec& model, const PtbcPair& stencils, double dt,
                        TimeScheme scheme);

struct Spectrum {
  std::vector<std::complex<double>> mu;      ///< eigenvalues of the map
  std::vector<std::complex<double>> lambda;  ///< log(mu)/dt
  std::vector<int> group;                    ///< 0 = slow, l = l-th internal family
  int m = 0;
  double dt = 0.0;

  std::span<const std::complex<double>> slow() const {
    return std::span<const std::complex<double>>(lambda).first(static_cast<std::size_t>(m));
  }
  double max_abs_mu() const;
};

/// All eigenvalues, sorted by descending Re(lambda) and chunked into groups
/// of m. Throws NumericalError when the eigensolver fails.
Spectrum eigen_growth(const OneStepMap& map);

/// Convenience: diffusion on a 2*pi-periodic domain with the order-p PtBC.
Spectrum diffusion_spectrum(const PatchConfig& cfg, int p, double dt, TimeScheme scheme = TimeScheme::euler);

struct TableRow {
  int m = 0;
  double lambda1 = 0.0;
  double lambda23 = 0.0;
  std::optional<double> lambda45;
  std::optional<double> lambda67;
  double internal = 0.0;  ///< leading member of the first internal family
};

TableRow table_row(const Spectrum& spectrum);

/// One row per m: diffusion with n fine points, ratio r and the PtBC of the
/// given consistency order (2, 4, 6 or 8).
std::vector<TableRow> table_report(std::span<const int> m_list, int n, const Rational& r, int ptbc_order, double dt,
                                   TimeScheme scheme = TimeScheme::euler);

void write_table_text(std::ostream& os, std::span<const TableRow> rows);
void write_table_csv(std::ostream& os, std::span<const TableRow> rows);
/// index, re_lambda, im_lambda, abs_mu, group
void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum);

struct ConvergenceFit {
  double order = 0.0;
  std::vector<int> used;  ///< indices of the points entering the fit
  bool degenerate = false;
};

/// Least-squares slope of log|error| against log(spacing). Points with
/// |error| <= floor are dropped; fewer than two survivors flag the fit as
/// degenerate. Throws std::invalid_argument with fewer than three points.
ConvergenceFit convergence_order(std::span<const double> spacing, std::span<const double> errors, double floor = 0.0);

/// Roundoff/time-discretisation floor for slow growth rates: ten times the
/// shift of lambda_2 when dt is halved.
double time_step_floor(const PatchConfig& cfg, int p, double dt, TimeScheme scheme = TimeScheme::euler);

}  // namespace gaptooth
