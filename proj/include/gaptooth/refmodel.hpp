#pragma once

// Classical high-order periodic discretisation of
//   u_t = u_xx - c u_x - b u_xxx - a u_xxxx
// on the m-point macroscopic grid. Serves as an independent oracle for the
// slow part of the gap-tooth spectrum.

#include <complex>
#include <iosfwd>
#include <map>
#include <vector>

#include <Eigen/Dense>

namespace gaptooth {

struct PdeCoefficients {
  double a = 0.0;  ///< fourth-order dissipation
  double b = 0.0;  ///< dispersion
  double c = 0.0;  ///< advection
};

struct MacroOperator {
  Eigen::MatrixXd matrix;          ///< periodic, m x m
  std::map<int, double> weights;   ///< offset -> weight of U_{j+offset}
  int p = 1;
  PdeCoefficients pde;
  double H = 0.0;

  int m() const { return static_cast<int>(matrix.rows()); }
};

/// Keeps the coupling orders 1..p (p in {1,2,3}) of the centre-manifold
/// model. Throws std::invalid_argument for bad p or when m is too small for
/// the bandwidth.
MacroOperator macro_stencil(int m, int p, const PdeCoefficients& pde, double H);

/// Dense eigenvalues, sorted by descending real part.
std::vector<std::complex<double>> macro_eigenvalues(const MacroOperator& op);

/// Closed form from the circulant symbol sum_k w_k exp(2 pi i q k / m).
std::vector<std::complex<double>> macro_symbol_eigenvalues(const MacroOperator& op);

/// Spectrum CSV (index, re_lambda, im_lambda, abs_mu, group); abs_mu is
/// |exp(lambda dt)| for the given step so the columns line up with the
/// microscale spectra.
void write_macro_spectrum_csv(std::ostream& os, const std::vector<std::complex<double>>& lambda, double dt);

}  // namespace gaptooth
