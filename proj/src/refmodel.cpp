#include "gaptooth/refmodel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "gaptooth/errors.hpp"
#include "gaptooth/opcalc.hpp"

namespace gaptooth {

namespace {

struct Term {
  int coupling;  // power of the coupling parameter
  int delta_power;
  bool has_mu;
  Rational coeff;
};

// Per unit PDE coefficient, before the 1/H^q scaling.
const std::vector<Term> kDiffusion = {{1, 2, false, 1}, {2, 4, false, Rational(-1, 12)}, {3, 6, false, Rational(1, 90)}};
const std::vector<Term> kAdvection = {{1, 1, true, 1}, {2, 3, true, Rational(-1, 6)}, {3, 5, true, Rational(1, 30)}};
const std::vector<Term> kDispersion = {{2, 3, true, 1}, {3, 5, true, Rational(-1, 4)}};
const std::vector<Term> kFourth = {{2, 4, false, 1}, {3, 6, false, Rational(-1, 6)}};

void accumulate(std::map<int, double>& weights, const std::vector<Term>& terms, int p, double scale) {
  if (scale == 0.0) return;
  DeltaSeries s(6);
  for (const auto& t : terms) {
    if (t.coupling > p) continue;
    (t.has_mu ? s.mu(t.delta_power) : s.plain(t.delta_power)) += RPoly(t.coeff);
  }
  for (const auto& [offset, w] : shift_weights(s, Rational(0))) weights[offset] += scale * to_double(w);
}

std::vector<std::complex<double>> sorted(std::vector<std::complex<double>> values) {
  std::sort(values.begin(), values.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return values;
}

}  // namespace

MacroOperator macro_stencil(int m, int p, const PdeCoefficients& pde, double H) {
  if (p < 1 || p > 3) throw std::invalid_argument("macro_stencil: p must be 1, 2 or 3");
  if (!(H > 0.0)) throw std::invalid_argument("macro_stencil: H must be positive");
  MacroOperator op;
  op.p = p;
  op.pde = pde;
  op.H = H;
  accumulate(op.weights, kDiffusion, p, 1.0 / (H * H));
  accumulate(op.weights, kAdvection, p, -pde.c / H);
  accumulate(op.weights, kDispersion, p, -pde.b / (H * H * H));
  accumulate(op.weights, kFourth, p, -pde.a / (H * H * H * H));
  std::erase_if(op.weights, [](const auto& kv) { return kv.second == 0.0; });

  int reach = 0;
  for (const auto& [offset, w] : op.weights) reach = std::max(reach, std::abs(offset));
  if (m < 2 * reach + 1) throw std::invalid_argument("macro_stencil: m too small for the stencil bandwidth");

  op.matrix = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    for (const auto& [offset, w] : op.weights) op.matrix(j, ((j + offset) % m + m) % m) += w;
  }
  return op;
}

std::vector<std::complex<double>> macro_eigenvalues(const MacroOperator& op) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(op.matrix, false);
  if (solver.info() != Eigen::Success) throw NumericalError("macro_eigenvalues: eigensolver did not converge");
  const Eigen::VectorXcd values = solver.eigenvalues();
  return sorted(std::vector<std::complex<double>>(values.data(), values.data() + values.size()));
}

std::vector<std::complex<double>> macro_symbol_eigenvalues(const MacroOperator& op) {
  const int m = op.m();
  std::vector<std::complex<double>> values;
  for (int q = 0; q < m; ++q) {
    std::complex<double> sum = 0.0;
    for (const auto& [offset, w] : op.weights) {
      const double theta = 2.0 * std::numbers::pi * q * offset / m;
      sum += w * std::complex<double>(std::cos(theta), std::sin(theta));
    }
    values.push_back(sum);
  }
  return sorted(std::move(values));
}

void write_macro_spectrum_csv(std::ostream& os, const std::vector<std::complex<double>>& lambda, double dt) {
  os << "index,re_lambda,im_lambda,abs_mu,group\n";
  char line[160];
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    std::snprintf(line, sizeof line, "%zu,%.12g,%.12g,%.15g,%d\n", k, lambda[k].real(), lambda[k].imag(),
                  std::exp(lambda[k].real() * dt), 0);
    os << line;
  }
}

}  // namespace gaptooth
