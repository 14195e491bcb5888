#include "gaptooth/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gaptooth/errors.hpp"

namespace gaptooth {

OneStepMap assemble_map(const PatchConfig& cfg, const ModelSpec& model, const PtbcPair& stencils, double dt,
                        TimeScheme scheme) {
  if (!model.is_linear()) throw std::invalid_argument("assemble_map: the one-step map is only defined for linear models");
  if (!(dt > 0.0)) throw std::invalid_argument("assemble_map: dt must be positive");
  const int size = cfg.size();
  OneStepMap map;
  map.matrix.resize(size, size);
  map.dt = dt;
  map.m = cfg.m;
  map.n = cfg.n;

  MicroState unit(cfg);
  for (int col = 0; col < size; ++col) {
    unit.v[static_cast<std::size_t>(col)] = 1.0;
    const MicroState next = step(unit, cfg, model, stencils, dt, scheme);
    unit.v[static_cast<std::size_t>(col)] = 0.0;
    map.matrix.col(col) = Eigen::Map<const Eigen::VectorXd>(next.v.data(), size);
  }

  std::ostringstream prov;
  prov << (model.kind == ModelKind::diffusion ? "diffusion" : "advection-diffusion c=" + std::to_string(model.c))
       << " m=" << cfg.m << " n=" << cfg.n << " r=" << to_string(cfg.r) << " p=" << stencils.plus.p()
       << " dt=" << dt << (scheme == TimeScheme::euler ? " euler" : " rk4");
  map.provenance = prov.str();
  return map;
}

double Spectrum::max_abs_mu() const {
  double worst = 0.0;
  for (const auto& z : mu) worst = std::max(worst, std::abs(z));
  return worst;
}

Spectrum eigen_growth(const OneStepMap& map) {
  if (!map.matrix.allFinite()) throw NumericalError("eigen_growth: map has non-finite entries");
  Eigen::EigenSolver<Eigen::MatrixXd> solver(map.matrix, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigen_growth: eigensolver did not converge");
  const Eigen::VectorXcd values = solver.eigenvalues();

  Spectrum out;
  out.m = map.m;
  out.dt = map.dt;
  std::vector<std::pair<std::complex<double>, std::complex<double>>> pairs;
  pairs.reserve(static_cast<std::size_t>(values.size()));
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    const std::complex<double> mu = values[k];
    pairs.emplace_back(mu, std::log(mu) / map.dt);
  }
  // Descending real part; conjugate pairs stay adjacent with +imag first.
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
    if (a.second.real() != b.second.real()) return a.second.real() > b.second.real();
    return a.second.imag() > b.second.imag();
  });
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    out.mu.push_back(pairs[k].first);
    out.lambda.push_back(pairs[k].second);
    out.group.push_back(static_cast<int>(k) / map.m);
  }
  return out;
}

Spectrum diffusion_spectrum(const PatchConfig& cfg, int p, double dt, TimeScheme scheme) {
  const auto stencils = make_ptbc_pair(p, cfg.r);
  return eigen_growth(assemble_map(cfg, ModelSpec{}, stencils, dt, scheme));
}

TableRow table_row(const Spectrum& spectrum) {
  const auto slow = spectrum.slow();
  const int m = spectrum.m;
  if (m < 3) throw std::invalid_argument("table_row: need at least three slow modes");
  if (static_cast<int>(spectrum.lambda.size()) < 2 * m) throw std::invalid_argument("table_row: no internal family");
  TableRow row;
  row.m = m;
  row.lambda1 = slow[0].real();
  row.lambda23 = slow[1].real();
  if (m >= 4) row.lambda45 = slow[3].real();
  if (m >= 6) row.lambda67 = slow[5].real();
  row.internal = spectrum.lambda[static_cast<std::size_t>(m)].real();
  return row;
}

std::vector<TableRow> table_report(std::span<const int> m_list, int n, const Rational& r, int ptbc_order, double dt,
                                   TimeScheme scheme) {
  if (ptbc_order < 2 || ptbc_order % 2 != 0) throw std::invalid_argument("PtBC order must be even and >= 2");
  std::vector<TableRow> rows;
  for (int m : m_list) {
    const auto cfg = build_patch_config(2.0 * std::numbers::pi, m, r, n);
    rows.push_back(table_row(diffusion_spectrum(cfg, ptbc_order / 2, dt, scheme)));
  }
  return rows;
}

namespace {

std::string fixed(const std::optional<double>& x, const char* fmt) {
  if (!x) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, *x);
  return buf;
}

}  // namespace

void write_table_text(std::ostream& os, std::span<const TableRow> rows) {
  char line[256];
  std::snprintf(line, sizeof line, "%4s | %10s | %10s | %10s | %10s | %8s\n", "m", "1", "2,3", "4,5", "6,7",
                "m+1:2m");
  os << line;
  for (const auto& row : rows) {
    std::snprintf(line, sizeof line, "%4d | %10s | %10s | %10s | %10s | %8s\n", row.m,
                  fixed(row.lambda1, "%.0e").c_str(), fixed(row.lambda23, "%.6f").c_str(),
                  fixed(row.lambda45, "%.6f").c_str(), fixed(row.lambda67, "%.6f").c_str(),
                  fixed(row.internal, "%.4g").c_str());
    os << line;
  }
}

void write_table_csv(std::ostream& os, std::span<const TableRow> rows) {
  os << "m,lambda1,lambda23,lambda45,lambda67,internal\n";
  for (const auto& row : rows) {
    os << row.m << ',' << fixed(row.lambda1, "%.12g") << ',' << fixed(row.lambda23, "%.12g") << ','
       << fixed(row.lambda45, "%.12g") << ',' << fixed(row.lambda67, "%.12g") << ','
       << fixed(row.internal, "%.12g") << '\n';
  }
}

void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum) {
  os << "index,re_lambda,im_lambda,abs_mu,group\n";
  char line[160];
  for (std::size_t k = 0; k < spectrum.lambda.size(); ++k) {
    std::snprintf(line, sizeof line, "%zu,%.12g,%.12g,%.15g,%d\n", k, spectrum.lambda[k].real(),
                  spectrum.lambda[k].imag(), std::abs(spectrum.mu[k]), spectrum.group[k]);
    os << line;
  }
}

ConvergenceFit convergence_order(std::span<const double> spacing, std::span<const double> errors, double floor) {
  if (spacing.size() != errors.size()) throw std::invalid_argument("convergence_order: size mismatch");
  if (spacing.size() < 3) throw std::invalid_argument("convergence_order: need at least three points");
  ConvergenceFit fit;
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t k = 0; k < errors.size(); ++k) {
    const double e = std::abs(errors[k]);
    if (!(e > floor) || !(spacing[k] > 0.0)) continue;
    fit.used.push_back(static_cast<int>(k));
    xs.push_back(std::log(spacing[k]));
    ys.push_back(std::log(e));
  }
  if (xs.size() < 2) {
    fit.degenerate = true;
    fit.order = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  if (sxx == 0.0) {
    fit.degenerate = true;
    fit.order = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  fit.order = sxy / sxx;
  return fit;
}

double time_step_floor(const PatchConfig& cfg, int p, double dt, TimeScheme scheme) {
  const double coarse = diffusion_spectrum(cfg, p, dt, scheme).slow()[1].real();
  const double fine = diffusion_spectrum(cfg, p, 0.5 * dt, scheme).slow()[1].real();
  return 10.0 * std::abs(coarse - fine);
}

}  // namespace gaptooth
