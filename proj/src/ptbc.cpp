#include "gaptooth/ptbc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gaptooth {

namespace {

void check_ratio(const Rational& r) {
  if (r <= 0 || r > Rational(1, 2)) throw std::invalid_argument("patch ratio r must lie in (0, 1/2]");
}

}  // namespace

PtbcStencil::PtbcStencil(int p, Rational r, Edge edge, std::vector<double> weights)
    : p_(p), r_(std::move(r)), edge_(edge), weights_(std::move(weights)) {
  if (p < 0) throw std::invalid_argument("stencil order must be non-negative");
  if (weights_.size() != static_cast<std::size_t>(2 * p + 1)) {
    throw std::invalid_argument("stencil needs 2p+1 weights");
  }
}

PtbcStencil PtbcStencil::insulating(int p, Rational r, Edge edge) {
  return PtbcStencil(p, std::move(r), edge, std::vector<double>(static_cast<std::size_t>(2 * p + 1), 0.0));
}

double PtbcStencil::weight(int offset) const {
  if (offset < -p_ || offset > p_) return 0.0;
  return weights_[static_cast<std::size_t>(offset + p_)];
}

PtbcStencil stencil_from_series(const DeltaSeries& s, const Rational& r, Edge edge) {
  check_ratio(r);
  const auto exact = shift_weights(s, r);
  const int p = std::max(0, (s.highest_power() + 1) / 2);
  std::vector<double> weights(static_cast<std::size_t>(2 * p + 1), 0.0);
  for (const auto& [offset, w] : exact) weights[static_cast<std::size_t>(offset + p)] = to_double(w);
  return PtbcStencil(p, r, edge, std::move(weights));
}

PtbcStencil make_stencil(int p, const Rational& r, Edge edge) {
  if (p < 1) throw std::invalid_argument("PtBC order p must be >= 1");
  const DeltaSeries full = expand_edge_derivative(sign_of(edge), 2 * p);
  return stencil_from_series(gamma_truncate(full, p), r, edge);
}

PtbcPair make_ptbc_pair(int p, const Rational& r) {
  return PtbcPair{make_stencil(p, r, Edge::minus), make_stencil(p, r, Edge::plus)};
}

double eval_edge_gradient(const PtbcStencil& st, std::span<const double> macro, int j) {
  const int m = static_cast<int>(macro.size());
  if (m < 2) throw std::invalid_argument("eval_edge_gradient: need at least two patches");
  double acc = 0.0;
  for (int k = -st.p(); k <= st.p(); ++k) {
    const int idx = ((j + k) % m + m) % m;
    acc += st.weight(k) * macro[static_cast<std::size_t>(idx)];
  }
  return acc;
}

int exactness_order(const PtbcStencil& st) {
  // Work in units H = 1, X_j = 0, so q(xi) = xi^d and H q'(edge) = d (+/-r)^(d-1).
  const double edge = sign_of(st.edge()) * to_double(st.r());
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const int max_degree = 2 * st.p() + 4;
  int exact = -1;
  for (int d = 0; d <= max_degree; ++d) {
    double applied = 0.0;
    double scale = 0.0;
    for (int k = -st.p(); k <= st.p(); ++k) {
      const double term = st.weight(k) * std::pow(static_cast<double>(k), d);
      applied += term;
      scale += std::abs(term);
    }
    const double expected = d == 0 ? 0.0 : d * std::pow(edge, d - 1);
    scale = std::max({scale, std::abs(expected), 1.0});
    if (std::abs(applied - expected) > 100.0 * eps * scale) break;
    exact = d;
  }
  return exact;
}

nlohmann::json to_json(const PtbcStencil& st) {
  nlohmann::json weights = nlohmann::json::object();
  for (int k = -st.p(); k <= st.p(); ++k) weights[std::to_string(k)] = st.weight(k);
  return {{"p", st.p()}, {"r", to_string(st.r())}, {"sign", sign_of(st.edge())}, {"weights", weights}};
}

}  // namespace gaptooth
