#pragma once

// Patch boundary conditions: numeric stencils over macroscopic grid values
// that estimate H * du/dx at the edge of a patch, X_j +/- r H.

#include <span>
#include <vector>

#include <json.hpp>

#include "gaptooth/opcalc.hpp"

namespace gaptooth {

enum class Edge : int { minus = -1, plus = 1 };

inline int sign_of(Edge e) { return static_cast<int>(e); }

class PtbcStencil {
public:
  /// Weights for offsets -p..p, weights[k + p] multiplies U_{j+k}.
  PtbcStencil(int p, Rational r, Edge edge, std::vector<double> weights);

  /// All-zero weights: the insulating (uncoupled) patch condition.
  static PtbcStencil insulating(int p, Rational r, Edge edge);

  int p() const { return p_; }
  const Rational& r() const { return r_; }
  Edge edge() const { return edge_; }
  std::span<const double> weights() const { return weights_; }
  double weight(int offset) const;

private:
  int p_;
  Rational r_;
  Edge edge_;
  std::vector<double> weights_;
};

/// The pair of stencils closing both edges of every patch.
struct PtbcPair {
  PtbcStencil minus;
  PtbcStencil plus;

  const PtbcStencil& at(Edge e) const { return e == Edge::plus ? plus : minus; }
};

/// Exact shift expansion of a parity-form series at ratio r, converted to
/// doubles once. Throws std::invalid_argument for mixed parity or r outside
/// (0, 1/2].
PtbcStencil stencil_from_series(const DeltaSeries& s, const Rational& r, Edge edge);

/// The edge-gradient operator truncated after delta^(2p): p = 1, 2, 3, 4
/// give the second-, fourth-, sixth- and eighth-order conditions.
PtbcStencil make_stencil(int p, const Rational& r, Edge edge);
PtbcPair make_ptbc_pair(int p, const Rational& r);

/// Sum_k w_k U_{(j+k) mod m}. Throws std::invalid_argument when m < 2.
double eval_edge_gradient(const PtbcStencil& st, std::span<const double> macro, int j);

/// Largest d such that the stencil differentiates every polynomial of degree
/// <= d exactly (to 100 ulp of the term scale).
int exactness_order(const PtbcStencil& st);

/// {p, r, sign, weights:{"-2": ..., ...}}
nlohmann::json to_json(const PtbcStencil& st);

}  // namespace gaptooth
