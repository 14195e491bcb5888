#pragma once

// Exact formal-series calculus in the centred-difference operator delta and
// the centred-mean operator mu on a uniform macroscopic grid.
//
// Every coefficient is a polynomial in the patch ratio r with exact rational
// coefficients, so one expansion serves every patch geometry.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace gaptooth {

/// Arbitrary-precision rational; always stored in lowest terms with a
/// positive denominator.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// "num/den" (or "num" when den == 1).
std::string to_string(const Rational& q);

/// Parses "3", "-7/240", "0.1", "1e-2" exactly. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

double to_double(const Rational& q);

/// Polynomial in r with exact rational coefficients; index = power of r.
class RPoly {
public:
  RPoly() = default;
  RPoly(Rational constant);  // NOLINT(google-explicit-constructor)
  explicit RPoly(std::vector<Rational> coeffs);

  static RPoly r() { return RPoly(std::vector<Rational>{Rational(0), Rational(1)}); }

  /// Degree of the polynomial; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  Rational coeff(int power) const;

  Rational eval(const Rational& r) const;
  double eval(double r) const;

  RPoly operator-() const;
  RPoly& operator+=(const RPoly& o);
  RPoly& operator-=(const RPoly& o);
  RPoly& operator*=(const RPoly& o);
  RPoly& operator*=(const Rational& s);

  friend RPoly operator+(RPoly a, const RPoly& b) { return a += b; }
  friend RPoly operator-(RPoly a, const RPoly& b) { return a -= b; }
  friend RPoly operator*(RPoly a, const RPoly& b) { return a *= b; }
  friend RPoly operator*(RPoly a, const Rational& s) { return a *= s; }
  friend RPoly operator*(const Rational& s, RPoly a) { return a *= s; }
  friend bool operator==(const RPoly&, const RPoly&) = default;

  std::string to_string() const;

private:
  void strip();
  std::vector<Rational> coeffs_;
};

/// Truncated series  sum_k plain[k] delta^k + sum_k mu[k] mu delta^k,
/// k = 0..order, with mu^2 always reduced to 1 + delta^2/4.
class DeltaSeries {
public:
  /// Zero series of the given truncation order.
  explicit DeltaSeries(int order);

  static DeltaSeries one(int order);
  /// c * delta^power (or c * mu * delta^power). Terms above order vanish.
  static DeltaSeries monomial(int order, int power, bool has_mu, RPoly c = Rational(1));

  int order() const { return order_; }
  const RPoly& plain(int k) const { return plain_.at(static_cast<std::size_t>(k)); }
  const RPoly& mu(int k) const { return mu_.at(static_cast<std::size_t>(k)); }
  RPoly& plain(int k) { return plain_.at(static_cast<std::size_t>(k)); }
  RPoly& mu(int k) { return mu_.at(static_cast<std::size_t>(k)); }

  bool is_zero() const;
  /// True when mu[k] vanishes for even k and plain[k] for odd k, i.e. every
  /// term expands into integer grid shifts.
  bool has_parity_form() const;
  /// Highest delta power carrying a nonzero coefficient; -1 for zero.
  int highest_power() const;

  /// Same operator at a different truncation order (drops or zero-pads).
  DeltaSeries truncated(int new_order) const;
  /// Substitute a value for r; the result has constant coefficients.
  DeltaSeries substituted(const Rational& r) const;

  DeltaSeries operator-() const;
  DeltaSeries& operator*=(const Rational& s);
  friend bool operator==(const DeltaSeries&, const DeltaSeries&) = default;

private:
  int order_;
  std::vector<RPoly> plain_;
  std::vector<RPoly> mu_;
};

/// Term-wise sum. Throws std::invalid_argument on mismatched orders.
DeltaSeries series_add(const DeltaSeries& a, const DeltaSeries& b);
/// Product truncated at the common order, mu^2 reduced.
DeltaSeries series_mul(const DeltaSeries& a, const DeltaSeries& b);

inline DeltaSeries operator+(const DeltaSeries& a, const DeltaSeries& b) { return series_add(a, b); }
inline DeltaSeries operator-(const DeltaSeries& a, const DeltaSeries& b) { return series_add(a, -b); }
inline DeltaSeries operator*(const DeltaSeries& a, const DeltaSeries& b) { return series_mul(a, b); }

/// H d/dx = 2 asinh(delta/2), truncated at delta^order.
DeltaSeries asinh_series(int order);

/// (1 + w)^(sign * r) with r symbolic. w must have no constant term.
DeltaSeries binomial_power(const DeltaSeries& w, int sign, int order);

/// (1 + delta^2/4)^exponent for a rational exponent.
DeltaSeries mu_squared_power(const Rational& exponent, int order);

/// Rewrites a series into parity form (plain-even / mu-odd) by multiplying
/// the offending part by mu / sqrt(1 + delta^2/4), which is the identity.
DeltaSeries to_parity_form(const DeltaSeries& s);

/// E^{sign r} H d/dx in parity form, truncated at delta^order.
DeltaSeries expand_edge_derivative(int sign, int order = 8);

/// Keeps delta powers <= 2p; the result has order 2p.
DeltaSeries gamma_truncate(const DeltaSeries& s, int p);

/// Integer-shift expansion of a parity-form series at a given r:
/// offset k -> exact weight of E^k. Throws std::invalid_argument when the
/// series is not in parity form.
std::map<int, Rational> shift_weights(const DeltaSeries& s, const Rational& r);

/// {order, terms:[{delta_power, has_mu, coeff:[["num/den", r_power], ...]}]}
nlohmann::json to_json(const DeltaSeries& s);
DeltaSeries series_from_json(const nlohmann::json& j);

}  // namespace gaptooth
