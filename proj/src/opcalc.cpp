#include "gaptooth/opcalc.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace gaptooth {

std::string to_string(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

namespace {

BigInt parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty() ||
      !std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw std::invalid_argument("not a rational number: '" + std::string(whole) + "'");
  }
  return BigInt(std::string(digits));
}

BigInt pow10(long e) {
  BigInt p = 1;
  for (long i = 0; i < e; ++i) p *= 10;
  return p;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw std::invalid_argument("empty rational");

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const BigInt num = parse_integer(s.substr(0, slash), text);
    const BigInt den = parse_integer(s.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    value = Rational(num, den);
  } else {
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      std::string_view exp_text = s.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      exponent = parse_integer(exp_text, text).convert_to<long>();
      if (exp_negative) exponent = -exponent;
      s = s.substr(0, e);
    }
    std::string digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
      const std::string_view frac = s.substr(dot + 1);
      digits = std::string(s.substr(0, dot)) + std::string(frac);
      exponent -= static_cast<long>(frac.size());
    } else {
      digits = std::string(s);
    }
    value = Rational(parse_integer(digits, text));
    if (exponent >= 0) {
      value *= pow10(exponent);
    } else {
      value /= pow10(-exponent);
    }
  }
  return negative ? Rational(-value) : value;
}

// ---------------------------------------------------------------------------
// RPoly

RPoly::RPoly(Rational constant) : coeffs_{std::move(constant)} { strip(); }

RPoly::RPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { strip(); }

void RPoly::strip() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational RPoly::coeff(int power) const {
  if (power < 0 || power >= static_cast<int>(coeffs_.size())) return Rational(0);
  return coeffs_[static_cast<std::size_t>(power)];
}

Rational RPoly::eval(const Rational& r) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + *it;
  return acc;
}

double RPoly::eval(double r) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + to_double(*it);
  return acc;
}

RPoly RPoly::operator-() const {
  RPoly out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

RPoly& RPoly::operator+=(const RPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  strip();
  return *this;
}

RPoly& RPoly::operator-=(const RPoly& o) { return *this += -o; }

RPoly& RPoly::operator*=(const RPoly& o) {
  if (is_zero() || o.is_zero()) {
    coeffs_.clear();
    return *this;
  }
  std::vector<Rational> out(coeffs_.size() + o.coeffs_.size() - 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * o.coeffs_[j];
  }
  coeffs_ = std::move(out);
  strip();
  return *this;
}

RPoly& RPoly::operator*=(const Rational& s) {
  for (auto& c : coeffs_) c *= s;
  strip();
  return *this;
}

std::string RPoly::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Rational& c = coeffs_[i];
    if (c == 0) continue;
    std::string term = gaptooth::to_string(c < 0 ? Rational(-c) : c);
    if (i > 0) {
      term = (term == "1" ? "" : term + "*") + "r" + (i > 1 ? "^" + std::to_string(i) : "");
    }
    if (out.empty()) {
      out = (c < 0 ? "-" : "") + term;
    } else {
      out += (c < 0 ? " - " : " + ") + term;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// DeltaSeries

DeltaSeries::DeltaSeries(int order) : order_(order) {
  if (order < 0) throw std::invalid_argument("series order must be non-negative");
  plain_.resize(static_cast<std::size_t>(order) + 1);
  mu_.resize(static_cast<std::size_t>(order) + 1);
}

DeltaSeries DeltaSeries::one(int order) { return monomial(order, 0, false); }

DeltaSeries DeltaSeries::monomial(int order, int power, bool has_mu, RPoly c) {
  DeltaSeries s(order);
  if (power < 0) throw std::invalid_argument("negative delta power");
  if (power <= order) (has_mu ? s.mu(power) : s.plain(power)) = std::move(c);
  return s;
}

bool DeltaSeries::is_zero() const {
  auto zero = [](const RPoly& p) { return p.is_zero(); };
  return std::all_of(plain_.begin(), plain_.end(), zero) && std::all_of(mu_.begin(), mu_.end(), zero);
}

bool DeltaSeries::has_parity_form() const {
  for (int k = 0; k <= order_; ++k) {
    if (k % 2 == 0 && !mu(k).is_zero()) return false;
    if (k % 2 == 1 && !plain(k).is_zero()) return false;
  }
  return true;
}

int DeltaSeries::highest_power() const {
  for (int k = order_; k >= 0; --k) {
    if (!plain(k).is_zero() || !mu(k).is_zero()) return k;
  }
  return -1;
}

DeltaSeries DeltaSeries::truncated(int new_order) const {
  DeltaSeries out(new_order);
  for (int k = 0; k <= std::min(order_, new_order); ++k) {
    out.plain(k) = plain(k);
    out.mu(k) = mu(k);
  }
  return out;
}

DeltaSeries DeltaSeries::substituted(const Rational& r) const {
  DeltaSeries out(order_);
  for (int k = 0; k <= order_; ++k) {
    out.plain(k) = RPoly(plain(k).eval(r));
    out.mu(k) = RPoly(mu(k).eval(r));
  }
  return out;
}

DeltaSeries DeltaSeries::operator-() const {
  DeltaSeries out = *this;
  out *= Rational(-1);
  return out;
}

DeltaSeries& DeltaSeries::operator*=(const Rational& s) {
  for (auto& p : plain_) p *= s;
  for (auto& p : mu_) p *= s;
  return *this;
}

DeltaSeries series_add(const DeltaSeries& a, const DeltaSeries& b) {
  if (a.order() != b.order()) throw std::invalid_argument("series_add: mismatched truncation orders");
  DeltaSeries out = a;
  for (int k = 0; k <= a.order(); ++k) {
    out.plain(k) += b.plain(k);
    out.mu(k) += b.mu(k);
  }
  return out;
}

DeltaSeries series_mul(const DeltaSeries& a, const DeltaSeries& b) {
  if (a.order() != b.order()) throw std::invalid_argument("series_mul: mismatched truncation orders");
  const int order = a.order();
  const Rational quarter(1, 4);
  DeltaSeries out(order);
  // (A + mu B)(C + mu D) = AC + (1 + delta^2/4) BD + mu (AD + BC)
  for (int i = 0; i <= order; ++i) {
    for (int j = 0; i + j <= order; ++j) {
      const int k = i + j;
      if (!a.plain(i).is_zero()) {
        if (!b.plain(j).is_zero()) out.plain(k) += a.plain(i) * b.plain(j);
        if (!b.mu(j).is_zero()) out.mu(k) += a.plain(i) * b.mu(j);
      }
      if (!a.mu(i).is_zero()) {
        if (!b.plain(j).is_zero()) out.mu(k) += a.mu(i) * b.plain(j);
        if (!b.mu(j).is_zero()) {
          const RPoly bd = a.mu(i) * b.mu(j);
          out.plain(k) += bd;
          if (k + 2 <= order) out.plain(k + 2) += bd * quarter;
        }
      }
    }
  }
  return out;
}

DeltaSeries asinh_series(int order) {
  if (order < 1) throw std::invalid_argument("asinh_series: order must be >= 1");
  DeltaSeries out(order);
  // (-1)^k (2k)! / (16^k (k!)^2 (2k+1)), built by the ratio of successive terms
  Rational c = 1;
  for (int k = 0; 2 * k + 1 <= order; ++k) {
    if (k > 0) c *= Rational(-(2 * k) * (2 * k - 1), 16 * k * k);
    out.plain(2 * k + 1) = RPoly(c / (2 * k + 1));
  }
  return out;
}

DeltaSeries binomial_power(const DeltaSeries& w, int sign, int order) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("binomial_power: sign must be +1 or -1");
  if (!w.plain(0).is_zero() || !w.mu(0).is_zero()) {
    throw std::invalid_argument("binomial_power: argument has a nonzero constant term");
  }
  const DeltaSeries base = w.truncated(order);
  const RPoly exponent = RPoly::r() * Rational(sign);

  DeltaSeries out = DeltaSeries::one(order);
  DeltaSeries w_power = DeltaSeries::one(order);
  RPoly binom = Rational(1);
  // w^k starts at delta^k, so k <= order suffices.
  for (int k = 1; k <= order; ++k) {
    binom *= (exponent - RPoly(Rational(k - 1)));
    binom *= Rational(1, k);
    w_power = series_mul(w_power, base);
    DeltaSeries term = w_power;
    for (int i = 0; i <= order; ++i) {
      term.plain(i) *= binom;
      term.mu(i) *= binom;
    }
    out = series_add(out, term);
  }
  return out;
}

DeltaSeries mu_squared_power(const Rational& exponent, int order) {
  DeltaSeries out(order);
  Rational binom = 1;
  Rational quarter_power = 1;
  for (int k = 0; 2 * k <= order; ++k) {
    if (k > 0) {
      binom *= (exponent - (k - 1));
      binom /= k;
      quarter_power /= 4;
    }
    out.plain(2 * k) = RPoly(binom * quarter_power);
  }
  return out;
}

DeltaSeries to_parity_form(const DeltaSeries& s) {
  const int order = s.order();
  DeltaSeries good(order);
  DeltaSeries bad(order);
  for (int k = 0; k <= order; ++k) {
    (k % 2 == 0 ? good : bad).plain(k) = s.plain(k);
    (k % 2 == 1 ? good : bad).mu(k) = s.mu(k);
  }
  if (bad.is_zero()) return good;
  // mu / sqrt(1 + delta^2/4) == 1
  const DeltaSeries unit = series_mul(DeltaSeries::monomial(order, 0, true), mu_squared_power(Rational(-1, 2), order));
  return series_add(good, series_mul(bad, unit));
}

DeltaSeries expand_edge_derivative(int sign, int order) {
  if (order < 1) throw std::invalid_argument("expand_edge_derivative: order must be >= 1");
  // E = 1 + mu delta + delta^2/2
  const DeltaSeries w =
      DeltaSeries::monomial(order, 1, true) + DeltaSeries::monomial(order, 2, false, Rational(1, 2));
  const DeltaSeries shift = binomial_power(w, sign, order);
  return to_parity_form(series_mul(shift, asinh_series(order)));
}

DeltaSeries gamma_truncate(const DeltaSeries& s, int p) {
  if (p < 1 || 2 * p > s.order()) {
    throw std::invalid_argument("gamma_truncate: p must satisfy 1 <= p <= order/2");
  }
  return s.truncated(2 * p);
}

namespace {

using Laurent = std::map<int, BigInt>;

Laurent laurent_mul(const Laurent& a, const Laurent& b) {
  Laurent out;
  for (const auto& [i, x] : a) {
    for (const auto& [j, y] : b) out[i + j] += x * y;
  }
  return out;
}

// delta^2 = E - 2 + E^-1
Laurent delta_squared_power(int k) {
  Laurent out{{0, 1}};
  const Laurent d2{{-1, 1}, {0, -2}, {1, 1}};
  for (int i = 0; i < k; ++i) out = laurent_mul(out, d2);
  return out;
}

}  // namespace

std::map<int, Rational> shift_weights(const DeltaSeries& s, const Rational& r) {
  if (!s.has_parity_form()) {
    throw std::invalid_argument("shift_weights: series has mixed parity (half-integer offsets)");
  }
  std::map<int, Rational> weights;
  for (int k = 0; k <= s.order(); ++k) {
    const bool odd = k % 2 == 1;
    const RPoly& c = odd ? s.mu(k) : s.plain(k);
    if (c.is_zero()) continue;
    const Rational value = c.eval(r);
    Laurent expansion = delta_squared_power(k / 2);
    if (odd) {
      // mu delta = (E - E^-1) / 2
      expansion = laurent_mul(expansion, Laurent{{-1, -1}, {1, 1}});
    }
    for (const auto& [offset, n] : expansion) {
      weights[offset] += odd ? value * Rational(n, 2) : value * Rational(n);
    }
  }
  for (int k = -s.order(); k <= s.order(); ++k) weights.try_emplace(k, 0);
  // keep the symmetric support only as wide as the operator reaches
  const int reach = (s.highest_power() + 1) / 2;
  std::erase_if(weights, [reach](const auto& kv) { return kv.first < -reach || kv.first > reach; });
  return weights;
}

nlohmann::json to_json(const DeltaSeries& s) {
  nlohmann::json terms = nlohmann::json::array();
  for (int k = 0; k <= s.order(); ++k) {
    for (bool has_mu : {false, true}) {
      const RPoly& c = has_mu ? s.mu(k) : s.plain(k);
      if (c.is_zero()) continue;
      nlohmann::json coeff = nlohmann::json::array();
      for (int p = 0; p <= c.degree(); ++p) {
        if (c.coeff(p) != 0) coeff.push_back({to_string(c.coeff(p)), p});
      }
      terms.push_back({{"delta_power", k}, {"has_mu", has_mu}, {"coeff", coeff}});
    }
  }
  return {{"order", s.order()}, {"terms", terms}};
}

DeltaSeries series_from_json(const nlohmann::json& j) {
  DeltaSeries s(j.at("order").get<int>());
  for (const auto& term : j.at("terms")) {
    const int k = term.at("delta_power").get<int>();
    if (k < 0 || k > s.order()) throw std::invalid_argument("series_from_json: delta_power out of range");
    RPoly c;
    for (const auto& entry : term.at("coeff")) {
      const int p = entry.at(1).get<int>();
      std::vector<Rational> mono(static_cast<std::size_t>(p) + 1);
      mono.back() = parse_rational(entry.at(0).get<std::string>());
      c += RPoly(std::move(mono));
    }
    (term.at("has_mu").get<bool>() ? s.mu(k) : s.plain(k)) += c;
  }
  return s;
}

}  // namespace gaptooth
