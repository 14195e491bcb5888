#include <doctest.h>

#include <random>

#include "gaptooth/opcalc.hpp"
#include "support/oracles.hpp"

using namespace gaptooth;

namespace {

Rational q(long num, long den = 1) { return Rational(num, den); }

RPoly poly(std::vector<Rational> c) { return RPoly(std::move(c)); }

// Eq-(7)-style expected coefficients for the plus edge; the minus edge flips
// the sign of every even-power (plain) coefficient.
struct ExpectedEdge {
  RPoly mu1, plain2, mu3, plain4, mu5, plain6, mu7, plain8;
};

ExpectedEdge expected_edge(int sign) {
  const Rational s(sign);
  ExpectedEdge e;
  e.mu1 = poly({q(1)});
  e.plain2 = poly({q(0), s});
  e.mu3 = poly({q(-1, 6), q(0), q(1, 2)});
  e.plain4 = poly({q(0), -s * q(1, 12), q(0), s * q(1, 6)});
  e.mu5 = poly({q(1, 30), q(0), q(-1, 8), q(0), q(1, 24)});
  e.plain6 = poly({q(0), s * q(1, 90), q(0), -s * q(1, 36), q(0), s * q(1, 120)});
  e.mu7 = poly({q(-1, 140), q(0), q(7, 240), q(0), q(-1, 72), q(0), q(1, 720)});
  e.plain8 = poly({q(0), -s * q(1, 560), q(0), s * q(7, 1440), q(0), -s * q(1, 480), q(0), s * q(1, 5040)});
  return e;
}

DeltaSeries random_series(std::mt19937& rng, int order) {
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_int_distribution<int> den(1, 5);
  std::uniform_int_distribution<int> deg(0, 2);
  DeltaSeries s(order);
  for (int k = 0; k <= order; ++k) {
    for (bool has_mu : {false, true}) {
      std::vector<Rational> c;
      for (int i = 0, d = deg(rng); i <= d; ++i) c.emplace_back(num(rng), den(rng));
      (has_mu ? s.mu(k) : s.plain(k)) = RPoly(c);
    }
  }
  return s;
}

}  // namespace

TEST_SUITE("opcalc") {
  TEST_CASE("rational parsing is exact") {
    CHECK(parse_rational("0.1") == q(1, 10));
    CHECK(parse_rational("-7/240") == q(-7, 240));
    CHECK(parse_rational("2.5e-1") == q(1, 4));
    CHECK(parse_rational(" 3 ") == q(3));
    CHECK(to_string(q(-2, 4)) == "-1/2");
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  }

  TEST_CASE("series_add") {
    const DeltaSeries a = DeltaSeries::monomial(4, 1, true);
    const DeltaSeries b = DeltaSeries::monomial(4, 2, false, RPoly::r());
    CHECK(series_add(a, DeltaSeries(4)) == a);

    const DeltaSeries sum = series_add(a, b);
    CHECK(sum.mu(1) == RPoly(q(1)));
    CHECK(sum.plain(2) == RPoly::r());

    const DeltaSeries cube = DeltaSeries::monomial(4, 3, false);
    CHECK(series_add(cube, -cube).is_zero());

    CHECK_THROWS_AS(series_add(DeltaSeries(4), DeltaSeries(6)), std::invalid_argument);
  }

  TEST_CASE("series_mul reduces mu squared") {
    const DeltaSeries mu = DeltaSeries::monomial(6, 0, true);
    const DeltaSeries mu2 = series_mul(mu, mu);
    CHECK(mu2 == DeltaSeries::one(6) + DeltaSeries::monomial(6, 2, false, q(1, 4)));

    const DeltaSeries mu_delta = DeltaSeries::monomial(6, 1, true);
    CHECK(series_mul(mu_delta, mu_delta) ==
          DeltaSeries::monomial(6, 2, false) + DeltaSeries::monomial(6, 4, false, q(1, 4)));

    std::mt19937 rng(7);
    const DeltaSeries x = random_series(rng, 6);
    CHECK(series_mul(x, DeltaSeries::one(6)) == x);
    CHECK_THROWS_AS(series_mul(DeltaSeries(2), DeltaSeries(3)), std::invalid_argument);
  }

  TEST_CASE("ring laws hold up to truncation on random series") {
    std::mt19937 rng(20240917);
    for (int trial = 0; trial < 25; ++trial) {
      const int order = 2 + trial % 5;
      const DeltaSeries a = random_series(rng, order);
      const DeltaSeries b = random_series(rng, order);
      const DeltaSeries c = random_series(rng, order);
      CHECK(a * b == b * a);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK((a + b) + c == a + (b + c));
    }
  }

  TEST_CASE("asinh_series matches the Taylor oracle") {
    const DeltaSeries k1 = asinh_series(1);
    CHECK(k1 == DeltaSeries::monomial(1, 1, false));

    const DeltaSeries k3 = asinh_series(3);
    CHECK(k3.plain(1) == RPoly(q(1)));
    CHECK(k3.plain(3) == RPoly(q(-1, 24)));

    const DeltaSeries k5 = asinh_series(5);
    CHECK(k5.plain(5) == RPoly(q(3, 640)));

    const int order = 15;
    const auto oracle = oracle::asinh_taylor(order);
    const DeltaSeries s = asinh_series(order);
    for (int k = 0; k <= order; ++k) {
      CHECK(s.plain(k) == RPoly(oracle[static_cast<std::size_t>(k)]));
      CHECK(s.mu(k).is_zero());
    }
    CHECK_THROWS_AS(asinh_series(0), std::invalid_argument);
  }

  TEST_CASE("binomial_power") {
    const int order = 8;
    const DeltaSeries w =
        DeltaSeries::monomial(order, 1, true) + DeltaSeries::monomial(order, 2, false, q(1, 2));

    const DeltaSeries first = binomial_power(w.truncated(1), +1, 1);
    CHECK(first == DeltaSeries::one(1) + DeltaSeries::monomial(1, 1, true, RPoly::r()));

    const DeltaSeries up = binomial_power(w, +1, order);
    const DeltaSeries down = binomial_power(w, -1, order);
    CHECK(up * down == DeltaSeries::one(order));

    for (int k = 0; k <= order; ++k) {
      CHECK(up.plain(k).degree() <= k);
      CHECK(up.mu(k).degree() <= k);
    }

    CHECK_THROWS_AS(binomial_power(DeltaSeries::one(order), +1, order), std::invalid_argument);
    CHECK_THROWS_AS(binomial_power(DeltaSeries::monomial(order, 0, true), +1, order), std::invalid_argument);
  }

  TEST_CASE("edge derivative to second order is mu delta +/- r delta^2") {
    for (int sign : {+1, -1}) {
      const DeltaSeries s = expand_edge_derivative(sign, 2);
      CHECK(s == DeltaSeries::monomial(2, 1, true) +
                     DeltaSeries::monomial(2, 2, false, RPoly::r() * Rational(sign)));
    }
  }

  TEST_CASE("edge derivative to eighth order reproduces the published table") {
    for (int sign : {+1, -1}) {
      CAPTURE(sign);
      const DeltaSeries s = expand_edge_derivative(sign, 8);
      const ExpectedEdge e = expected_edge(sign);
      CHECK(s.plain(0).is_zero());
      CHECK(s.mu(1) == e.mu1);
      CHECK(s.plain(2) == e.plain2);
      CHECK(s.mu(3) == e.mu3);
      CHECK(s.plain(4) == e.plain4);
      CHECK(s.mu(5) == e.mu5);
      CHECK(s.plain(6) == e.plain6);
      CHECK(s.mu(7) == e.mu7);
      CHECK(s.plain(8) == e.plain8);
      CHECK(s.has_parity_form());
    }
  }

  TEST_CASE("r = 0 gives the classical centred first-derivative series") {
    const DeltaSeries s = expand_edge_derivative(+1, 8).substituted(q(0));
    const DeltaSeries expected = DeltaSeries::monomial(8, 1, true) + DeltaSeries::monomial(8, 3, true, q(-1, 6)) +
                                 DeltaSeries::monomial(8, 5, true, q(1, 30)) +
                                 DeltaSeries::monomial(8, 7, true, q(-1, 140));
    CHECK(s == expected);
    // Cross-check against the 9-point centred difference weights.
    const auto weights = shift_weights(s, q(0));
    const auto lagrange = oracle::lagrange_derivative_weights(4, q(0));
    for (int k = -4; k <= 4; ++k) CHECK(weights.at(k) == lagrange[static_cast<std::size_t>(k + 4)]);
  }

  TEST_CASE("minus edge is the plus edge with even coefficients negated") {
    for (int order : {3, 6, 8, 11}) {
      const DeltaSeries plus = expand_edge_derivative(+1, order);
      DeltaSeries flipped = plus;
      for (int k = 0; k <= order; k += 2) flipped.plain(k) = -flipped.plain(k);
      CHECK(expand_edge_derivative(-1, order) == flipped);
    }
  }

  TEST_CASE("parity form is idempotent and preserves the operator") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
      const DeltaSeries s = random_series(rng, 6);
      const DeltaSeries once = to_parity_form(s);
      CHECK(once.has_parity_form());
      CHECK(to_parity_form(once) == once);
    }
    // delta itself: delta = mu delta (1 + delta^2/4)^(-1/2)
    const DeltaSeries d = to_parity_form(DeltaSeries::monomial(5, 1, false));
    CHECK(d == DeltaSeries::monomial(5, 1, true) + DeltaSeries::monomial(5, 3, true, q(-1, 8)) +
                   DeltaSeries::monomial(5, 5, true, q(3, 128)));
  }

  TEST_CASE("gamma_truncate selects the fourth and sixth order conditions") {
    const DeltaSeries full = expand_edge_derivative(+1, 8);
    const DeltaSeries p2 = gamma_truncate(full, 2);
    CHECK(p2.order() == 4);
    CHECK(p2 == full.truncated(4));
    CHECK(p2.mu(3) == RPoly(std::vector<Rational>{q(-1, 6), q(0), q(1, 2)}));

    const DeltaSeries p3 = gamma_truncate(full, 3);
    CHECK(p3.order() == 6);
    CHECK(p3.plain(6) == expected_edge(+1).plain6);

    CHECK(gamma_truncate(full, 4) == full);
    CHECK_THROWS_AS(gamma_truncate(full, 0), std::invalid_argument);
    CHECK_THROWS_AS(gamma_truncate(full, 5), std::invalid_argument);
  }

  TEST_CASE("shift weights equal Lagrange interpolation weights exactly") {
    const std::vector<Rational> ratios = {q(1, 10), q(1, 20), q(1, 4), q(1, 2), q(3, 7)};
    for (int p = 1; p <= 4; ++p) {
      for (const auto& r : ratios) {
        for (int sign : {+1, -1}) {
          const auto weights = shift_weights(gamma_truncate(expand_edge_derivative(sign, 2 * p), p), r);
          const auto oracle = oracle::lagrange_derivative_weights(p, r * sign);
          REQUIRE(weights.size() == static_cast<std::size_t>(2 * p + 1));
          for (int k = -p; k <= p; ++k) CHECK(weights.at(k) == oracle[static_cast<std::size_t>(k + p)]);
        }
      }
    }
    CHECK_THROWS_AS(shift_weights(DeltaSeries::monomial(3, 1, false), q(1, 10)), std::invalid_argument);
  }

  TEST_CASE("json round trip and schema") {
    const DeltaSeries s = expand_edge_derivative(-1, 8);
    const auto j = to_json(s);
    CHECK(j.at("order") == 8);
    CHECK(series_from_json(j) == s);

    const auto& first = j.at("terms").at(0);
    CHECK(first.at("delta_power") == 1);
    CHECK(first.at("has_mu") == true);
    CHECK(first.at("coeff").at(0).at(0) == "1");
    CHECK(first.at("coeff").at(0).at(1) == 0);
  }
}
