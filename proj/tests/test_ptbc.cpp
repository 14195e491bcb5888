#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "gaptooth/ptbc.hpp"
#include "support/oracles.hpp"

using namespace gaptooth;

namespace {

Rational q(long num, long den = 1) { return Rational(num, den); }

double eval_poly(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double eval_poly_derivative(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) acc = acc * x + static_cast<double>(k) * c[k];
  return acc;
}

}  // namespace

TEST_SUITE("ptbc") {
  TEST_CASE("second-order stencil weights") {
    for (const auto& r : {q(1, 10), q(1, 3), q(1, 7)}) {
      const DeltaSeries s = expand_edge_derivative(+1, 2);
      const PtbcStencil st = stencil_from_series(s, r, Edge::plus);
      const double rv = to_double(r);
      CHECK(st.p() == 1);
      CHECK(st.weight(-1) == doctest::Approx(-0.5 + rv).epsilon(1e-15));
      CHECK(st.weight(0) == doctest::Approx(-2 * rv).epsilon(1e-15));
      CHECK(st.weight(1) == doctest::Approx(0.5 + rv).epsilon(1e-15));
    }
  }

  TEST_CASE("fourth-order stencil at r = 1/10") {
    // Frozen from exact Lagrange-derivative weights at xi = +1/10.
    const PtbcStencil plus = make_stencil(2, q(1, 10), Edge::plus);
    REQUIRE(plus.weights().size() == 5);
    CHECK(plus.weight(-2) == doctest::Approx(109.0 / 1500).epsilon(1e-14));
    CHECK(plus.weight(-1) == doctest::Approx(-529.0 / 1000).epsilon(1e-14));
    CHECK(plus.weight(0) == doctest::Approx(-249.0 / 1000).epsilon(1e-14));
    CHECK(plus.weight(1) == doctest::Approx(2383.0 / 3000).epsilon(1e-14));
    CHECK(plus.weight(2) == doctest::Approx(-89.0 / 1000).epsilon(1e-14));
  }

  TEST_CASE("weights sum to zero and minus edge mirrors plus edge") {
    for (int p = 1; p <= 4; ++p) {
      for (const auto& r : {q(1, 10), q(1, 4), q(1, 2)}) {
        const auto pair = make_ptbc_pair(p, r);
        const auto w = pair.plus.weights();
        CHECK(std::abs(std::accumulate(w.begin(), w.end(), 0.0)) < 1e-14);
        for (int k = -p; k <= p; ++k) CHECK(pair.minus.weight(k) == -pair.plus.weight(-k));
      }
    }
  }

  TEST_CASE("touching patches degenerate to the one-sided difference") {
    const PtbcStencil st = make_stencil(1, q(1, 2), Edge::plus);
    CHECK(st.weight(-1) == 0.0);
    CHECK(st.weight(0) == -1.0);
    CHECK(st.weight(1) == 1.0);
  }

  TEST_CASE("stencil_from_series rejects mixed parity and bad ratios") {
    CHECK_THROWS_AS(stencil_from_series(DeltaSeries::monomial(2, 1, false), q(1, 10), Edge::plus),
                    std::invalid_argument);
    const DeltaSeries ok = expand_edge_derivative(+1, 2);
    CHECK_THROWS_AS(stencil_from_series(ok, q(0), Edge::plus), std::invalid_argument);
    CHECK_THROWS_AS(stencil_from_series(ok, q(3, 5), Edge::plus), std::invalid_argument);
  }

  TEST_CASE("eval_edge_gradient on simple fields") {
    const int m = 15;
    const double H = 0.3;
    const auto pair = make_ptbc_pair(3, q(1, 10));
    std::vector<double> constant(m, 4.2);
    std::vector<double> linear(m);
    std::vector<double> quadratic(m);
    for (int j = 0; j < m; ++j) {
      linear[static_cast<std::size_t>(j)] = j * H;
      quadratic[static_cast<std::size_t>(j)] = (j * H) * (j * H);
    }
    const int j = 7;  // far from the wrap
    for (Edge e : {Edge::minus, Edge::plus}) {
      CHECK(std::abs(eval_edge_gradient(pair.at(e), constant, j)) < 1e-13);
      CHECK(eval_edge_gradient(pair.at(e), linear, j) == doctest::Approx(H).epsilon(1e-13));
      const double edge = j * H + sign_of(e) * 0.1 * H;
      CHECK(eval_edge_gradient(pair.at(e), quadratic, j) == doctest::Approx(H * 2 * edge).epsilon(1e-13));
    }
    // second-order stencil is also exact on quadratics
    const auto low = make_stencil(1, q(1, 10), Edge::plus);
    CHECK(eval_edge_gradient(low, quadratic, j) == doctest::Approx(H * 2 * (j * H + 0.1 * H)).epsilon(1e-13));

    CHECK_THROWS_AS(eval_edge_gradient(low, std::vector<double>{1.0}, 0), std::invalid_argument);
  }

  TEST_CASE("periodic indexing wraps around") {
    const auto st = make_stencil(2, q(1, 10), Edge::plus);
    std::vector<double> u = {1, 2, 3, 4, 5, 6};
    const double wrapped = eval_edge_gradient(st, u, 0);
    const double expected =
        st.weight(-2) * 5 + st.weight(-1) * 6 + st.weight(0) * 1 + st.weight(1) * 2 + st.weight(2) * 3;
    CHECK(wrapped == doctest::Approx(expected).epsilon(1e-15));
  }

  TEST_CASE("exactness order is at least 2p") {
    for (int p = 1; p <= 4; ++p) {
      for (const auto& r : {q(1, 10), q(1, 4), q(1, 2)}) {
        for (Edge e : {Edge::minus, Edge::plus}) {
          CAPTURE(p);
          CHECK(exactness_order(make_stencil(p, r, e)) >= 2 * p);
        }
      }
    }
    CHECK(exactness_order(PtbcStencil::insulating(1, q(1, 10), Edge::plus)) == 0);
  }

  TEST_CASE("property: random polynomials of degree <= 2p are differentiated to roundoff") {
    std::mt19937 rng(1234);
    std::uniform_int_distribution<int> ratio_num(1, 50);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int trial = 0; trial < 100; ++trial) {
      const int p = 1 + trial % 4;
      const Rational r(ratio_num(rng), 100);
      const double H = 0.25;
      const int m = 2 * p + 9;
      const int j = m / 2;
      std::vector<double> c(static_cast<std::size_t>(2 * p + 1));
      for (auto& x : c) x = coeff(rng);
      std::vector<double> u(static_cast<std::size_t>(m));
      for (int k = 0; k < m; ++k) u[static_cast<std::size_t>(k)] = eval_poly(c, (k - j) * H);
      for (Edge e : {Edge::minus, Edge::plus}) {
        const auto st = make_stencil(p, r, e);
        const double edge = sign_of(e) * to_double(r) * H;
        double scale = 0.0;
        for (int k = -p; k <= p; ++k) scale += std::abs(st.weight(k) * u[static_cast<std::size_t>(j + k)]);
        const double err = std::abs(eval_edge_gradient(st, u, j) - H * eval_poly_derivative(c, edge));
        CHECK(err <= 1e3 * eps * std::max(scale, 1.0));
      }
    }
  }

  TEST_CASE("antisymmetry: minus edge on U equals minus plus edge on the reversed field") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    const int m = 11;
    std::vector<double> u(m);
    for (auto& x : u) x = val(rng);
    std::vector<double> reversed(u.rbegin(), u.rend());
    const auto pair = make_ptbc_pair(3, q(1, 10));
    for (int j = 0; j < m; ++j) {
      const double a = eval_edge_gradient(pair.minus, u, j);
      const double b = eval_edge_gradient(pair.plus, reversed, m - 1 - j);
      CHECK(a == doctest::Approx(-b).epsilon(1e-13));
    }
  }

  TEST_CASE("json dump") {
    const auto j = to_json(make_stencil(2, q(1, 10), Edge::minus));
    CHECK(j.at("p") == 2);
    CHECK(j.at("r") == "1/10");
    CHECK(j.at("sign") == -1);
    CHECK(j.at("weights").size() == 5);
    CHECK(j.at("weights").at("-2").get<double>() == doctest::Approx(89.0 / 1000));
  }
}
