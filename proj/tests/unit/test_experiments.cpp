#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "potlayer/errors.hpp"
#include "potlayer/experiments.hpp"
#include "potlayer/rules.hpp"

using namespace potlayer;

TEST_SUITE("experiments") {

TEST_CASE("r_epsilon") {
  const double r = r_epsilon(0.01);
  CHECK(r == doctest::Approx(0.0339).epsilon(0.01));
  CHECK(r / std::abs(std::log(r)) == doctest::Approx(0.01).epsilon(1e-11));
  const double top = 0.25 / std::log(4.0);
  CHECK(r_epsilon(top * (1.0 - 1e-10)) == doctest::Approx(0.25).epsilon(1e-8));
  double prev = 0.0;
  for (double e : {1e-8, 1e-5, 1e-3, 0.02, 0.1, 0.18}) {
    const double re = r_epsilon(e);
    CHECK(re > prev);
    prev = re;
  }
  CHECK_THROWS_AS(r_epsilon(0.0), ArgumentError);
  CHECK_THROWS_AS(r_epsilon(0.2), ArgumentError);
}

TEST_CASE("least squares line") {
  const auto f = least_squares_line({0.0, 1.0, 2.0, 3.0}, {1.0, 3.0, 5.0, 7.0});
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(least_squares_line({1.0}, {1.0}), ArgumentError);
  CHECK_THROWS_AS(least_squares_line({1.0, 1.0}, {1.0, 2.0}), ArgumentError);
}

TEST_CASE("inner integral constant of the density scan") {
  const auto q = adaptive_1d([](double t) { return std::pow(1.0 + t * t, -1.5); }, std::vector<double>{0.0, 1.0},
                             QuadratureSpec{1e-14});
  CHECK(q.value == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("graph scan diverges, flat control stays bounded") {
  const std::vector<int> js{4, 5, 6, 7};
  const auto s = blowup_graph_scan(js);
  REQUIRE(s.derivative_values.size() == js.size());
  CHECK(s.epsilons.size() == js.size());
  CHECK(s.r_epsilons.size() == js.size());
  for (std::size_t i = 0; i < js.size(); ++i) {
    CHECK(s.converged[i]);
    CHECK(s.epsilons[i] == std::ldexp(1.0, -js[i]));
    CHECK(s.abscissae[i] == doctest::Approx(std::log(std::abs(std::log(s.r_epsilons[i])))));
    if (i > 0) {
      CHECK(s.epsilons[i] < s.epsilons[i - 1]);
      CHECK(s.derivative_values[i] < s.derivative_values[i - 1]);
    }
  }
  CHECK(s.fit.slope > 0.0);

  ScanOptions c;
  c.control = true;
  const auto f = blowup_graph_scan(js, c);
  const auto [lo, hi] = std::minmax_element(f.derivative_values.begin(), f.derivative_values.end());
  CHECK((*hi - *lo) <= 0.1 * std::abs(*hi));
  CHECK(f.r_epsilons.size() == js.size());
}

TEST_CASE("density scan diverges, constant control is symmetric") {
  const std::vector<int> js{4, 6, 8};
  const auto s = blowup_density_scan(js);
  for (std::size_t i = 1; i < js.size(); ++i) CHECK(s.derivative_values[i] < s.derivative_values[i - 1]);
  CHECK(s.fit.slope > 0.0);
  CHECK(s.abscissae[0] == doctest::Approx(std::log(std::abs(std::log(s.epsilons[0])))));
  ScanOptions c;
  c.control = true;
  for (double v : blowup_density_scan(js, c).derivative_values) CHECK(std::abs(v) <= 1e-3);
}

TEST_CASE("scan index validation") {
  CHECK_THROWS_AS(blowup_graph_scan({4}), ArgumentError);
  CHECK_THROWS_AS(blowup_graph_scan({5, 4}), ArgumentError);
  CHECK_THROWS_AS(blowup_density_scan({2, 4}), ArgumentError);
}

TEST_CASE("key lemma: identical problems give zero ratios") {
  KeyLemmaOptions o;
  o.sample_count = 20;
  const auto k = key_lemma_ratio(InterfaceGraph::flat(3), SurfaceDensity::constant(1.0), 0.5, {0.5, 0.25}, o);
  for (double r : k.ratios) CHECK(r == 0.0);
  for (double s : k.sup_w) CHECK(s == 0.0);
}

TEST_CASE("key lemma ratios stay bounded on a short ladder") {
  KeyLemmaOptions o;
  o.sample_count = 40;
  const std::vector<double> radii{0.5, 0.25, 0.125};
  const auto k = key_lemma_ratio(InterfaceGraph::holder(3, 0.5, 1.0), SurfaceDensity::constant(1.0), 0.5, radii, o);
  REQUIRE(k.ratios.size() == 3);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    CHECK(k.converged[i]);
    CHECK(k.ratios[i] > 0.0);
    CHECK(k.omega[i] == doctest::Approx(std::sqrt(radii[i])));
    CHECK(k.ratios[i] <= 3.0 * k.ratios[0]);
  }
  CHECK_THROWS_AS(key_lemma_ratio(InterfaceGraph::flat(3), SurfaceDensity::constant(1.0), 0.7, radii, o),
                  ArgumentError);
  CHECK_THROWS_AS(key_lemma_ratio(InterfaceGraph::flat(2), SurfaceDensity::constant(1.0), 0.5, radii, o),
                  ArgumentError);
}

}
