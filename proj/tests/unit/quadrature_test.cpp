#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "pairemit/errors.hpp"
#include "pairemit/quadrature.hpp"

using namespace pairemit;

TEST_SUITE("quadrature") {

TEST_CASE("known small rules") {
  const GaussLegendre two(2);
  CHECK(two.nodes()[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(two.nodes()[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(two.weights()[0] == doctest::Approx(1.0));

  const GaussLegendre three(3);
  CHECK(three.nodes()[1] == doctest::Approx(0.0));
  CHECK(three.nodes()[2] == doctest::Approx(std::sqrt(0.6)).epsilon(1e-15));
  CHECK(three.weights()[1] == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
  CHECK(three.weights()[0] == doctest::Approx(5.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("weights sum to two and nodes are ascending and open") {
  for (const std::size_t n : {1u, 5u, 16u, 64u, 256u, 512u, 1024u}) {
    const GaussLegendre rule(n);
    const auto w = rule.weights();
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(2.0).epsilon(1e-13));
    const auto x = rule.nodes();
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(x[i]) < 1.0);
      CHECK(w[i] > 0.0);
      if (i > 0) {
        CHECK(x[i] > x[i - 1]);
      }
    }
  }
}

TEST_CASE("exact for polynomials of degree 2n-1") {
  for (const std::size_t n : {2u, 4u, 9u, 20u}) {
    const GaussLegendre rule(n);
    const int degree = static_cast<int>(2 * n - 1);
    const double got = rule.integrate([&](double x) { return std::pow(x, degree - 1); }, 0.0, 2.0);
    CHECK(got == doctest::Approx(std::pow(2.0, degree) / degree).epsilon(1e-13));
  }
}

TEST_CASE("smooth integrals") {
  const GaussLegendre rule(32);
  CHECK(rule.integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK(rule.integrate([](double x) { return std::exp(x); }, -1.0, 3.0) ==
        doctest::Approx(std::exp(3.0) - std::exp(-1.0)).epsilon(1e-14));
  const auto mapped = rule.nodes_on(2.0, 4.0);
  CHECK(mapped.front() > 2.0);
  CHECK(mapped.back() < 4.0);
}

TEST_CASE("adaptive handles a log endpoint singularity") {
  const GaussLegendre panel(16);
  const std::vector<double> breaks{0.0, 1.0};
  const AdaptiveResult r =
      integrate_adaptive([](double x) { return std::log(x); }, breaks, panel, {1e-10, 0.0, 4000});
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(r.panels > 1);
}

TEST_CASE("adaptive resolves a narrow Lorentzian") {
  const double eps = 1e-4;
  const GaussLegendre panel(16);
  const std::vector<double> breaks{0.0, 0.5, 1.0};
  const AdaptiveResult r = integrate_adaptive(
      [&](double x) { return eps / ((x - 0.5) * (x - 0.5) + eps * eps); }, breaks, panel);
  const double exact = 2.0 * std::atan(0.5 / eps);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(exact).epsilon(1e-8));
}

TEST_CASE("adaptive reports non-convergence when capped") {
  const GaussLegendre panel(4);
  const std::vector<double> breaks{0.0, 1.0};
  const AdaptiveResult r = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, breaks,
                                              panel, {1e-14, 0.0, 3});
  CHECK_FALSE(r.converged);
  CHECK(r.panels <= 3);
}

TEST_CASE("invalid arguments") {
  CHECK_THROWS_AS(GaussLegendre(0), DomainError);
  const GaussLegendre rule(4);
  const std::vector<double> one{0.0};
  CHECK_THROWS_AS(integrate_adaptive([](double) { return 1.0; }, one, rule), DomainError);
  const std::vector<double> descending{1.0, 0.0};
  CHECK_THROWS_AS(integrate_adaptive([](double) { return 1.0; }, descending, rule), DomainError);
}

}  // TEST_SUITE
