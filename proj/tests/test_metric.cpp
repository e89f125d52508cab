#include <cmath>
#include <random>

#include "doctest.h"
#include "pmrig/metric.hpp"
#include "test_support.hpp"

using namespace pmrig;

namespace {

// Weight s_3(z) = -1 - 1/6 + (|z|^2 + 1/6)^{1/3} and its Laplacian.
Pseudometric s3_metric(bool exact) {
  const double a = 1.0 / 6.0;
  RealFn s = [a](Complex z) { return -1.0 - a + std::cbrt(std::norm(z) + a); };
  RealFn lap = [a](Complex z) {
    const double rho = std::norm(z);
    return (4.0 / 3.0) * std::pow(rho + a, 1.0 / 3.0 - 2.0) * (a + rho / 3.0);
  };
  return exact ? exp_weight("s3", s, lap) : exp_weight("s3", s);
}

// Copy of mu that forgets its closed-form curvature.
Pseudometric numeric_only(const Pseudometric& mu) {
  Pseudometric::Spec s;
  s.name = mu.name();
  s.density = [mu](Complex z) { return mu.density(z); };
  s.zeros = mu.zeros();
  s.domain_radius = mu.domain_radius();
  return Pseudometric(std::move(s));
}

}  // namespace

TEST_CASE("poincare") {
  const auto p = poincare();
  CHECK(p.density(0.0) == 1.0);
  CHECK(p.density(0.5) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(curvature(p, Complex(0.3, -0.7)) == -4.0);
  CHECK(p.zeros().empty());
  CHECK_THROWS_AS(p.density(1.0), DomainError);
}

TEST_CASE("pullback: examples") {
  const auto p = poincare();
  const auto id = pullback(HoloMap::identity(), p);
  CHECK(id.density(Complex(0.2, 0.4)) == p.density(Complex(0.2, 0.4)));

  const auto z2 = pullback(maps::power(2), p);
  REQUIRE(z2.zeros().size() == 1);
  CHECK(std::abs(z2.zeros()[0].location) < 1e-12);
  CHECK(z2.zeros()[0].order == 1.0);
  CHECK(z2.density(0.5) == doctest::Approx(1.0 / (1 - 0.0625)).epsilon(1e-14));

  const auto aut = pullback(HoloMap::automorphism(Complex(0.3, 0.2), 0.4), p);
  std::mt19937 rng(5);
  for (int i = 0; i < 100; ++i) {
    const Complex z = testing::random_point(rng, 0.95);
    CHECK(std::abs(aut.density(z) - p.density(z)) <= 1e-12 * p.density(z));
  }

  CHECK_THROWS_AS(pullback(HoloMap::constant(0.2), p), DomainError);
  CHECK_THROWS_AS(pullback(maps::f_epsilon(0.3), p), DomainError);
}

TEST_CASE("pullback of a metric with zeros") {
  // Preimage of 0 under z^2 has multiplicity 2: order 2*beta + 1.
  const auto m = pullback(maps::power(2), mu_max(0.5));
  REQUIRE(m.zeros().size() == 1);
  CHECK(m.zeros()[0].order == doctest::Approx(2.0));
  CHECK(zero_order(m, 0.0) == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("mu_max: examples") {
  CHECK(mu_max(1).density(0.5) == doctest::Approx(1.0 / 0.9375).epsilon(1e-14));
  const auto z2 = pullback(maps::power(2), poincare());
  std::mt19937 rng(9);
  for (int i = 0; i < 100; ++i) {
    const Complex z = testing::random_point(rng, 0.99);
    CHECK(std::abs(mu_max(1).density(z) - z2.density(z)) <= 1e-12 * std::max(1.0, z2.density(z)));
  }
  CHECK(std::abs(curvature(numeric_only(mu_max(1)), Complex(0.3, 0.2)) + 4.0) < 1e-5);
  CHECK_THROWS_AS(mu_max(0.0), DomainError);
}

TEST_CASE("scale and exp_weight: examples") {
  const auto p = poincare();
  CHECK(scale(1.0, p).density(0.4) == p.density(0.4));
  CHECK(curvature(scale(0.5, p), 0.3) == -16.0);
  CHECK_THROWS_AS(scale(0.0, p), DomainError);
  CHECK_THROWS_AS(scale(1.5, p), DomainError);

  const double expect = std::exp(-1.0 - 1.0 / 6 + std::cbrt(1.0 / 6));
  CHECK(std::abs(s3_metric(true).density(0.0) - expect) < 1e-14);
  CHECK(std::abs(std::log(expect) + 0.61634) < 1e-5);
  CHECK_THROWS_AS(exp_weight("neg", [](Complex z) { return -std::norm(z); }), DomainError);
}

TEST_CASE("curvature: examples") {
  CHECK(curvature(poincare(), 0.77) == -4.0);
  const auto feps = numeric_only(pullback(maps::f_epsilon(1.0 / 12), poincare()));
  CHECK(std::abs(curvature(feps, 0.4) + 4.0) < 1e-4);
  CHECK(curvature(s3_metric(false), 0.5) <= -4.0 + 1e-3);
  CHECK(std::abs(curvature(s3_metric(false), 0.5) - curvature(s3_metric(true), 0.5)) < 1e-5);
  CHECK_THROWS_AS(curvature(poincare(), 0.9995), DomainError);
  CHECK_THROWS_AS(curvature(numeric_only(mu_max(1)), 1e-3), DomainError);
}

TEST_CASE("quotient: examples") {
  const auto p = poincare();
  CHECK(quotient(p, p, 0.3) == 1.0);
  CHECK(std::abs(quotient(pullback(maps::power(2), p), mu_max(1), 0.0) - 1.0) < 1e-9);
  CHECK(quotient(scale(0.9, p), p, Complex(0.1, 0.6)) == doctest::Approx(0.9));
  CHECK(quotient(mu_max(2), mu_max(1), 0.0) == 0.0);
  CHECK_THROWS_WITH_AS(quotient(p, mu_max(1), 0.3), doctest::Contains("not dominated"), DomainError);
}

TEST_CASE("zero_order: examples") {
  CHECK(zero_order(mu_max(1), 0.0) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(zero_order(poincare(), Complex(0.2, 0.1)) == 0.0);
  CHECK(std::abs(zero_order(mu_max(0.37), 0.0) - 0.37) < 1e-3);
}

TEST_CASE("check_domination: examples") {
  const auto p = poincare();
  const auto pts = polar_sample(0.95, 12, 24);
  CHECK(check_domination(pullback(maps::power(2), p), p, pts).pass);
  const auto bad = check_domination(p, scale(0.9, p), pts);
  CHECK_FALSE(bad.pass);
  CHECK(bad.max_quotient == doctest::Approx(1.0 / 0.9));
  CHECK(check_domination(pullback(maps::f_epsilon(1.0 / 12), p), p, pts).pass);
  const auto zero = check_domination(p, mu_max(1), pts);
  CHECK_FALSE(zero.pass);
  REQUIRE_FALSE(zero.violations.empty());
  CHECK(zero.violations[0].kind == "zero");
}

TEST_CASE("property: Ahlfors-Schwarz bound for curvature <= -4 metrics") {
  std::mt19937 rng(17);
  std::vector<Pseudometric> metrics = {poincare(), mu_max(0.3), mu_max(2.5), s3_metric(true),
                                       scale(0.7, poincare())};
  for (int i = 0; i < 20; ++i) metrics.push_back(pullback(testing::random_selfmap(rng, 2), poincare()));
  for (const auto& m : metrics) {
    for (int i = 0; i < 100; ++i) {
      const Complex z = testing::random_point(rng, 0.99);
      CHECK(m.density(z) <= poincare().density(z) * (1 + 1e-12) + 1e-9);
    }
  }
}

TEST_CASE("property: pullback functoriality") {
  std::mt19937 rng(23);
  for (int i = 0; i < 200; ++i) {
    const HoloMap f = testing::random_selfmap(rng, 1);
    const HoloMap g = testing::random_selfmap(rng, 1);
    const auto lhs = pullback(HoloMap::compose(f, g), poincare());
    const auto rhs = pullback(g, pullback(f, poincare()));
    for (int k = 0; k < 5; ++k) {
      const Complex z = testing::random_point(rng, 0.9);
      CHECK(std::abs(lhs.density(z) - rhs.density(z)) <= 1e-12 * std::max(1.0, rhs.density(z)));
    }
  }
}

TEST_CASE("property: zero order equals the multiplicity of f' at the zero") {
  const std::vector<HoloMap> maps_ = {
      maps::power(2), maps::power(4), maps::f_epsilon(0.2),
      HoloMap::polynomial({0.0, 0.0, 0.0, 0.3, 0.0, 0.2}),  // f' = 0.9z^2 + z^4
  };
  for (const auto& f : maps_) {
    const auto m = pullback(f, poincare());
    for (const auto& c : f.critical_points()) {
      CHECK(std::abs(zero_order(m, c.location) - c.multiplicity) < 1e-3);
      CHECK(m.order_at(c.location) == c.multiplicity);
    }
  }
}

TEST_CASE("property: curvature is a pullback invariant") {
  std::mt19937 rng(29);
  const std::vector<Pseudometric> targets = {poincare(), s3_metric(true)};
  for (int i = 0; i < 40; ++i) {
    const HoloMap f = testing::random_selfmap(rng, 1);
    for (const auto& mu : targets) {
      const auto pb = numeric_only(pullback(f, mu));
      const Complex z = testing::random_point(rng, 0.6);
      bool near = false;
      for (const auto& zr : pb.zeros()) near = near || std::abs(z - zr.location) < 0.05;
      const Complex w = f(z);
      if (near || std::abs(w) > 0.95) continue;
      const double expect = (*mu.exact_curvature())(w);
      CHECK(std::abs(curvature(pb, z) - expect) < 1e-4 * std::abs(expect));
    }
  }
}
