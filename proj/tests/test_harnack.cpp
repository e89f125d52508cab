#include <cmath>
#include <random>

#include "doctest.h"
#include "pmrig/harnack.hpp"
#include "pmrig/liouville.hpp"
#include "test_support.hpp"

using namespace pmrig;

namespace {

struct Pair {
  Pseudometric lambda;
  Pseudometric mu;
};

std::vector<Pair> catalog() {
  const auto p = poincare();
  return {
      {scale(0.9, p), p},
      {pullback(maps::power(2), p), p},
      {pullback(HoloMap::blaschke({0.3, Complex(0, -0.5)}), p), p},
      {mu_max(2), mu_max(1)},
      {mu_max(1), p},
      {p, p},
  };
}

std::vector<Complex> annulus(double r) { return polar_sample(0.9995, 40, 36, r); }

}  // namespace

TEST_CASE("harnack_constant") {
  CHECK(harnack_constant(0.5) == doctest::Approx(std::exp(-3.0)).epsilon(1e-15));
  CHECK(harnack_constant(1.0 / std::sqrt(2.0)) == doctest::Approx(0.36787944117144233).epsilon(1e-14));
  CHECK(std::abs(harnack_constant(1.0 - 1e-9) - 1.0) < 1e-8);
  CHECK_THROWS_AS(harnack_constant(0.0), DomainError);
  CHECK_THROWS_AS(harnack_constant(1.0), DomainError);
}

TEST_CASE("corollary_constant") {
  CHECK(corollary_constant(0.25, 0.5, 0.75, 4) == doctest::Approx(std::exp(-8.0) * 0.390625).epsilon(1e-14));
  CHECK(corollary_constant(0.25, 0.5, 0.75, 4) == doctest::Approx(1.31057e-4).epsilon(1e-5));
  CHECK(corollary_constant(0.5, 0.5 + 1e-12, 0.8, 6) == doctest::Approx(std::exp(1.0 - 0.64 / 0.25)).epsilon(1e-9));
  double prev = corollary_constant(0.3, 0.6, 0.9, 4);
  for (int c = 5; c <= 12; ++c) {
    const double cur = corollary_constant(0.3, 0.6, 0.9, c);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK_THROWS_AS(corollary_constant(0.5, 0.4, 0.8, 4), DomainError);
  CHECK_THROWS_AS(corollary_constant(0.2, 0.4, 0.8, 3), DomainError);
}

TEST_CASE("aux_v and verify_aux_pde") {
  CHECK(aux_v(0.5, 4, 1.0) == 0.0);
  CHECK(aux_v(0.5, 4, 0.5) == doctest::Approx(0.5625 * std::exp(3.0)).epsilon(1e-14));
  CHECK(aux_v(0.5, 4, 0.5) == doctest::Approx(11.2981).epsilon(1e-5));
  for (double c : {4.0, 5.0, 8.0}) {
    const auto rep = verify_aux_pde(0.5, c, annulus(0.5));
    CHECK(rep.pass);
    CHECK(rep.checked == 40 * 36);
  }
  const Complex inner[] = {Complex(0.2, 0.0)};
  CHECK_THROWS_AS(verify_aux_pde(0.5, 4, inner), DomainError);
}

TEST_CASE("barrier cubic equals the normalised Laplacian of the barrier") {
  for (double c : {4.0, 6.5}) {
    for (double x : {0.3, 0.5, 0.8, 0.95}) {
      const double r = 0.5;
      const Complex z = std::sqrt(x);
      auto v = [&](Complex w) { return aux_v(r, c, w); };
      const double lhs = laplacian_fd(v, z, 1e-3) * (1 - x) * (1 - x) / v(z);
      CHECK(lhs == doctest::Approx(barrier_cubic(c, r, x)).epsilon(1e-6));
    }
  }
}

TEST_CASE("cubic_check") {
  for (double r : {0.1, 0.5, 0.9}) {
    CHECK(barrier_cubic(4, r, r * r) == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(barrier_cubic(4, r, 1.0) == doctest::Approx(8.0).epsilon(1e-12));
  }
  const auto rep = cubic_check(6, 0.5);
  CHECK(rep.pass);
  CHECK(rep.min_value >= 12.0);
  for (double c : {4.0, 5.0, 8.0})
    for (double r : {0.3, 0.5, 0.7}) {
      const auto cr = cubic_check(c, r);
      CHECK(cr.endpoint_r2_exact);
      CHECK(cr.endpoint_one_exact);
      CHECK(cr.pass);
    }
}

TEST_CASE("check_harnack: examples") {
  const auto p = poincare();
  const auto pts = annulus(0.5);
  const auto scaled = check_harnack(scale(0.9, p), p, 4, 0.5, pts);
  CHECK(scaled.pass);
  CHECK(scaled.circle_max == doctest::Approx(std::log(0.9)));
  CHECK(check_harnack(pullback(maps::power(2), p), p, 4, 0.5, pts).pass);
  const auto same = check_harnack(p, p, 4, 0.5, pts);
  CHECK(same.pass);
  CHECK(same.circle_max == 0.0);
  CHECK(same.lhs_max_violation == 0.0);
}

TEST_CASE("check_harnack: guards") {
  const auto p = poincare();
  const auto pts = annulus(0.5);
  CHECK_THROWS_AS(check_harnack(p, scale(0.9, p), 4, 0.5, pts), DomainError);  // mu has curvature -4/0.81 < -c
  CHECK_THROWS_AS(check_harnack(scale(0.9, p), p, 4, 0.0, pts), DomainError);

  // Breaking domination by inflating lambda on an annulus trips the guard.
  Pseudometric::Spec s;
  s.name = "inflated";
  s.density = [](Complex z) {
    const double m = std::abs(z);
    const double bump = (m > 0.6 && m < 0.8) ? 0.01 * std::pow(std::sin(kPi * (m - 0.6) / 0.2), 4) : 0.0;
    return (1.0 + bump) * 0.999 / (1.0 - std::norm(z));
  };
  const Pseudometric inflated(std::move(s));
  CHECK_FALSE(check_domination(inflated, p, pts).pass);
  CHECK_THROWS_AS(check_harnack(inflated, p, 4, 0.5, pts), DomainError);
}

TEST_CASE("check_harnack: catalog") {
  for (const auto& pair : catalog()) {
    for (double r : {0.3, 0.5, 0.8}) {
      const auto rep = check_harnack(pair.lambda, pair.mu, 4, r, annulus(r));
      INFO(pair.lambda.name(), " / ", pair.mu.name(), " r = ", r);
      CHECK(rep.pass);
    }
  }
}

TEST_CASE("check_harnack: variable curvature metric with c = 5") {
  const auto L = make_pinched_metric(curvature_radial(1.0), 0.9);
  const auto mu = dilate(L.domain_radius(), L);
  CHECK(mu.pinch()->lower == -5.0);
  for (double r : {0.3, 0.5, 0.8}) {
    const auto rep = check_harnack(scale(0.9, mu), mu, 5, r, annulus(r));
    CHECK(rep.pass);
    CHECK(rep.checked > 0);
  }
  // c must cover the lower pinch bound.
  CHECK_THROWS_AS(check_harnack(scale(0.9, mu), mu, 4, 0.5, annulus(0.5)), DomainError);
}

TEST_CASE("property: Hopf dichotomy on the catalog") {
  std::mt19937 rng(31);
  for (const auto& pair : catalog()) {
    std::vector<double> q;
    for (int i = 0; i < 1000; ++i) q.push_back(quotient(pair.lambda, pair.mu, testing::random_point(rng, 0.999)));
    const bool strict_somewhere = std::any_of(q.begin(), q.end(), [](double v) { return v < 1.0 - 1e-6; });
    if (strict_somewhere) {
      for (double v : q) CHECK(v < 1.0);
    } else {
      for (double v : q) CHECK(std::abs(v - 1.0) < 1e-6);
    }
  }
}

TEST_CASE("check_golusin") {
  const auto p = poincare();
  const auto pts = polar_sample(0.999, 40, 24);
  const auto rp = check_golusin(p, pts);
  CHECK(rp.pass);
  CHECK(rp.lambda_at_zero == 1.0);

  const auto z2 = check_golusin(pullback(maps::power(2), p), pts);
  CHECK(z2.pass);
  CHECK(z2.lambda_at_zero == 0.0);
  CHECK(std::abs(z2.max_excess) < 1e-12);  // equality

  CHECK(check_golusin(pullback(HoloMap::automorphism(0.3), p), pts).pass);
  CHECK(check_golusin(pullback(HoloMap::blaschke({0.2, Complex(-0.4, 0.3)}), p), pts).pass);
  CHECK(check_golusin(mu_max(2), pts).pass);

  // A fractional zero of order < 1 is not a pullback zero: the bound fails near 0.
  const auto frac = check_golusin(mu_max(0.1), pts);
  CHECK_FALSE(frac.pass);

  CHECK_THROWS_AS(check_golusin(scale(0.9, p), pts), DomainError);
}

TEST_CASE("rigidity_scan: examples") {
  const auto p = poincare();
  const auto z2 = rigidity_scan(pullback(maps::power(2), p), p, 4);
  CHECK(z2.verdict == RateVerdict::BoundedNonzero);
  CHECK(z2.fitted_limit == doctest::Approx(-0.5).epsilon(0.02));

  for (double eps : {1.0 / 12, 1.0 / 20}) {
    const auto fe = rigidity_scan(pullback(maps::f_epsilon(eps), p), p, 4);
    CHECK(fe.verdict == RateVerdict::BoundedNonzero);
    CHECK(fe.fitted_limit == doctest::Approx(-2 * eps).epsilon(0.05));
  }

  const auto aut = rigidity_scan(pullback(HoloMap::automorphism(Complex(0.2, 0.3), 1.0), p), p, 4);
  CHECK(aut.verdict == RateVerdict::Vanishes);

  BoundaryPath off_axis;
  off_axis.angle = 2.0;
  CHECK(rigidity_scan(pullback(maps::power(2), p), p, 4, off_axis).fitted_limit ==
        doctest::Approx(-0.5).epsilon(0.02));

  BoundaryPath bad;
  bad.points = {0.5, 0.7, 1.2, 1.3, 1.4};
  CHECK_THROWS_AS(rigidity_scan(p, p, 4, bad), DomainError);
}

TEST_CASE("fit_boundary_rate on 1 - f_eps^h") {
  // On the radius, with d = 1 - t, the hyperbolic derivative of f_eps simplifies to
  //   (2 - d)(1 - 3 eps d^2) / ((1 - eps d^2)(2 - d + eps d^3)) = 1 - 2 eps d^2 + O(d^3).
  for (double eps : {1.0 / 12, 1.0 / 20}) {
    std::vector<RateSample> s;
    for (double t : dyadic_schedule()) {
      const double d = 1 - t;
      const double closed = (2 - d) * (1 - 3 * eps * d * d) / ((1 - eps * d * d) * (2 - d + eps * d * d * d));
      const double fh = hyperbolic_derivative(maps::f_epsilon(eps), t);
      CHECK(fh == doctest::Approx(closed).epsilon(1e-9));
      s.push_back({t, 1.0 - fh});
    }
    const auto rep = fit_boundary_rate(s, 2.0);
    CHECK(rep.verdict == RateVerdict::BoundedNonzero);
    CHECK(rep.fitted_limit == doctest::Approx(2 * eps).epsilon(0.05));
  }
}

TEST_CASE("burns_krantz_check") {
  const auto id = burns_krantz_check(HoloMap::identity());
  CHECK(id.displacement.verdict == RateVerdict::Vanishes);
  CHECK(id.hyperbolic.verdict == RateVerdict::Vanishes);
  CHECK(id.implication_holds);

  const double eps = 1.0 / 12;
  const auto fe = burns_krantz_check(maps::f_epsilon(eps));
  CHECK(fe.displacement.verdict == RateVerdict::BoundedNonzero);
  CHECK(fe.displacement.fitted_limit == doctest::Approx(eps).epsilon(1e-3));
  CHECK(fe.hyperbolic.verdict == RateVerdict::BoundedNonzero);
  CHECK(fe.implication_holds);

  // z - c(1-z)^4 leaves the disk at z = -1 for every c > 0; the sampled
  // certificate only passes once 16c falls below the 1e-12 tolerance.
  double c = 0.125;
  while (!certify_selfmap(maps::quartic_perturbation(c)).certified) c /= 2;
  CHECK(16 * c <= 1e-12);
  const auto q = burns_krantz_check(maps::quartic_perturbation(c));
  CHECK(q.displacement.verdict == RateVerdict::Vanishes);
  CHECK(q.hyperbolic.verdict == RateVerdict::Vanishes);
}
