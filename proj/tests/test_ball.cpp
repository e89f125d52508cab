#include <cmath>
#include <random>

#include "doctest.h"
#include "pmrig/ball.hpp"
#include "pmrig/holomap.hpp"

using namespace pmrig;

namespace {

CVector random_vector(std::mt19937& rng, int n) {
  std::normal_distribution<double> g;
  CVector v(n);
  for (int j = 0; j < n; ++j) v(j) = Complex(g(rng), g(rng));
  return v;
}

MultiPolynomial mono(int n, Complex c, std::vector<int> e) { return MultiPolynomial(n, {{c, std::move(e)}}); }
MultiPolynomial zero(int n) { return MultiPolynomial(n, {}); }

// Certified polynomial self-maps of B^2 and B^3.
std::vector<BallMap> polynomial_catalog() {
  const double r2 = std::sqrt(2.0);
  return {
      BallMap::identity(2),
      BallMap::polynomial(2, {mono(2, 1.0, {2, 0}), mono(2, r2, {1, 1})}),
      BallMap::polynomial(2, {mono(2, 2.0, {1, 1}), zero(2)}),
      BallMap::polynomial(2, {mono(2, 1.0, {1, 0}), zero(2)}),
      BallMap::polynomial(2, {mono(2, 1.0, {2, 0}), zero(2)}),
      BallMap::polynomial(3, {mono(3, 1.0, {0, 1, 0}), mono(3, 1.0, {0, 0, 1}), mono(3, 1.0, {1, 0, 0})}),
      BallMap::polynomial(3, {mono(3, 1.0, {2, 0, 0}), mono(3, r2, {1, 1, 0}), mono(3, 1.0, {0, 0, 3})}),
  };
}

// Random automorphisms U phi_a with |a| <= radius.
std::vector<BallMap> automorphism_catalog(int n, int count, double radius, std::uint64_t seed) {
  std::vector<BallMap> out;
  const auto points = ball_sample(n, count, radius, seed);
  for (int k = 0; k < count; ++k) out.push_back(BallMap::automorphism(points[k], random_unitary(n, seed + 100 + k)));
  return out;
}

}  // namespace

TEST_CASE("kobayashi_metric examples") {
  std::mt19937 rng(3);
  for (int k = 0; k < 10; ++k) {
    const CVector v = random_vector(rng, 3);
    CHECK(kobayashi_metric(CVector::Zero(3), v) == doctest::Approx(v.norm()).epsilon(1e-14));
  }
  CHECK(kobayashi_metric(make_point({0.5}), make_point({1.0})) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  // The affine slice through (0.5, 0) in direction e_2 is a disc of radius
  // sqrt(0.75) centered at the point.
  CHECK(kobayashi_metric(make_point({0.5, 0.0}), make_point({0.0, 1.0})) ==
        doctest::Approx(1.0 / std::sqrt(0.75)).epsilon(1e-14));
  CHECK(kobayashi_metric(make_point({0.5, 0.0}), make_point({0.0, 1.0})) == doctest::Approx(1.154701).epsilon(1e-6));
  CHECK_THROWS_AS(kobayashi_metric(make_point({1.0, 0.0}), make_point({0.0, 1.0})), DomainError);
}

TEST_CASE("kobayashi_distance: normalization, symmetry, triangle inequality") {
  for (double r : {0.1, 0.5, 0.9, 0.999, 1.0 - 1e-9})
    CHECK(kobayashi_distance(CVector::Zero(2), make_point({r, 0.0})) == doctest::Approx(std::atanh(r)).epsilon(1e-12));
  const auto pts = ball_sample(3, 60, 0.99, 7);
  for (std::size_t i = 0; i + 2 < pts.size(); i += 3) {
    const double ab = kobayashi_distance(pts[i], pts[i + 1]);
    CHECK(ab == doctest::Approx(kobayashi_distance(pts[i + 1], pts[i])).epsilon(1e-12));
    CHECK(ab <= kobayashi_distance(pts[i], pts[i + 2]) + kobayashi_distance(pts[i + 2], pts[i + 1]) + 1e-12);
  }
  CHECK(kobayashi_distance(pts[0], pts[0]) == doctest::Approx(0.0));
}

TEST_CASE("radial distance band") {
  const std::vector<double> deltas = {1e-1, 1e-2, 1e-3, 1e-4};
  std::mt19937 rng(5);
  for (int k = 0; k < 8; ++k) {
    const CVector u = random_vector(rng, 2 + k % 2);
    const auto band = radial_distance_band(CVector::Zero(u.size()), u, deltas);
    CHECK(band.max_abs <= 0.7);
    // From the origin the band value is log(2 - delta)/2 exactly.
    for (std::size_t i = 0; i < deltas.size(); ++i)
      CHECK(band.values[i] == doctest::Approx(0.5 * std::log(2.0 - deltas[i])).epsilon(1e-10));
  }
  const auto shifted = radial_distance_band(make_point({0.0, 0.3}), make_point({1.0, 0.0}), deltas);
  CHECK(shifted.max_abs <= 1.0);
}

TEST_CASE("automorphisms: exchange, involution, invariance") {
  const auto pts = ball_sample(2, 4, 0.9, 11);
  for (const auto& a : pts) {
    const auto phi = BallMap::automorphism(a);
    CHECK(phi(a).norm() <= 1e-14);
    CHECK((phi(CVector::Zero(2)) - a).norm() <= 1e-14);
    for (const auto& z : ball_sample(2, 10, 0.95, 12)) CHECK((phi(phi(z)) - z).norm() <= 1e-12);
  }

  for (int n : {2, 3}) {
    const auto auts = automorphism_catalog(n, 6, 0.9, 20 + n);
    const auto zs = ball_sample(n, 200, 0.95, 30 + n);
    const auto ws = ball_sample(n, 200, 0.95, 40 + n);
    std::mt19937 rng(50 + n);
    for (const auto& f : auts)
      for (std::size_t i = 0; i < zs.size(); ++i) {
        const CVector v = random_vector(rng, n);
        const double k0 = kobayashi_metric(zs[i], v);
        CHECK(std::abs(f.push_metric(zs[i], v) - k0) <= 1e-10 * std::max(1.0, k0));
        CHECK(f.image_gap(zs[i]) == doctest::Approx(1.0 - f(zs[i]).squaredNorm()).epsilon(1e-12));
        CHECK(std::abs(kobayashi_distance(f(zs[i]), f(ws[i])) - kobayashi_distance(zs[i], ws[i])) <= 1e-10);
      }
  }
}

TEST_CASE("jacobians agree with central differences") {
  auto maps = polynomial_catalog();
  for (const auto& f : automorphism_catalog(2, 3, 0.8, 60)) maps.push_back(f);
  for (const auto& f : automorphism_catalog(3, 3, 0.8, 61)) maps.push_back(f);
  maps.push_back(BallMap::compose(maps[1], maps[maps.size() - 4]));
  for (const auto& f : maps) {
    const int n = f.dim();
    for (const auto& z : ball_sample(n, 5, 0.7, 70)) {
      const CMatrix j = f.jacobian(z);
      for (int k = 0; k < n; ++k) {
        const double h = 1e-6;
        const CVector e = basis_vector(n, k);
        const CVector fd = (f(z + h * e) - f(z - h * e)) / (2.0 * h);
        CHECK((fd - j.col(k)).norm() <= 1e-7);
      }
    }
  }
}

TEST_CASE("ball Schwarz-Pick for certified maps") {
  auto maps = polynomial_catalog();
  const auto auts2 = automorphism_catalog(2, 2, 0.6, 80);
  maps.push_back(BallMap::compose(maps[1], auts2[0]));
  maps.push_back(BallMap::compose(auts2[1], maps[2]));
  std::mt19937 rng(90);
  for (const auto& f : maps) {
    for (const auto& z : ball_sample(f.dim(), 1000, 0.99, 91)) {
      const CVector v = random_vector(rng, f.dim());
      CHECK(f.push_metric(z, v) <= kobayashi_metric(z, v) + 1e-10);
    }
  }
}

TEST_CASE("polynomial maps: certification and escape") {
  CHECK_THROWS_AS(BallMap::polynomial(2, {mono(2, 2.0, {1, 0}), zero(2)}), DomainError);
  CHECK_THROWS_AS(BallMap::polynomial(2, {mono(2, 1.0, {1, 0}), mono(2, 1.0, {0, 1}), zero(2)}), DomainError);
  CHECK_THROWS_AS(MultiPolynomial(2, {{1.0, {1}}}), DomainError);
  const auto f = BallMap::polynomial(2, {mono(2, 1.0, {2, 0}), zero(2)});
  CHECK(f.sphere_max() <= 1.0 + 1e-10);
  CHECK_THROWS_AS(f(make_point({1.0, 0.0})), DomainError);
  CHECK_THROWS_AS(BallMap::automorphism(make_point({0.6, 0.8})), DomainError);
}

TEST_CASE("text form round-trips") {
  const auto f = parse_ballmap("(ball-poly 2 ((0.5 2 0) (0.5i 0 1)) ())");
  CHECK(f.kind() == BallMap::Kind::Polynomial);
  const BallPoint z = make_point({0.3, Complex(0.1, 0.2)});
  CHECK(std::abs(f(z)(0) - (0.045 + Complex(0, 0.5) * z(1))) <= 1e-15);
  const auto g = parse_ballmap("(ball-compose (ball-aut 0.2 0.1-0.3i) " + to_text(f) + ")");
  CHECK(to_text(parse_ballmap(to_text(g))) == to_text(g));
  CHECK((parse_ballmap(to_text(g))(z) - g(z)).norm() <= 1e-15);
  CHECK_THROWS_AS(parse_ballmap("(ball-poly 2 ((1 2)) ())"), DomainError);
  CHECK_THROWS_AS(parse_ballmap("(ball-blah)"), DomainError);
  CHECK_THROWS_AS(parse_ballmap("(ball-aut 0.5 0.5) x"), DomainError);
  CHECK_THROWS_AS(to_text(BallMap::automorphism(make_point({0.1, 0.0}), random_unitary(2, 1))), DomainError);
}

TEST_CASE("tangential projection and normal decomposition") {
  const BallPoint e1 = basis_vector(2, 0);
  const Complex a(0.3, -1.0), b(2.0, 0.5);
  const CVector pv = tangential_projection(e1, make_point({a, b}));
  CHECK(std::abs(pv(0)) == 0.0);
  CHECK(pv(1) == b);
  std::mt19937 rng(100);
  for (int k = 0; k < 50; ++k) {
    const int n = 2 + k % 3;
    const BallPoint p = sphere_sample(n, n + 1, 200 + k).back();
    CHECK(tangential_projection(p, p).norm() <= 1e-15);
    const CVector v = random_vector(rng, n);
    const BallPoint z = 0.9 * p;
    const auto d = normal_decomposition(z, v);
    CHECK(std::abs(inner(d.transversal, d.tangential)) <= 1e-12);
    CHECK(v.squaredNorm() == doctest::Approx(d.transversal.squaredNorm() + d.tangential.squaredNorm()).epsilon(1e-12));
    CHECK(std::abs(inner(d.tangential, p)) <= 1e-12);
  }
  CHECK_THROWS_AS(normal_decomposition(CVector::Zero(2), e1), DomainError);
  CHECK_THROWS_AS(tangential_projection(make_point({0.5, 0.0}), e1), DomainError);
}

TEST_CASE("geodesic slices") {
  const BallPoint e1 = basis_vector(2, 0);
  const auto diameter = geodesic_slice(e1, e1);
  CHECK(diameter.center.norm() == 0.0);
  CHECK((diameter.direction - e1).norm() == 0.0);

  const CVector v = make_point({1.0, 1.0}) / std::sqrt(2.0);
  const auto s = geodesic_slice(e1, v);
  CHECK((s(1.0) - e1).norm() <= 1e-15);
  // |e1 + w v|^2 = 1 gives |w|^2 / 2 + sqrt(2) Re w = 0: a circle of radius
  // 1/sqrt(2) about w = -1/sqrt(2), i.e. w = (e^{it} - 1)/sqrt(2).
  for (int k = 0; k < 12; ++k) {
    const Complex zeta = std::polar(1.0, 2 * kPi * k / 12);
    const BallPoint w = e1 + ((zeta - 1.0) / std::sqrt(2.0)) * v;
    CHECK((s(zeta) - w).norm() <= 1e-15);
    CHECK(s(zeta).norm() == doctest::Approx(1.0).epsilon(1e-14));
  }

  std::mt19937 rng(110);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n : {2, 3})
    for (int k = 0; k < 20; ++k) {
      const BallPoint p = sphere_sample(n, n + 1, 300 + 10 * n + k).back();
      const auto sl = geodesic_slice(p, random_vector(rng, n));
      for (int j = 0; j < 20; ++j) {
        const Complex zeta = std::polar(std::sqrt(u(rng)) * 0.999, 2 * kPi * u(rng));
        CHECK(std::abs(kobayashi_metric(sl(zeta), sl.direction) * (1.0 - std::norm(zeta)) - 1.0) <= 1e-10);
      }
      // Nontangential approach: delta(phi(t)) comparable to 1 - t.
      for (int m = 4; m <= 16; ++m) {
        const double t = 1.0 - std::ldexp(1.0, -m);
        const double ratio = ball_delta(sl(t)) / (1.0 - t);
        CHECK(ratio >= 1.0 / 1e3);
        CHECK(ratio <= 1.0);
      }
    }
  for (int j = 0; j < 20; ++j) {
    const Complex zeta = std::polar(0.99 * u(rng), 2 * kPi * u(rng));
    CHECK(std::abs(kobayashi_metric(s(zeta), s.direction) * (1.0 - std::norm(zeta)) - 1.0) <= 1e-10);
  }
  CHECK_THROWS_AS(geodesic_slice(e1, basis_vector(2, 1)), DomainError);
}

TEST_CASE("one-dimensional ball agrees with the disk") {
  std::mt19937 rng(120);
  for (int k = 0; k < 1000; ++k) {
    const Complex z = std::polar(0.999 * std::sqrt(std::uniform_real_distribution<double>(0, 1)(rng)),
                                 std::uniform_real_distribution<double>(0, 2 * kPi)(rng));
    const Complex w = std::polar(0.999 * std::sqrt(std::uniform_real_distribution<double>(0, 1)(rng)),
                                 std::uniform_real_distribution<double>(0, 2 * kPi)(rng));
    const double lambda = 1.0 / (1.0 - std::norm(z));
    CHECK(std::abs(kobayashi_metric(make_point({z}), make_point({1.0})) - lambda) <= 1e-10 * lambda);
    const double k_disk = std::atanh(std::abs(HoloMap::automorphism(z)(w)));
    CHECK(std::abs(kobayashi_distance(make_point({z}), make_point({w})) - k_disk) <= 1e-10 * std::max(1.0, k_disk));
  }
}

TEST_CASE("theorem_2_2_check: automorphisms and identity pass") {
  std::mt19937 rng(130);
  for (const auto& f : automorphism_catalog(2, 5, 0.7, 140)) {
    CVector v = random_vector(rng, 2);
    v /= v.norm();
    const auto rep = theorem_2_2_check(f, v);
    CHECK(rep.all_pass());
    CHECK(rep.condition_1 == ConditionStatus::Pass);
    CHECK(rep.condition_2a == ConditionStatus::Pass);
    CHECK(rep.condition_2b == ConditionStatus::Pass);
    CHECK(std::abs(rep.deficit.fitted_limit) <= 1e-6);
    CHECK(rep.sequences.size() == 16);
  }
  const auto id = theorem_2_2_check(BallMap::identity(3), basis_vector(3, 0));
  CHECK(id.all_pass());
  CHECK(id.deficit.fitted_limit == 0.0);
}

TEST_CASE("theorem_2_2_check: z^2 has a nonvanishing deficit") {
  const auto sq2 = BallMap::polynomial(2, {mono(2, 1.0, {2, 0}), zero(2)});
  const auto rep = theorem_2_2_check(sq2, basis_vector(2, 0));
  CHECK(rep.deficit.verdict == RateVerdict::BoundedNonzero);
  CHECK(rep.deficit.fitted_limit == doctest::Approx(-0.25).epsilon(0.1));
  CHECK(rep.condition_2b == ConditionStatus::Fail);
  CHECK(rep.condition_1 == ConditionStatus::Pass);
  // Along the diameter the deficit is -(1-t)/((1+t)(1+t^2)) exactly.
  for (std::size_t i = 0; i < rep.t.size(); ++i) {
    const double t = rep.t[i];
    CHECK(rep.deficit.samples[i].value == doctest::Approx(-(1 - t) / ((1 + t) * (1 + t * t))).epsilon(1e-8));
  }

  const auto sq1 = BallMap::polynomial(1, {mono(1, 1.0, {2})});
  const auto one = theorem_2_2_check(sq1, make_point({1.0}));
  CHECK(one.condition_1 == ConditionStatus::NotApplicable);
  CHECK(one.deficit.fitted_limit == doctest::Approx(-0.25).epsilon(0.1));
}

TEST_CASE("theorem_2_2_check: failures and preconditions") {
  // z -> (z_2, 0) collapses tangential sequences onto the center.
  const auto f = BallMap::polynomial(2, {mono(2, 1.0, {0, 1}), zero(2)});
  const auto rep = theorem_2_2_check(f, basis_vector(2, 0));
  CHECK(rep.condition_1 == ConditionStatus::Fail);
  CHECK(rep.condition_2a == ConditionStatus::NotApplicable);
  CHECK(rep.condition_2b == ConditionStatus::Fail);
  CHECK_FALSE(rep.all_pass());
  CHECK_THROWS_AS(theorem_2_2_check(f, basis_vector(2, 1)), DomainError);
  CHECK_THROWS_AS(theorem_2_2_check(f, make_point({1.0, 1.0})), DomainError);
}

TEST_CASE("aladro_ratio") {
  for (double d : {0.1, 0.01, 0.001, 1e-4}) {
    const BallPoint z = make_point({1.0 - d, 0.0});
    CHECK(aladro_ratio(z, basis_vector(2, 0)) == doctest::Approx(2.0 / (2.0 - d)).epsilon(1e-12));
    const double tangential = aladro_ratio(z, basis_vector(2, 1));
    CHECK(tangential == doctest::Approx(std::sqrt(2.0 / (2.0 - d))).epsilon(1e-12));
    CHECK(tangential >= 0.5);
    CHECK(tangential <= 2.0);
    const double mixed = aladro_ratio(z, make_point({1.0, 1.0}) / std::sqrt(2.0));
    CHECK(mixed >= 1.0 / kAladroConstant);
    CHECK(mixed <= kAladroConstant);
  }
  CHECK(std::abs(aladro_ratio(make_point({1.0 - 1e-8, 0.0}), basis_vector(2, 0)) - 1.0) <= 1e-8);
  CHECK_THROWS_AS(aladro_ratio(make_point({0.5, 0.0}), basis_vector(2, 0)), DomainError);
}

TEST_CASE("prop_7_4_check") {
  const AnalyticDisc linear{{Polynomial({0.0, 1.0}), Polynomial()}};
  CHECK(prop_7_4_check(linear).verdict == DiscVerdict::Geodesic);

  const auto slice = geodesic_slice(basis_vector(2, 0), make_point({1.0, 1.0}) / std::sqrt(2.0));
  const auto rs = prop_7_4_check(AnalyticDisc{slice.components()});
  CHECK(rs.verdict == DiscVerdict::Geodesic);
  CHECK(rs.origin_isometry == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rs.tangential_bounded);

  const AnalyticDisc square{{Polynomial({0.0, 0.0, 1.0}), Polynomial()}};
  const auto rq = prop_7_4_check(square);
  CHECK(rq.verdict == DiscVerdict::NotGeodesic);
  CHECK(rq.rate.verdict == RateVerdict::BoundedNonzero);

  const AnalyticDisc big{{Polynomial({0.0, 2.0}), Polynomial()}};
  CHECK_THROWS_AS(prop_7_4_check(big), DomainError);
}
