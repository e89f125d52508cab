#include <cmath>
#include <random>

#include "doctest.h"
#include "pmrig/sequences.hpp"
#include "test_support.hpp"

using namespace pmrig;

namespace {

// e^{s_n(z)} evaluated independently through lgamma.
double weight_oracle(int n, double r) {
  const double inv_fact = std::exp(-std::lgamma(n + 1.0));
  return std::exp(-1.0 - inv_fact + std::pow(r * r + inv_fact, 1.0 / n));
}

const auto kHalf = [](int) { return Complex(0.5, 0.0); };

}  // namespace

TEST_CASE("example_4_1") {
  CHECK(std::abs(example_4_1(20).density(0.0) - weight_oracle(20, 0.0)) <= 1e-6);
  CHECK(weight_oracle(20, 0.0) == doctest::Approx(0.4149566).epsilon(1e-6));
  // The ratio at 0.8 tends to 1 like 1 + log(0.64)/n.
  const double r40 = example_4_1(40).density(0.8) * (1 - 0.64);
  CHECK(r40 == doctest::Approx(weight_oracle(40, 0.8)).epsilon(1e-12));
  CHECK(std::abs(r40 - 0.988966) < 1e-6);
  CHECK(std::abs(example_4_1(64).density(0.8) * (1 - 0.64) - 1.0) <= 1e-2);

  // From n = 5 on lambda_n(0) decreases toward 1/e, slowly: (1/n!)^{1/n} ~ e/n.
  double prev = 1.0;
  for (int n : {5, 10, 20, 40, 80, 170}) {
    const double v = example_4_1(n).density(0.0);
    CHECK(v < prev);
    CHECK(v > std::exp(-1.0));
    prev = v;
  }
  CHECK(prev * std::exp(1.0) - 1.0 < 0.02);

  double k_prev = 0.0;
  for (int n : {5, 10, 15}) {
    const double k = curvature(example_4_1(n), 0.0);
    CHECK(k < k_prev);
    k_prev = k;
  }
  CHECK(k_prev < -1e10);

  // Exact curvature agrees with the finite-difference evaluator.
  const auto m = example_4_1(3);
  Pseudometric::Spec numeric;
  numeric.name = "numeric";
  numeric.density = [m](Complex z) { return m.density(z); };
  for (Complex z : {Complex(0.3, 0.1), Complex(-0.5, 0.4), Complex(0.0, 0.7)})
    CHECK(curvature(Pseudometric(numeric), z) == doctest::Approx(curvature(m, z)).epsilon(1e-6));

  CHECK_THROWS_AS(example_4_1(0), DomainError);
  CHECK_THROWS_AS(example_4_1(171), DomainError);
  CHECK_NOTHROW(example_4_1(170));
}

TEST_CASE("example_4_2") {
  for (int n : {2, 4, 8, 16, 32, 64}) {
    const double alpha = 1.0 / n;
    const Complex zn(1.0 / n, 0.0);
    const auto m = example_4_2(n, alpha, zn);
    REQUIRE(m.zeros().size() == 1);
    CHECK(std::abs(m.zeros()[0].location - zn) < 1e-12);
    CHECK(std::abs(zero_order(m, zn) - alpha) <= 1e-3);
    const double r = std::abs(zn);
    const double closed = (1 + alpha) * std::pow(r, alpha) / (1 - std::pow(r, 2 * (1 + alpha))) * (1 - r * r);
    CHECK(m.density(0.0) == doctest::Approx(closed).epsilon(1e-12));
    REQUIRE(m.constant_curvature());
    CHECK(*m.constant_curvature() == -4.0);
  }
  CHECK(std::abs(example_4_2(1024, 1.0 / 1024, 1.0 / 1024).density(0.5) - 4.0 / 3.0) <= 1e-3);
  // lambda_n(0) -> 1 when |z_n|^{alpha_n} -> 1.
  const double n = 1e6;
  CHECK(std::abs(example_4_2(0, 1.0 / n, Complex(0.0, 1.0 / n)).density(0.0) - 1.0) < 1e-4);

  CHECK_THROWS_AS(example_4_2(1, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(example_4_2(1, 0.5, 0.0), DomainError);
  CHECK_THROWS_AS(example_4_2(1, 0.5, 1.0), DomainError);
}

TEST_CASE("estimate_limit") {
  std::vector<int> ns = {2, 4, 8, 16, 32, 64};
  std::vector<double> xs;
  for (int n : ns) xs.push_back(0.25 + 3.0 / n);
  const auto e = estimate_limit(ns, xs);
  CHECK(e.limit == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(e.slope == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(e.monotone);
  xs[5] = 2.0;
  CHECK_FALSE(estimate_limit(ns, xs).monotone);
  CHECK_THROWS_AS(estimate_limit({1}, {0.0}), DomainError);
}

TEST_CASE("dichotomy_scan: examples") {
  const auto P = poincare();
  const auto aut = dichotomy_scan(sequences::constant(pullback(HoloMap::automorphism(Complex(0.3, -0.2)), P)), P, 4, kHalf);
  CHECK(aut.verdict == DichotomyVerdict::UniformConvergence);

  const auto fading = dichotomy_scan(sequences::fading_zeros(), P, 4, kHalf);
  CHECK(fading.verdict == DichotomyVerdict::FadingZeros);
  CHECK(fading.largest_n == 64);
  REQUIRE(fading.zero_path.size() == 6);
  CHECK(fading.zero_path.back().order == doctest::Approx(1.0 / 64));
  CHECK(std::abs(fading.order_limit.limit) < 1e-9);

  const auto scaled = dichotomy_scan(sequences::scaled(P), P, 4, kHalf);
  CHECK(scaled.verdict == DichotomyVerdict::UniformConvergence);
  CHECK(scaled.sup_errors.back() == doctest::Approx(1.0 / 64));

  // Curvature unbounded below: neither alternative is detected.
  const auto smoothed = dichotomy_scan(sequences::smoothed_weights(), P, 4, kHalf);
  CHECK(smoothed.hypothesis_holds);
  CHECK(smoothed.verdict == DichotomyVerdict::Inconclusive);

  // Excess order over mu fades at a fixed zero.
  CHECK(dichotomy_scan(sequences::mu_max_ladder(1.0), mu_max(1.0), 4, kHalf).verdict ==
        DichotomyVerdict::FadingZeros);

  // Hypothesis fails: q_n(1/2) = 1/2 for every n.
  const auto fails = dichotomy_scan(sequences::constant(scale(0.5, P)), P, 4, kHalf);
  CHECK_FALSE(fails.hypothesis_holds);
  CHECK(fails.verdict == DichotomyVerdict::Inconclusive);

  // Boundary hypothesis sequence.
  const auto boundary = dichotomy_scan(sequences::constant(P), P, 4, [](int n) { return Complex(1.0 - 1.0 / (8.0 * n)); });
  CHECK(boundary.boundary_case);
  REQUIRE(boundary.hypothesis_rate);
  CHECK(boundary.verdict == DichotomyVerdict::UniformConvergence);

  CHECK_THROWS_AS(dichotomy_scan(sequences::constant(P), mu_max(1.0), 4, kHalf), DomainError);
}

TEST_CASE("property: dichotomy exclusivity and consistency") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto P = poincare();
  int uniform = 0, fading = 0, other = 0;
  DichotomyOptions opts;
  opts.grid_n_r = 4;
  opts.grid_n_t = 8;
  for (int trial = 0; trial < 1000; ++trial) {
    MetricSequence seq;
    const int kind = trial % 4;
    if (kind == 0) {
      seq = sequences::constant(pullback(testing::random_selfmap(rng, 1), P));
    } else if (kind == 1) {
      const double t = 0.5 + 0.5 * u(rng);
      seq = sequences::scaled(scale(t, P));
    } else if (kind == 2) {
      const Complex c = testing::random_point(rng, 0.5);
      seq = {"drifting zeros", [c](int n) { return example_4_2(n, 1.0 / n, c + Complex(1.0 / n, 0.0)); }, {}};
    } else {
      seq = sequences::mu_max_ladder(u(rng));
    }
    const auto rep = dichotomy_scan(seq, P, 4, kHalf, opts);
    const bool is_uniform = rep.verdict == DichotomyVerdict::UniformConvergence;
    const bool is_fading = rep.verdict == DichotomyVerdict::FadingZeros;
    CHECK_FALSE((is_uniform && is_fading));
    if (is_uniform) CHECK(std::abs(rep.sup_limit.limit) <= opts.tol);
    if (is_fading) CHECK_FALSE(rep.zero_path.empty());
    uniform += is_uniform;
    fading += is_fading;
    other += !is_uniform && !is_fading;
  }
  CHECK(uniform > 0);
  CHECK(fading > 0);
  CHECK(uniform + fading + other == 1000);
}

TEST_CASE("sequential_schwarz_pick") {
  const auto rim = [](int n) { return Complex(1.0 - 1.0 / n, 0.0); };
  const auto rot = sequential_schwarz_pick(
      [](int n) { return HoloMap::scale(std::polar(1.0, 1.0 / n), HoloMap::identity()); }, rim);
  CHECK(rot.hypothesis_holds);
  CHECK(rot.limit_class == LimitClass::AutomorphismLike);

  const auto aut = sequential_schwarz_pick([](int n) { return HoloMap::automorphism(1.0 - 1.0 / n); }, rim);
  CHECK(aut.hypothesis_holds);
  CHECK(aut.limit_class == LimitClass::ConstantLike);

  const auto sq = sequential_schwarz_pick([](int) { return maps::power(2); }, rim);
  CHECK_FALSE(sq.hypothesis_holds);
  CHECK(sq.hypothesis_rate.verdict == RateVerdict::BoundedNonzero);
  CHECK(sq.limit_class == LimitClass::NotAsserted);

  CHECK_THROWS_AS(sequential_schwarz_pick([](int) { return HoloMap::scale(1.5, HoloMap::identity()); }, rim),
                  DomainError);
}

TEST_CASE("zero_rigidity_track") {
  const auto P = poincare();
  const auto a = zero_rigidity_track(sequences::mu_max_ladder(1.0), mu_max(1.0), kHalf, 0.0);
  CHECK(a.beta == 1.0);
  CHECK(a.part_a);
  CHECK(std::abs(a.beta_n.back() - 1.0) <= 0.02);
  CHECK(std::abs(a.beta_limit.limit - 1.0) <= 1e-2);
  CHECK(std::abs(a.beta_n_estimated.back() - a.beta_n.back()) <= 1e-3);
  CHECK(a.approaching.empty());
  CHECK(a.part_b);

  const auto b = zero_rigidity_track(sequences::fading_zeros(), P, kHalf, 0.0);
  CHECK(b.part_a);
  CHECK(b.part_b);
  CHECK(b.approaching.size() == 6);
  CHECK(std::abs(b.alpha_limit.limit) <= 1e-2);

  const auto same = zero_rigidity_track(sequences::constant(mu_max(0.5)), mu_max(0.5), kHalf, 0.0);
  CHECK(same.part_a);
  for (double beta : same.beta_n) CHECK(beta == 0.5);

  CHECK_THROWS_AS(zero_rigidity_track(sequences::constant(scale(0.5, P)), P, kHalf, 0.0), DomainError);
}

TEST_CASE("prop_5_7_witness") {
  for (double a : {1.0, 0.5}) {
    const auto w = prop_5_7_witness(a, 0.5);
    CHECK(std::abs(w.running_max.back() - 4.0 / 3.0) <= 1e-2);
    CHECK(w.members_admissible);
    CHECK(w.ahlfors_bound);
    for (std::size_t i = 1; i < w.running_max.size(); ++i) CHECK(w.running_max[i] >= w.running_max[i - 1]);
  }
  const auto far = prop_5_7_witness(0.25, Complex(0.0, -0.9));
  CHECK(far.ahlfors_bound);
  CHECK(far.running_max.back() / far.target > 0.95);
  CHECK_THROWS_AS(prop_5_7_witness(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(prop_5_7_witness(0.0, 0.5), DomainError);
  CHECK_THROWS_AS(prop_5_7_witness(1.5, 0.5), DomainError);
}
