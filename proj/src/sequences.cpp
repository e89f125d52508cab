#include "pmrig/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pmrig {

std::vector<ZeroRecord> MetricSequence::zeros_at(int n) const {
  return declared_zero_paths ? declared_zero_paths(n) : generator(n).zeros();
}

std::vector<int> geometric_ladder(int k_min, int k_max) {
  if (k_min < 0 || k_max < k_min || k_max > 30) throw DomainError("geometric_ladder: need 0 <= k_min <= k_max <= 30");
  std::vector<int> out;
  for (int k = k_min; k <= k_max; ++k) out.push_back(1 << k);
  return out;
}

Pseudometric example_4_1(int n) {
  if (n < 1) throw DomainError("example_4_1: n must be >= 1");
  if (n > 170) throw DomainError("example_4_1: 1/n! underflows in double precision for n > 170");
  const double a = 1.0 / std::tgamma(n + 1.0);
  const double p = 1.0 / n;
  auto s = [a, p](Complex z) { return -1.0 - a + std::pow(std::norm(z) + a, p); };
  // Laplacian of g(|z|^2) is 4 (rho g'' + g') with rho = |z|^2.
  auto lap = [a, p](Complex z) {
    const double rho = std::norm(z);
    return 4.0 * p * std::pow(rho + a, p - 2.0) * (a + p * rho);
  };
  std::ostringstream name;
  name << "example_4_1(" << n << ")";
  return exp_weight(name.str(), s, lap);
}

Pseudometric example_4_2(int n, double alpha, Complex z_n) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("example_4_2: alpha must lie in (0, 1)");
  const double m = std::abs(z_n);
  if (!(m > 0.0 && m < 1.0)) throw DomainError("example_4_2: need 0 < |z_n| < 1");
  (void)n;
  return pullback(HoloMap::automorphism(z_n), mu_max(alpha));
}

namespace sequences {

MetricSequence smoothed_weights() {
  return {"exp(s_n) lambda_D", [](int n) { return example_4_1(n); }, {}};
}

MetricSequence fading_zeros() {
  return {"T_n^* mu_max(1/n), z_n = 1/n", [](int n) { return example_4_2(n, 1.0 / n, 1.0 / n); }, {}};
}

MetricSequence constant(const Pseudometric& mu) {
  return {"constant " + mu.name(), [mu](int) { return mu; }, {}};
}

MetricSequence scaled(const Pseudometric& mu) {
  return {"(1 - 1/n) " + mu.name(), [mu](int n) { return scale(1.0 - 1.0 / n, mu); }, {}};
}

MetricSequence mu_max_ladder(double beta) {
  std::ostringstream d;
  d << "mu_max(" << beta << " + 1/n)";
  return {d.str(), [beta](int n) { return mu_max(beta + 1.0 / n); }, {}};
}

}  // namespace sequences

LimitEstimate estimate_limit(const std::vector<int>& ns, const std::vector<double>& xs) {
  if (ns.size() != xs.size() || ns.size() < 2) throw DomainError("estimate_limit: need at least two samples");
  const std::size_t m = ns.size();
  const std::size_t start = m - std::max<std::size_t>(2, (m + 1) / 2);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(m - start);
  for (std::size_t i = start; i < m; ++i) {
    const double x = 1.0 / ns[i];
    sx += x;
    sy += xs[i];
    sxx += x * x;
    sxy += x * xs[i];
  }
  LimitEstimate out;
  const double det = k * sxx - sx * sx;
  out.slope = det != 0.0 ? (k * sxy - sx * sy) / det : 0.0;
  out.limit = (sy - out.slope * sx) / k;
  out.last = xs.back();
  out.monotone = true;
  for (std::size_t i = start + 1; i < m; ++i)
    out.monotone = out.monotone && std::abs(xs[i]) <= std::abs(xs[i - 1]) + 1e-12;
  return out;
}

std::string to_string(DichotomyVerdict v) {
  switch (v) {
    case DichotomyVerdict::UniformConvergence: return "UNIFORM_CONVERGENCE";
    case DichotomyVerdict::FadingZeros: return "FADING_ZEROS";
    case DichotomyVerdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

std::string to_string(LimitClass c) {
  switch (c) {
    case LimitClass::AutomorphismLike: return "AUTOMORPHISM_LIKE";
    case LimitClass::ConstantLike: return "CONSTANT_LIKE";
    case LimitClass::Undetermined: return "UNDETERMINED";
    case LimitClass::NotAsserted: return "NOT_ASSERTED";
  }
  return "UNDETERMINED";
}

namespace {

std::vector<Complex> compact_grid(double radius, int n_r, int n_t) {
  auto pts = polar_sample(radius, n_r, n_t);
  pts.push_back(0.0);
  return pts;
}

void require_dominated(const Pseudometric& lambda, const Pseudometric& mu, int n, const char* who) {
  const auto sample = polar_sample(0.8, 4, 8);
  DominationReport rep;
  try {
    rep = check_domination(lambda, mu, sample);
  } catch (const DomainError& e) {
    std::ostringstream os;
    os << who << ": domination check failed for n = " << n << ": " << e.what();
    throw DomainError(os.str());
  }
  if (!rep.pass) {
    std::ostringstream os;
    os << who << ": lambda_n is not dominated by " << mu.name() << " for n = " << n;
    if (!rep.violations.empty())
      os << " (" << rep.violations[0].kind << " at " << format_complex(rep.violations[0].point) << ")";
    throw DomainError(os.str());
  }
}

// Interior hypothesis q_n(z_n) -> 1 along the ladder.
bool interior_hypothesis(const std::vector<int>& ns, const std::vector<double>& dev, double tol) {
  const auto est = estimate_limit(ns, dev);
  return est.monotone && std::abs(est.limit) <= tol;
}

}  // namespace

DichotomyReport dichotomy_scan(const MetricSequence& seq, const Pseudometric& mu, double c,
                               const std::function<Complex(int)>& z_seq, const DichotomyOptions& options) {
  if (!(c > 0.0)) throw DomainError("dichotomy_scan: c must be positive");
  if (options.ladder.size() < 2) throw DomainError("dichotomy_scan: ladder needs at least two members");
  DichotomyReport rep;
  rep.largest_n = options.ladder.back();
  const auto grid = compact_grid(options.compact_radius, options.grid_n_r, options.grid_n_t);
  std::vector<RateSample> rate_samples;
  std::vector<int> path_ns;
  std::vector<double> path_orders;

  for (const int n : options.ladder) {
    const Pseudometric lambda = seq.at(n);
    require_dominated(lambda, mu, n, "dichotomy_scan");
    const Complex zn = z_seq(n);
    rep.boundary_case = rep.boundary_case || std::abs(zn) > 0.99;
    const double dev = quotient(lambda, mu, zn) - 1.0;
    rep.hypothesis_values.push_back(dev);
    rate_samples.push_back({std::abs(zn), dev});

    // Zeros of lambda_n in excess of mu's inside the compact set.
    std::optional<ZeroPathPoint> weakest;
    std::vector<Complex> pts = grid;
    for (const auto& zr : seq.zeros_at(n)) {
      if (std::abs(zr.location) > options.compact_radius) continue;
      pts.push_back(zr.location);
      const double excess = zr.order - mu.order_at(zr.location);
      if (excess > 0.0 && (!weakest || excess < weakest->order)) weakest = ZeroPathPoint{n, zr.location, excess};
    }
    double sup = 0.0;
    for (const Complex z : pts) sup = std::max(sup, std::abs(quotient(lambda, mu, z) - 1.0));
    rep.sup_errors.push_back(sup);
    if (weakest) {
      rep.zero_path.push_back(*weakest);
      path_ns.push_back(n);
      path_orders.push_back(weakest->order);
    }
  }

  if (rep.boundary_case) {
    rep.hypothesis_rate = fit_boundary_rate(rate_samples, c / 2.0);
    rep.hypothesis_holds = rep.hypothesis_rate->verdict == RateVerdict::Vanishes;
  } else {
    rep.hypothesis_holds = interior_hypothesis(options.ladder, rep.hypothesis_values, options.tol_hypothesis);
  }
  rep.sup_limit = estimate_limit(options.ladder, rep.sup_errors);
  if (!rep.hypothesis_holds) return rep;

  if (rep.sup_limit.monotone && std::abs(rep.sup_limit.limit) <= options.tol) {
    rep.verdict = DichotomyVerdict::UniformConvergence;
    return rep;
  }
  // A fading path needs a zero for every member of the second half of the ladder.
  const std::size_t half = options.ladder.size() - (options.ladder.size() + 1) / 2;
  const bool covered = path_ns.size() >= 2 && path_ns.size() >= options.ladder.size() - half &&
                       path_ns.back() == options.ladder.back();
  if (covered) {
    rep.order_limit = estimate_limit(path_ns, path_orders);
    const std::size_t k = rep.zero_path.size();
    const double last_step = std::abs(rep.zero_path[k - 1].location - rep.zero_path[k - 2].location);
    bool steps_shrink = true;
    for (std::size_t i = k - std::min<std::size_t>(k, 3) + 2; i < k; ++i)
      steps_shrink = steps_shrink && std::abs(rep.zero_path[i].location - rep.zero_path[i - 1].location) <=
                                         std::abs(rep.zero_path[i - 1].location - rep.zero_path[i - 2].location) + 1e-12;
    if (rep.order_limit.monotone && std::abs(rep.order_limit.limit) <= options.tol_order && steps_shrink &&
        last_step <= options.tol_location)
      rep.verdict = DichotomyVerdict::FadingZeros;
  }
  return rep;
}

SchwarzPickSequenceReport sequential_schwarz_pick(const std::function<HoloMap(int)>& f_seq,
                                                  const std::function<Complex(int)>& z_seq,
                                                  const std::vector<int>& ladder, double tol) {
  if (ladder.size() < 5) throw DomainError("sequential_schwarz_pick: ladder needs at least five members");
  SchwarzPickSequenceReport rep;
  rep.largest_n = ladder.back();
  const auto grid = compact_grid(0.8, 8, 16);
  std::vector<RateSample> samples;
  for (const int n : ladder) {
    const HoloMap f = f_seq(n);
    if (!certify_selfmap(f).certified) {
      std::ostringstream os;
      os << "sequential_schwarz_pick: f_n is not a certified self-map for n = " << n;
      throw DomainError(os.str());
    }
    const Complex zn = z_seq(n);
    samples.push_back({std::abs(zn), hyperbolic_derivative(f, zn) - 1.0});
    double dev = 0.0, gap = 0.0;
    for (const Complex z : grid) {
      dev = std::max(dev, std::abs(hyperbolic_derivative(f, z) - 1.0));
      gap = std::max(gap, 1.0 - std::abs(f(z)));
    }
    rep.sup_deviation.push_back(dev);
    rep.min_gap.push_back(gap);
  }
  rep.hypothesis_rate = fit_boundary_rate(samples, 2.0);
  rep.hypothesis_holds = rep.hypothesis_rate.verdict == RateVerdict::Vanishes;
  rep.deviation_limit = estimate_limit(ladder, rep.sup_deviation);
  rep.gap_limit = estimate_limit(ladder, rep.min_gap);
  if (!rep.hypothesis_holds) return rep;
  if (rep.gap_limit.monotone && std::abs(rep.gap_limit.limit) <= tol)
    rep.limit_class = LimitClass::ConstantLike;
  else if (rep.deviation_limit.monotone && std::abs(rep.deviation_limit.limit) <= tol)
    rep.limit_class = LimitClass::AutomorphismLike;
  else
    rep.limit_class = LimitClass::Undetermined;
  return rep;
}

ZeroTrackReport zero_rigidity_track(const MetricSequence& seq, const Pseudometric& mu,
                                    const std::function<Complex(int)>& z_seq, Complex xi,
                                    const ZeroTrackOptions& options) {
  if (options.ladder.size() < 2) throw DomainError("zero_rigidity_track: ladder needs at least two members");
  ZeroTrackReport rep;
  rep.ns = options.ladder;
  rep.xi = xi;
  rep.beta = mu.order_at(xi);
  std::vector<double> devs;
  std::vector<int> path_ns;
  std::vector<double> path_orders, path_dist;
  for (const int n : options.ladder) {
    const Pseudometric lambda = seq.at(n);
    require_dominated(lambda, mu, n, "zero_rigidity_track");
    const double q = quotient(lambda, mu, z_seq(n));
    rep.quotients.push_back(q);
    devs.push_back(q - 1.0);
    rep.beta_n.push_back(lambda.order_at(xi));
    rep.beta_n_estimated.push_back(zero_order(lambda, xi));
    std::optional<ZeroPathPoint> nearest;
    for (const auto& zr : seq.zeros_at(n)) {
      if (std::abs(zr.location - xi) < 1e-12) continue;
      if (!nearest || std::abs(zr.location - xi) < std::abs(nearest->location - xi))
        nearest = ZeroPathPoint{n, zr.location, zr.order};
    }
    if (nearest) {
      rep.approaching.push_back(*nearest);
      path_ns.push_back(n);
      path_orders.push_back(nearest->order);
      path_dist.push_back(std::abs(nearest->location - xi));
    }
  }
  if (!interior_hypothesis(options.ladder, devs, options.tol_hypothesis)) {
    std::ostringstream os;
    os << "zero_rigidity_track: hypothesis q_n(z_n) -> 1 fails (q at n = " << options.ladder.back() << " is "
       << rep.quotients.back() << ")";
    throw DomainError(os.str());
  }
  rep.beta_limit = estimate_limit(options.ladder, rep.beta_n);
  rep.part_a = std::abs(rep.beta_limit.limit - rep.beta) <= options.tol_order;
  rep.part_b = true;
  if (path_ns.size() >= 2 && path_ns.back() == options.ladder.back()) {
    const auto dist = estimate_limit(path_ns, path_dist);
    if (dist.monotone && std::abs(dist.limit) <= options.tol_order) {
      rep.alpha_limit = estimate_limit(path_ns, path_orders);
      rep.part_b = std::abs(rep.alpha_limit.limit) <= options.tol_order;
    }
  }
  return rep;
}

WitnessReport prop_5_7_witness(double a, Complex z, const std::vector<int>& ladder) {
  if (!(a > 0.0 && a <= 1.0)) throw DomainError("prop_5_7_witness: a must lie in (0, 1]");
  if (z == Complex(0.0, 0.0)) throw DomainError("prop_5_7_witness: z = 0 is excluded");
  if (!(std::abs(z) < 1.0)) throw DomainError("prop_5_7_witness: z must lie in the disk");
  WitnessReport rep;
  rep.z = z;
  rep.a = a;
  rep.target = 1.0 / (1.0 - std::norm(z));
  double best = 0.0;
  for (const int n : ladder) {
    if (n < 2) throw DomainError("prop_5_7_witness: ladder members must be >= 2");
    const double alpha = 1.0 / n;
    const double zn = std::pow(a / (2.0 * (1.0 + alpha)), n);
    if (!(zn > 0.0)) throw DomainError("prop_5_7_witness: zero location underflows; shorten the ladder");
    Pseudometric lambda = example_4_2(n, alpha, zn);
    const double at0 = lambda.density(0.0);
    if (at0 > a) lambda = scale(a / at0, lambda);
    rep.members_admissible = rep.members_admissible && lambda.density(0.0) <= a &&
                             lambda.constant_curvature() && *lambda.constant_curvature() <= -4.0;
    const double v = lambda.density(z);
    rep.ahlfors_bound = rep.ahlfors_bound && v <= rep.target * (1.0 + 1e-12);
    best = std::max(best, v);
    rep.ns.push_back(n);
    rep.values.push_back(v);
    rep.running_max.push_back(best);
  }
  return rep;
}

}  // namespace pmrig
