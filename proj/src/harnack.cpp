#include "pmrig/harnack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

namespace pmrig {

double harnack_constant(double r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("harnack_constant: r must lie in (0, 1)");
  return std::exp(1.0 - 1.0 / (r * r));
}

double corollary_constant(double r, double R, double rho, double c_rho) {
  if (!(0.0 < r && r < R && R < rho && rho < 1.0))
    throw DomainError("corollary_constant: need 0 < r < R < rho < 1");
  if (!(c_rho >= 4.0)) throw DomainError("corollary_constant: c_rho must be >= 4");
  const double r2 = r * r, R2 = R * R, rho2 = rho * rho;
  return std::exp(1.0 - rho2 / r2) * std::pow((rho2 - R2) / (rho2 - r2), c_rho / 2.0);
}

double aux_v(double r, double c, Complex z) {
  const double s = 1.0 - std::norm(z);
  if (s <= 0.0) return 0.0;
  return std::pow(s, c / 2.0) * std::exp(s / (r * r));
}

AuxPdeReport verify_aux_pde(double r, double c, std::span<const Complex> points, double h, double tol) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("verify_aux_pde: r must lie in (0, 1)");
  if (!(c >= 4.0)) throw DomainError("verify_aux_pde: c must be >= 4");
  AuxPdeReport rep;
  rep.r = r;
  rep.c = c;
  rep.min_margin = std::numeric_limits<double>::infinity();
  auto v = [r, c](Complex z) { return aux_v(r, c, z); };
  for (const Complex z : points) {
    const double m = std::abs(z);
    if (m < r || m >= 1.0) {
      std::ostringstream os;
      os << "verify_aux_pde: point " << format_complex(z) << " outside the annulus " << r << " <= |z| < 1";
      throw DomainError(os.str());
    }
    // Keep the stencil well inside the disk: the barrier varies on the scale 1 - |z|.
    const double step = std::min(h, (1.0 - m) / 50.0);
    const double s = 1.0 - m * m;
    const double margin = laplacian_fd(v, z, step) * s * s / v(z) - 2.0 * c;
    ++rep.checked;
    if (margin < rep.min_margin) {
      rep.min_margin = margin;
      rep.witness = z;
    }
  }
  rep.pass = rep.checked == 0 || rep.min_margin >= -tol;
  return rep;
}

double barrier_cubic(double c, double r, double x) {
  const double r2 = r * r;
  const double a3 = 4.0;
  const double a2 = -4.0 * (2.0 + (1.0 + c) * r2);
  const double a1 = 4.0 + 4.0 * (2.0 + c) * r2 + c * c * r2 * r2;
  const double a0 = -2.0 * r2 * (2.0 + c * r2);
  return (((a3 * x + a2) * x + a1) * x + a0) / (r2 * r2);
}

namespace {

using boost::multiprecision::cpp_rational;

cpp_rational exact(double x) {
  // Every finite double is a dyadic rational m * 2^e.
  int e = 0;
  const double m = std::frexp(x, &e);
  const auto mant = static_cast<long long>(std::ldexp(m, 53));
  cpp_rational q(mant);
  e -= 53;
  cpp_rational p2(1);
  for (int i = 0; i < std::abs(e); ++i) p2 *= 2;
  return e >= 0 ? cpp_rational(q * p2) : cpp_rational(q / p2);
}

cpp_rational exact_cubic(const cpp_rational& c, const cpp_rational& r2, const cpp_rational& x) {
  const cpp_rational a2 = -4 * (2 + (1 + c) * r2);
  const cpp_rational a1 = 4 + 4 * (2 + c) * r2 + c * c * r2 * r2;
  const cpp_rational a0 = -2 * r2 * (2 + c * r2);
  return (((4 * x + a2) * x + a1) * x + a0) / (r2 * r2);
}

}  // namespace

CubicReport cubic_check(double c, double r, int n_samples) {
  if (!(c >= 4.0)) throw DomainError("cubic_check: c must be >= 4");
  if (!(r > 0.0 && r < 1.0)) throw DomainError("cubic_check: r must lie in (0, 1)");
  if (n_samples < 2) throw DomainError("cubic_check: need at least 2 samples");
  CubicReport rep;
  rep.c = c;
  rep.r = r;
  rep.min_value = std::numeric_limits<double>::infinity();
  const double x0 = r * r;
  for (int i = 0; i < n_samples; ++i) {
    const double x = x0 + (1.0 - x0) * i / (n_samples - 1);
    const double f = barrier_cubic(c, r, x);
    if (f < rep.min_value) {
      rep.min_value = f;
      rep.argmin = x;
    }
  }
  const cpp_rational C = exact(c), R = exact(r);
  const cpp_rational R2 = R * R;
  rep.endpoint_r2_exact = exact_cubic(C, R2, R2) == 2 * C + C * (C - 4) * R2;
  rep.endpoint_one_exact = exact_cubic(C, R2, cpp_rational(1)) == (C - 2) * C;
  // Relative slack for rounding in the double evaluation of the cubic.
  const double slack = 1e-12 * std::max(1.0, std::abs(rep.min_value)) / (x0 * x0);
  rep.pass = rep.endpoint_r2_exact && rep.endpoint_one_exact && rep.min_value >= 2.0 * c - slack;
  return rep;
}

HarnackReport check_harnack(const Pseudometric& lambda, const Pseudometric& mu, double c, double r,
                            std::span<const Complex> points, double tol) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("check_harnack: r must lie in (0, 1)");
  if (!(c >= 4.0)) throw DomainError("check_harnack: c must be >= 4");
  const auto& pinch = mu.pinch();
  if (!pinch) throw DomainError("check_harnack: mu must declare pinch bounds");
  if (pinch->lower < -c - 1e-12 || pinch->upper > -4.0 + 1e-12) {
    std::ostringstream os;
    os << "check_harnack: pinch bounds [" << pinch->lower << ", " << pinch->upper
       << "] of mu are not inside [-c, -4] with c = " << c;
    throw DomainError(os.str());
  }
  const auto dom = check_domination(lambda, mu, points);
  if (!dom.pass) {
    std::ostringstream os;
    os << "check_harnack: " << lambda.name() << " is not dominated by " << mu.name();
    if (!dom.violations.empty())
      os << " (" << dom.violations[0].kind << " violation " << dom.violations[0].amount << " at "
         << format_complex(dom.violations[0].point) << ")";
    throw DomainError(os.str());
  }

  HarnackReport rep;
  rep.r = r;
  rep.c = c;
  rep.circle_max = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < kHarnackCircleSamples; ++j) {
    const Complex xi = std::polar(r, 2.0 * kPi * j / kHarnackCircleSamples);
    rep.circle_max = std::max(rep.circle_max, std::log(quotient(lambda, mu, xi)));
  }
  const double factor = harnack_constant(r) / std::pow(1.0 - r * r, c / 2.0);
  rep.lhs_max_violation = -std::numeric_limits<double>::infinity();
  for (const Complex z : points) {
    const double m = std::abs(z);
    if (m < r || m > 0.9995) continue;
    ++rep.checked;
    const double lhs = std::log(quotient(lambda, mu, z));
    const double rhs = factor * rep.circle_max * std::pow(1.0 - m * m, c / 2.0);
    const double violation = lhs - rhs;
    if (violation > rep.lhs_max_violation) {
      rep.lhs_max_violation = violation;
      rep.witness = z;
    }
  }
  rep.pass = rep.lhs_max_violation <= tol;
  return rep;
}

GolusinReport check_golusin(const Pseudometric& lambda, std::span<const Complex> points, double tol) {
  const auto& k = lambda.constant_curvature();
  if (!k || *k != -4.0)
    throw DomainError("check_golusin: " + lambda.name() + " does not have curvature identically -4");
  GolusinReport rep;
  rep.lambda_at_zero = lambda.density(0.0);
  rep.max_excess = -std::numeric_limits<double>::infinity();
  const double l0 = rep.lambda_at_zero;
  for (const Complex z : points) {
    const double n = std::norm(z);
    if (!(n < 1.0)) throw DomainError("check_golusin: point outside the disk");
    const double s = 2.0 * std::sqrt(n) / (1.0 + n);
    const double bound = (l0 + s) / (1.0 + l0 * s);
    const double excess = lambda.density(z) * (1.0 - n) - bound;
    ++rep.checked;
    if (excess > rep.max_excess) {
      rep.max_excess = excess;
      rep.witness = z;
    }
  }
  rep.pass = rep.max_excess <= tol;
  return rep;
}

std::vector<Complex> BoundaryPath::resolve() const {
  std::vector<Complex> out;
  if (!points.empty()) {
    out = points;
  } else {
    for (double t : schedule) out.push_back(std::polar(t, angle));
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(std::abs(out[i]) < 1.0)) throw DomainError("boundary path leaves the open disk at " + format_complex(out[i]));
    if (i > 0 && !(std::abs(out[i]) > std::abs(out[i - 1])))
      throw DomainError("boundary path must approach the boundary with increasing modulus");
  }
  return out;
}

RateReport rigidity_scan(const Pseudometric& lambda, const Pseudometric& mu, double c,
                         const BoundaryPath& path) {
  if (!(c > 0.0)) throw DomainError("rigidity_scan: c must be positive");
  require_zero_domination(lambda, mu);
  std::vector<RateSample> samples;
  for (const Complex z : path.resolve()) samples.push_back({std::abs(z), quotient(lambda, mu, z) - 1.0});
  return fit_boundary_rate(samples, c / 2.0);
}

BurnsKrantzReport burns_krantz_check(const HoloMap& f, const std::vector<double>& schedule) {
  std::vector<RateSample> disp, hyp;
  for (double t : schedule) {
    const Jet j = f.jet(t);
    disp.push_back({t, std::abs(j.value - t)});
    hyp.push_back({t, hyperbolic_derivative(f, t) - 1.0});
  }
  BurnsKrantzReport rep;
  rep.displacement = fit_boundary_rate(disp, 3.0);
  rep.hyperbolic = fit_boundary_rate(hyp, 2.0);
  rep.implication_holds = rep.displacement.verdict != RateVerdict::Vanishes ||
                          rep.hyperbolic.verdict == RateVerdict::Vanishes;
  return rep;
}

namespace maps {

HoloMap quartic_perturbation(double c) {
  // z - c (1 - z)^4 = -c + (1 + 4c) z - 6c z^2 + 4c z^3 - c z^4
  return HoloMap::polynomial({-c, 1.0 + 4.0 * c, -6.0 * c, 4.0 * c, -c});
}

}  // namespace maps

}  // namespace pmrig
