#include "pmrig/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace pmrig {

Pseudometric::Pseudometric(Spec spec) : spec_(std::move(spec)) {
  if (!spec_.density) throw DomainError("Pseudometric: density function required");
  for (std::size_t i = 0; i < spec_.zeros.size(); ++i) {
    if (!(spec_.zeros[i].order > 0.0)) throw DomainError("Pseudometric: zero orders must be positive");
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(spec_.zeros[i].location - spec_.zeros[j].location) < 1e-9)
        throw DomainError("Pseudometric: duplicate zero location");
  }
}

double Pseudometric::density(Complex z) const {
  if (!(std::abs(z) < spec_.domain_radius)) {
    std::ostringstream os;
    os << "Pseudometric '" << spec_.name << "': point " << format_complex(z)
       << " outside |z| < " << spec_.domain_radius;
    throw DomainError(os.str());
  }
  return spec_.density(z);
}

double Pseudometric::order_at(Complex xi, double tol) const {
  for (const auto& zr : spec_.zeros)
    if (std::abs(zr.location - xi) < tol) return zr.order;
  return 0.0;
}

Pseudometric poincare() {
  Pseudometric::Spec s;
  s.name = "poincare";
  s.density = [](Complex z) { return 1.0 / (1.0 - std::norm(z)); };
  s.exact_curvature = [](Complex) { return -4.0; };
  s.pinch = PinchBounds{-4.0, -4.0};
  s.constant_curvature = -4.0;
  return Pseudometric(std::move(s));
}

Pseudometric pullback(const HoloMap& f, const Pseudometric& mu) {
  if (f.is_constant()) throw DomainError("pullback: constant map");
  if (mu.domain_radius() < 1.0) throw DomainError("pullback: target metric must live on the unit disk");
  if (!certify_selfmap(f).certified) throw DomainError("pullback: map is not a certified self-map of the disk");

  // Zero orders keyed by location: critical points first, then preimages of
  // the zeros of mu (which subsume the critical order m - 1 at that point).
  std::vector<ZeroRecord> zeros;
  for (const auto& c : f.critical_points()) zeros.push_back({c.location, static_cast<double>(c.multiplicity)});
  for (const auto& zr : mu.zeros()) {
    for (const auto& p : f.preimages(zr.location)) {
      const double order = p.multiplicity * zr.order + (p.multiplicity - 1);
      auto it = std::find_if(zeros.begin(), zeros.end(), [&](const ZeroRecord& r) {
        return std::abs(r.location - p.location) < 1e-7;
      });
      if (it != zeros.end())
        it->order = order;
      else
        zeros.push_back({p.location, order});
    }
  }

  Pseudometric::Spec s;
  s.name = "pullback(" + to_text(f) + "," + mu.name() + ")";
  s.density = [f, mu](Complex z) {
    const Jet j = f.jet(z);
    return mu.density(j.value) * std::abs(j.derivative);
  };
  s.zeros = std::move(zeros);
  if (mu.exact_curvature()) {
    const RealFn k = *mu.exact_curvature();
    s.exact_curvature = [f, k](Complex z) { return k(f(z)); };
  }
  s.pinch = mu.pinch();
  s.constant_curvature = mu.constant_curvature();
  return Pseudometric(std::move(s));
}

Pseudometric mu_max(double beta) {
  if (!(beta > 0.0)) throw DomainError("mu_max: beta must be positive");
  Pseudometric::Spec s;
  std::ostringstream name;
  name << "mu_max(" << beta << ")";
  s.name = name.str();
  s.density = [beta](Complex z) {
    const double r = std::abs(z);
    return (1.0 + beta) * std::pow(r, beta) / (1.0 - std::pow(r, 2.0 * (1.0 + beta)));
  };
  s.zeros = {{Complex(0.0, 0.0), beta}};
  s.exact_curvature = [](Complex) { return -4.0; };
  s.pinch = PinchBounds{-4.0, -4.0};
  s.constant_curvature = -4.0;
  return Pseudometric(std::move(s));
}

Pseudometric scale(double t, const Pseudometric& mu) {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("scale: t must lie in (0, 1]");
  Pseudometric::Spec s;
  std::ostringstream name;
  name << "scale(" << t << "," << mu.name() << ")";
  s.name = name.str();
  s.density = [t, mu](Complex z) { return t * mu.density(z); };
  s.zeros = mu.zeros();
  const double inv = 1.0 / (t * t);
  if (mu.exact_curvature()) {
    const RealFn k = *mu.exact_curvature();
    s.exact_curvature = [k, inv](Complex z) { return k(z) * inv; };
  }
  if (mu.pinch()) s.pinch = PinchBounds{mu.pinch()->lower * inv, mu.pinch()->upper * inv};
  if (mu.constant_curvature()) s.constant_curvature = *mu.constant_curvature() * inv;
  s.domain_radius = mu.domain_radius();
  s.curvature_step = mu.curvature_step();
  return Pseudometric(std::move(s));
}

Pseudometric exp_weight(std::string name, RealFn s_fn, std::optional<RealFn> laplacian_s) {
  // Subharmonicity check on a polar sample of |z| <= 0.9.
  for (const Complex z : polar_sample(0.9, 6, 12)) {
    const double lap = laplacian_s ? (*laplacian_s)(z) : laplacian_fd(s_fn, z, 1e-3);
    if (lap < -1e-6 * std::max(1.0, std::abs(lap)))
      throw DomainError("exp_weight: weight is not subharmonic at " + format_complex(z));
  }
  Pseudometric::Spec s;
  s.name = "exp_weight(" + name + ")";
  s.density = [s_fn](Complex z) { return std::exp(s_fn(z)) / (1.0 - std::norm(z)); };
  if (laplacian_s) {
    const RealFn lap = *laplacian_s;
    s.exact_curvature = [s_fn, lap](Complex z) {
      // kappa = -(Laplacian s + 4 lambda_D^2) / (e^{2s} lambda_D^2)
      const double one_minus = 1.0 - std::norm(z);
      return -(lap(z) * one_minus * one_minus + 4.0) * std::exp(-2.0 * s_fn(z));
    };
  }
  return Pseudometric(std::move(s));
}

Pseudometric dilate(double rho, const Pseudometric& mu) {
  if (!(rho > 0.0)) throw DomainError("dilate: rho must be positive");
  Pseudometric::Spec s;
  std::ostringstream name;
  name << "dilate(" << rho << "," << mu.name() << ")";
  s.name = name.str();
  s.density = [rho, mu](Complex z) { return rho * mu.density(rho * z); };
  for (const auto& zr : mu.zeros()) s.zeros.push_back({zr.location / rho, zr.order});
  if (mu.exact_curvature()) {
    const RealFn k = *mu.exact_curvature();
    s.exact_curvature = [k, rho](Complex z) { return k(rho * z); };
  }
  s.pinch = mu.pinch();
  s.constant_curvature = mu.constant_curvature();
  s.domain_radius = mu.domain_radius() / rho;
  s.curvature_step = mu.curvature_step() / rho;
  return Pseudometric(std::move(s));
}

double curvature(const Pseudometric& mu, Complex z, double h) {
  h = std::max(h, mu.curvature_step());
  const double R = mu.domain_radius();
  if (std::abs(z) > 0.999 * R) {
    std::ostringstream os;
    os << "curvature: |z| = " << std::abs(z) << " too close to the boundary (limit 0.999 R)";
    throw DomainError(os.str());
  }
  if (mu.exact_curvature()) {
    for (const auto& zr : mu.zeros())
      if (std::abs(z - zr.location) < 1e-12) throw DomainError("curvature: undefined at a zero of the metric");
    return (*mu.exact_curvature())(z);
  }
  for (const auto& zr : mu.zeros()) {
    if (std::abs(z - zr.location) < 2.0 * h) {
      std::ostringstream os;
      os << "curvature: stencil at " << format_complex(z) << " touches the zero at "
         << format_complex(zr.location) << "; move at least " << 2.0 * h << " away or reduce h";
      throw DomainError(os.str());
    }
  }
  const double lam = mu.density(z);
  if (!(lam > 0.0)) throw DomainError("curvature: density vanishes at " + format_complex(z));
  auto log_density = [&mu](Complex w) { return std::log(mu.density(w)); };
  LaplacianOptions opts;
  opts.domain_radius = R;
  return -laplacian_fd(log_density, z, h, opts) / (lam * lam);
}

void require_zero_domination(const Pseudometric& lambda, const Pseudometric& mu) {
  for (const auto& zr : mu.zeros()) {
    const double alpha = lambda.order_at(zr.location);
    if (alpha < zr.order - 1e-9) {
      std::ostringstream os;
      os << "not dominated: zero of " << mu.name() << " at " << format_complex(zr.location)
         << " (order " << zr.order << ") has order " << alpha << " in " << lambda.name();
      throw DomainError(os.str());
    }
  }
}

double quotient(const Pseudometric& lambda, const Pseudometric& mu, Complex z) {
  require_zero_domination(lambda, mu);
  for (const auto& zr : mu.zeros()) {
    if (std::abs(z - zr.location) >= 1e-12) continue;
    const double alpha = lambda.order_at(zr.location);
    if (alpha > zr.order + 1e-12) return 0.0;
    constexpr int kSamples = 32;
    constexpr double kRadius = 1e-4;
    double acc = 0.0;
    for (int j = 0; j < kSamples; ++j) {
      const Complex w = zr.location + std::polar(kRadius, 2.0 * kPi * j / kSamples);
      acc += lambda.density(w) / mu.density(w);
    }
    return acc / kSamples;
  }
  const double m = mu.density(z);
  if (!(m > 0.0)) throw DomainError("quotient: mu vanishes at an undeclared point " + format_complex(z));
  return lambda.density(z) / m;
}

double zero_order(const Pseudometric& mu, Complex xi) {
  if (mu.density(xi) > 1e-8) return 0.0;
  constexpr int kAngles = 16;
  std::vector<double> log_r, log_d;
  for (int k = 2; k <= 5; ++k) {
    const double r = std::pow(10.0, -k);
    double acc = 0.0;
    for (int j = 0; j < kAngles; ++j) {
      const double d = mu.density(xi + std::polar(r, 2.0 * kPi * (j + 0.5) / kAngles));
      if (!(d > 0.0)) throw DomainError("zero_order: density vanishes on a punctured neighbourhood");
      acc += std::log(d);
    }
    log_r.push_back(std::log(r));
    log_d.push_back(acc / kAngles);
  }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 1; i < log_r.size(); ++i) {
    const double s = (log_d[i] - log_d[i - 1]) / (log_r[i] - log_r[i - 1]);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  if (hi - lo > 0.05) {
    std::ostringstream os;
    os << "zero_order: log-log slope does not settle (spread " << hi - lo << ")";
    throw ConvergenceError(os.str());
  }
  const double n = static_cast<double>(log_r.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < log_r.size(); ++i) {
    sx += log_r[i];
    sy += log_d[i];
    sxx += log_r[i] * log_r[i];
    sxy += log_r[i] * log_d[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

bool near_zero(const Pseudometric& m, Complex z, double margin) {
  for (const auto& zr : m.zeros())
    if (std::abs(z - zr.location) < margin) return true;
  return false;
}

void record(DominationReport& rep, Complex z, const char* kind, double amount) {
  rep.pass = false;
  if (rep.violations.size() < 64) rep.violations.push_back({z, kind, amount});
}

}  // namespace

DominationReport check_domination(const Pseudometric& lambda, const Pseudometric& mu,
                                  std::span<const Complex> points,
                                  const DominationOptions& options) {
  DominationReport rep;
  try {
    require_zero_domination(lambda, mu);
  } catch (const DomainError&) {
    for (const auto& zr : mu.zeros())
      if (lambda.order_at(zr.location) < zr.order - 1e-9)
        record(rep, zr.location, "zero", zr.order - lambda.order_at(zr.location));
    return rep;
  }
  const double margin = 2.0 * options.h + 1e-9;
  const double R = std::min(lambda.domain_radius(), mu.domain_radius());
  // Numeric curvature needs its whole stencil inside the domain.
  auto reach = [&options](const Pseudometric& m) {
    return m.has_exact_curvature() ? 0.0 : std::max(options.h, m.curvature_step());
  };
  const double limit = std::min(0.999 * R, R - std::max(reach(lambda), reach(mu)));
  for (const Complex z : points) {
    if (std::abs(z) >= limit || near_zero(lambda, z, margin) || near_zero(mu, z, margin)) {
      ++rep.skipped;
      continue;
    }
    ++rep.checked;
    const double kl = curvature(lambda, z, options.h);
    const double km = curvature(mu, z, options.h);
    const double excess = kl - km;
    rep.max_curvature_excess = std::max(rep.max_curvature_excess, excess);
    if (excess > options.curvature_tol * std::max(1.0, std::abs(km))) record(rep, z, "curvature", excess);
    const double q = quotient(lambda, mu, z);
    rep.max_quotient = std::max(rep.max_quotient, q);
    rep.min_quotient = std::min(rep.min_quotient, q);
    if (q > 1.0 + options.quotient_tol) record(rep, z, "quotient", q - 1.0);
    if (q < 0.0) record(rep, z, "quotient", q);
  }
  return rep;
}

std::vector<Complex> polar_sample(double r_max, int n_r, int n_t, double r_min) {
  std::vector<Complex> pts;
  for (int i = 1; i <= n_r; ++i) {
    const double r = r_min + (r_max - r_min) * i / n_r;
    for (int j = 0; j < n_t; ++j) pts.push_back(std::polar(r, 2.0 * kPi * (j + 0.25 * (i % 4)) / n_t));
  }
  return pts;
}

}  // namespace pmrig
