#include "pmrig/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pmrig {

void PolarGrid::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("PolarGrid: radius must be positive");
  if (n_r < 2) throw DomainError("PolarGrid: n_r must be >= 2");
  if (n_t < 4) throw DomainError("PolarGrid: n_t must be >= 4");
  if (radial_break && !(*radial_break > 0.0 && *radial_break < radius))
    throw DomainError("PolarGrid: radial_break must lie strictly inside (0, radius)");
}

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = mid - half * x;
    nodes[n - 1 - i] = mid + half * x;
    weights[i] = half * w;
    weights[n - 1 - i] = half * w;
  }
}

namespace {

struct RadialRule {
  std::vector<double> s;  // nodes in s = r^2
  std::vector<double> w;  // weights in s
};

RadialRule radial_rule(const PolarGrid& grid) {
  RadialRule rule;
  const double s_max = grid.radius * grid.radius;
  if (!grid.radial_break) {
    gauss_legendre(grid.n_r, 0.0, s_max, rule.s, rule.w);
    return rule;
  }
  // Split the radial nodes between the two panels proportionally to length,
  // with at least two nodes per panel.
  const double s_b = (*grid.radial_break) * (*grid.radial_break);
  int n_in = static_cast<int>(std::lround(grid.n_r * s_b / s_max));
  n_in = std::clamp(n_in, 2, std::max(2, grid.n_r - 2));
  const int n_out = std::max(2, grid.n_r - n_in);
  std::vector<double> s1, w1, s2, w2;
  gauss_legendre(n_in, 0.0, s_b, s1, w1);
  gauss_legendre(n_out, s_b, s_max, s2, w2);
  rule.s = s1;
  rule.s.insert(rule.s.end(), s2.begin(), s2.end());
  rule.w = w1;
  rule.w.insert(rule.w.end(), w2.begin(), w2.end());
  return rule;
}

}  // namespace

std::vector<QuadratureNode> quadrature_nodes(const PolarGrid& grid) {
  grid.validate();
  const RadialRule rule = radial_rule(grid);
  const double dtheta = 2.0 * kPi / grid.n_t;
  std::vector<QuadratureNode> out;
  out.reserve(rule.s.size() * grid.n_t);
  for (std::size_t i = 0; i < rule.s.size(); ++i) {
    const double r = std::sqrt(rule.s[i]);
    // dA = r dr dtheta = ds dtheta / 2
    const double w = 0.5 * rule.w[i] * dtheta;
    for (int j = 0; j < grid.n_t; ++j) {
      const double theta = (j + 0.5) * dtheta;
      out.push_back({grid.center + std::polar(r, theta), w});
    }
  }
  return out;
}

double quadrature_disk(const PolarGrid& grid, const std::function<double(Complex)>& f,
                       std::optional<Complex> singular_point) {
  const auto nodes = quadrature_nodes(grid);
  const double half_cell = 0.5 * grid.radius / grid.n_r;
  double sum = 0.0;
  for (const auto& node : nodes) {
    Complex p = node.point;
    if (singular_point && std::abs(p - *singular_point) < 1e-12) {
      const Complex d = p - grid.center;
      const Complex dir = std::abs(d) > 0.0 ? d / std::abs(d) : Complex(1.0, 0.0);
      p += half_cell * dir;
    }
    const double v = f(p);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "quadrature_disk: integrand not finite at node (" << p.real() << ", " << p.imag()
         << ")";
      throw DomainError(os.str());
    }
    sum += node.weight * v;
  }
  return sum;
}

namespace {

double five_point(const std::function<double(Complex)>& u, Complex z, double h,
                  double domain_radius) {
  const Complex pts[4] = {z + h, z - h, z + Complex(0, h), z - Complex(0, h)};
  double acc = -4.0 * u(z);
  for (const Complex& p : pts) {
    if (std::abs(p) >= domain_radius) {
      std::ostringstream os;
      os << "laplacian_fd: stencil point (" << p.real() << ", " << p.imag()
         << ") leaves the domain |w| < " << domain_radius;
      throw DomainError(os.str());
    }
    acc += u(p);
  }
  return acc / (h * h);
}

}  // namespace

double laplacian_fd(const std::function<double(Complex)>& u, Complex z, double h,
                    const LaplacianOptions& options) {
  if (!(h > 0.0)) throw DomainError("laplacian_fd: step must be positive");
  const double coarse = five_point(u, z, h, options.domain_radius);
  if (!options.richardson) return coarse;
  const double fine = five_point(u, z, 0.5 * h, options.domain_radius);
  return (4.0 * fine - coarse) / 3.0;
}

std::string to_string(RateVerdict verdict) {
  switch (verdict) {
    case RateVerdict::Vanishes: return "VANISHES";
    case RateVerdict::BoundedNonzero: return "BOUNDED_NONZERO";
    case RateVerdict::Diverges: return "DIVERGES";
  }
  return "UNKNOWN";
}

RateReport fit_boundary_rate(std::span<const RateSample> samples, double exponent,
                             double tol_vanish) {
  if (samples.size() < 5) throw DomainError("fit_boundary_rate: need at least 5 samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!(s.t >= 0.0 && s.t < 1.0))
      throw DomainError("fit_boundary_rate: sample t must lie in [0, 1)");
    if (!std::isfinite(s.value)) throw DomainError("fit_boundary_rate: non-finite sample value");
    if (i > 0 && !(s.t > samples[i - 1].t))
      throw DomainError("fit_boundary_rate: samples must increase toward 1");
  }

  RateReport report;
  report.exponent_tested = exponent;
  report.samples.assign(samples.begin(), samples.end());

  const std::size_t first = samples.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, max_abs = 0;
  const double n = static_cast<double>(samples.size() - first);
  for (std::size_t i = first; i < samples.size(); ++i) {
    const double x = 1.0 - samples[i].t;
    const double y = samples[i].value / std::pow(x, exponent);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    max_abs = std::max(max_abs, std::abs(y));
  }
  const double denom = n * sxx - sx * sx;
  if (denom > 0.0) {
    report.fitted_slope = (n * sxy - sx * sy) / denom;
    report.fitted_limit = (sy - report.fitted_slope * sx) / n;
  } else {
    report.fitted_slope = 0.0;
    report.fitted_limit = sy / n;
  }

  const double a = std::abs(report.fitted_limit);
  if (a > 1.0 / tol_vanish || max_abs > 1.0 / tol_vanish)
    report.verdict = RateVerdict::Diverges;
  else if (a < tol_vanish)
    report.verdict = RateVerdict::Vanishes;
  else
    report.verdict = RateVerdict::BoundedNonzero;
  return report;
}

std::vector<double> dyadic_schedule(int k_min, int k_max) {
  if (k_min < 1 || k_max < k_min) throw DomainError("dyadic_schedule: need 1 <= k_min <= k_max");
  std::vector<double> t;
  for (int k = k_min; k <= k_max; ++k) t.push_back(1.0 - std::ldexp(1.0, -k));
  return t;
}

}  // namespace pmrig
