#include "pmrig/greenpj.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pmrig {

double green(double R, Complex z, Complex w) {
  if (!(R > 0.0)) throw DomainError("green: R must be positive");
  if (!(std::abs(z) < R) || !(std::abs(w) < R)) throw DomainError("green: points must lie in |z| < R");
  const Complex num = R * (z - w);
  if (num == Complex(0.0, 0.0)) throw DomainError("green: logarithmic pole at z = w");
  return -std::log(std::abs(num / (R * R - std::conj(w) * z)));
}

namespace {

// Polar coordinates about z: w = z + rho e^{i phi}, 0 <= rho <= rho_max(phi),
// with rho = rho_max t^3 so that the log |w - z| singularity is absorbed by
// the Jacobian rho drho = 3 rho_max^2 t^5 dt.
std::vector<QuadratureNode> focused_nodes(double R, Complex z, const DiskQuadrature& quad) {
  if (quad.n_r < 2 || quad.n_t < 4) throw DomainError("disk quadrature: need n_r >= 2 and n_t >= 4");
  std::vector<double> t, wt;
  gauss_legendre(quad.n_r, 0.0, 1.0, t, wt);
  const double dphi = 2.0 * kPi / quad.n_t;
  const double c = R * R - std::norm(z);
  std::vector<QuadratureNode> out;
  out.reserve(t.size() * quad.n_t);
  for (int j = 0; j < quad.n_t; ++j) {
    const Complex dir = std::polar(1.0, (j + 0.5) * dphi);
    const double b = std::real(std::conj(z) * dir);
    const double rho_max = c / (b + std::sqrt(b * b + c));
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double t2 = t[i] * t[i];
      const double rho = rho_max * t2 * t[i];
      out.push_back({z + rho * dir, 3.0 * rho_max * rho_max * t2 * t2 * t[i] * wt[i] * dphi});
    }
  }
  return out;
}

double integrate(const std::vector<QuadratureNode>& nodes, const std::function<double(Complex)>& f) {
  double sum = 0.0;
  for (const auto& node : nodes) {
    const double v = f(node.point);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "disk quadrature: integrand not finite at node " << format_complex(node.point);
      throw DomainError(os.str());
    }
    sum += node.weight * v;
  }
  return sum;
}

}  // namespace

double green_mean(double R, Complex z, const DiskQuadrature& quad) {
  if (!(std::abs(z) < R)) throw DomainError("green_mean: z must lie in |z| < R");
  return integrate(focused_nodes(R, z, quad), [&](Complex w) { return green(R, z, w); }) / (2.0 * kPi);
}

MajorantValue harmonic_majorant(const Pseudometric& lambda, double R, Complex z, int n_boundary, double tol) {
  if (!(R > 0.0 && R < lambda.domain_radius())) throw DomainError("harmonic_majorant: need 0 < R < domain radius");
  if (!(std::abs(z) < R)) throw DomainError("harmonic_majorant: z must lie in |z| < R");
  if (n_boundary < 8) throw DomainError("harmonic_majorant: need at least 8 boundary nodes");
  for (const auto& zr : lambda.zeros()) {
    if (std::abs(std::abs(zr.location) - R) < 1e-9) {
      std::ostringstream os;
      os << "harmonic_majorant: zero " << format_complex(zr.location) << " lies on |xi| = " << R
         << "; perturb the radius";
      throw DomainError(os.str());
    }
  }
  const double num = R * R - std::norm(z);
  double acc = 0.0;
  for (int j = 0; j < n_boundary; ++j) {
    const Complex xi = std::polar(R, 2.0 * kPi * j / n_boundary);
    const double d = lambda.density(xi);
    if (!(d > 0.0)) throw DomainError("harmonic_majorant: density vanishes on the circle at " + format_complex(xi));
    acc += num / std::norm(xi - z) * std::log(d);
  }
  MajorantValue out;
  out.value = acc / n_boundary;
  out.bound = -std::log1p(-R * R);
  out.within_bound = out.value <= out.bound + tol;
  return out;
}

double curvature_potential(const Pseudometric& lambda, double R, Complex z, const DiskQuadrature& quad) {
  auto integrand = [&](Complex w) {
    const double d = lambda.density(w);
    if (d == 0.0) return 0.0;
    double k = 0.0;
    try {
      k = curvature(lambda, w);
    } catch (const DomainError&) {
      // Within the stencil margin of a zero: kappa lambda^2 = -Laplacian(log lambda)
      // is bounded there while lambda^2 is small; the node contributes ~0.
      return 0.0;
    }
    return green(R, z, w) * k * d * d;
  };
  return integrate(focused_nodes(R, z, quad), integrand) / (2.0 * kPi);
}

PJDecomposition pj_decompose(const Pseudometric& lambda, double R, Complex z, const PJOptions& options) {
  const auto& pinch = lambda.pinch();
  if (!pinch || pinch->upper > -4.0 + 1e-12)
    throw DomainError("pj_decompose: " + lambda.name() + " must declare pinch bounds with upper <= -4");
  if (!(std::abs(z) < R)) throw DomainError("pj_decompose: z must lie in |z| < R");
  for (const auto& zr : lambda.zeros())
    if (std::abs(zr.location - z) < 1e-12) throw DomainError("pj_decompose: z is a zero of the metric");

  PJDecomposition out;
  out.R = R;
  out.z = z;
  double zero_sum = 0.0;
  for (const auto& zr : lambda.zeros()) {
    if (!(std::abs(zr.location) < R)) continue;
    const double v = -zr.order * green(R, z, zr.location);
    out.zero_terms.push_back({zr, v});
    zero_sum += v;
  }
  out.majorant_value = harmonic_majorant(lambda, R, z, options.n_boundary).value;
  out.potential_value = curvature_potential(lambda, R, z, options.quad);
  out.reconstructed_log_density = zero_sum + out.majorant_value + out.potential_value;
  out.log_density = std::log(lambda.density(z));
  out.residual = std::abs(out.reconstructed_log_density - out.log_density);
  out.pass = out.residual <= options.tol;
  return out;
}

Lemma63Report lemma_6_3_bound(const Pseudometric& lambda, const Pseudometric& mu, double r, Complex xi,
                              Complex z, double tol) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("lemma_6_3_bound: r must lie in (0, 1)");
  if (!(std::abs(xi) < r) || !(std::abs(z) < r)) throw DomainError("lemma_6_3_bound: xi and z must lie in |w| < r");
  require_zero_domination(lambda, mu);
  Lemma63Report out;
  out.alpha = lambda.order_at(xi);
  out.beta = mu.order_at(xi);
  if (mu.pinch()) {
    out.c_r = -mu.pinch()->lower;
  } else {
    double kmin = std::numeric_limits<double>::infinity();
    for (const Complex w : polar_sample(r, 16, 32)) {
      bool near = false;
      for (const auto& zr : mu.zeros()) near = near || std::abs(w - zr.location) < 4 * kDefaultCurvatureStep;
      if (!near) kmin = std::min(kmin, curvature(mu, w));
    }
    out.c_r = -kmin;
  }
  out.lhs = std::log(quotient(lambda, mu, z));
  const double g = std::abs(z - xi) < 1e-15 ? std::numeric_limits<double>::infinity() : green(r, z, xi);
  const double diff = out.alpha - out.beta;
  out.rhs = (diff == 0.0 ? 0.0 : -diff * g) + r * r * out.c_r / (4.0 * (1.0 - r * r) * (1.0 - r * r));
  out.pass = out.lhs <= out.rhs + tol;
  return out;
}

}  // namespace pmrig
