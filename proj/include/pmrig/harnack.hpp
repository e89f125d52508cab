#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pmrig/holomap.hpp"
#include "pmrig/metric.hpp"
#include "pmrig/numerics.hpp"

namespace pmrig {

/// e^{1 - 1/r^2} for 0 < r < 1.
double harnack_constant(double r);

/// exp(1 - rho^2/r^2) ((rho^2 - R^2)/(rho^2 - r^2))^{c_rho/2}, 0 < r < R < rho < 1, c_rho >= 4.
double corollary_constant(double r, double R, double rho, double c_rho);

/// Barrier (1 - |z|^2)^{c/2} e^{(1 - |z|^2)/r^2}.
double aux_v(double r, double c, Complex z);

struct AuxPdeReport {
  double r = 0.0;
  double c = 0.0;
  bool pass = true;
  /// min over checked points of (Delta v) (1-|z|^2)^2 / v - 2c.
  double min_margin = 0.0;
  std::optional<Complex> witness;
  int checked = 0;
};

/// Checks Delta v_r >= 2c v_r / (1-|z|^2)^2 on the given points (all must
/// satisfy r <= |z| < 1) with a finite-difference Laplacian. The comparison
/// is made after dividing by v_r / (1-|z|^2)^2, so `tol` is absolute on
/// the scale of 2c.
AuxPdeReport verify_aux_pde(double r, double c, std::span<const Complex> points, double h = 1e-4,
                            double tol = 1e-5);

/// The cubic f with (Delta v_r / v_r)(1-|z|^2)^2 = f(|z|^2).
double barrier_cubic(double c, double r, double x);

struct CubicReport {
  double c = 0.0;
  double r = 0.0;
  double min_value = 0.0;
  double argmin = 0.0;
  /// f(r^2) = 2c + c(c-4) r^2 and f(1) = (c-2)c, checked in exact rational
  /// arithmetic on the binary values of c and r.
  bool endpoint_r2_exact = false;
  bool endpoint_one_exact = false;
  bool pass = false;
};

/// Samples the cubic on n_samples equispaced points of [r^2, 1] and checks
/// f >= 2c, plus the endpoint identities.
CubicReport cubic_check(double c, double r, int n_samples = 1001);

struct HarnackReport {
  double r = 0.0;
  double c = 0.0;
  /// max over checked z of log(lambda/mu)(z) - rhs(z); -inf if nothing checked.
  double lhs_max_violation = 0.0;
  bool pass = false;
  std::optional<Complex> witness;
  /// max over |xi| = r of log(lambda/mu)(xi).
  double circle_max = 0.0;
  int checked = 0;
};

constexpr double kHarnackTol = 1e-7;
constexpr int kHarnackCircleSamples = 1024;

/// Boundary Harnack inequality
///   log(lambda/mu)(z) <= C_r / (1-r^2)^{c/2} * max_{|xi|=r} log(lambda/mu)(xi) * (1-|z|^2)^{c/2}
/// on the points with r <= |z| <= 0.9995 (others are ignored).
///
/// Throws DomainError when mu lacks pinch bounds inside [-c, -4] or when
/// lambda is not dominated by mu on the sampled points.
HarnackReport check_harnack(const Pseudometric& lambda, const Pseudometric& mu, double c, double r,
                            std::span<const Complex> points, double tol = kHarnackTol);

struct GolusinReport {
  bool pass = true;
  /// max over points of lambda/lambda_D - bound.
  double max_excess = 0.0;
  std::optional<Complex> witness;
  double lambda_at_zero = 0.0;
  int checked = 0;
};

/// lambda/lambda_D(z) <= (lambda(0) + s)/(1 + lambda(0) s), s = 2|z|/(1+|z|^2).
/// Only meaningful for curvature identically -4; other metrics are refused.
GolusinReport check_golusin(const Pseudometric& lambda, std::span<const Complex> points,
                            double tol = 1e-9);

/// Approach path to the boundary: either the ray t e^{i angle} on a
/// schedule, or an explicit list of points with increasing modulus.
struct BoundaryPath {
  double angle = 0.0;
  std::vector<double> schedule = dyadic_schedule();
  std::vector<Complex> points;  // overrides angle/schedule when non-empty

  std::vector<Complex> resolve() const;
};

/// Fits (lambda/mu - 1)(z_n) against (1 - |z_n|)^{c/2} along the path.
RateReport rigidity_scan(const Pseudometric& lambda, const Pseudometric& mu, double c,
                         const BoundaryPath& path = {});

struct BurnsKrantzReport {
  /// |f(t) - t| at exponent 3.
  RateReport displacement;
  /// f^h(t) - 1 at exponent 2.
  RateReport hyperbolic;
  /// displacement VANISHES implies hyperbolic VANISHES.
  bool implication_holds = false;
};

/// Both rates along the radius [0, 1) toward the fixed boundary point 1.
BurnsKrantzReport burns_krantz_check(const HoloMap& f,
                                     const std::vector<double>& schedule = dyadic_schedule());

namespace maps {

/// z -> z - c (1 - z)^4.
HoloMap quartic_perturbation(double c);

}  // namespace maps

}  // namespace pmrig
