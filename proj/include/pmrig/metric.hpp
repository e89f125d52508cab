#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pmrig/holomap.hpp"
#include "pmrig/numerics.hpp"

namespace pmrig {

/// Isolated zero of a pseudometric: density ~ |z - location|^order.
struct ZeroRecord {
  Complex location;
  double order;
};

/// Declared curvature pinching lower <= kappa <= upper.
struct PinchBounds {
  double lower;
  double upper;
};

using RealFn = std::function<double(Complex)>;

/// Conformal pseudometric density(z)|dz| on the disk |z| < domain_radius.
///
/// Zeros are declared, not discovered: every constructor states the zeros it
/// creates together with their orders. The curvature is either supplied in
/// closed form or left to the finite-difference evaluator in `curvature`.
/// Values are immutable; copies share the underlying callables.
class Pseudometric {
 public:
  struct Spec {
    std::string name;
    RealFn density;
    std::vector<ZeroRecord> zeros;
    std::optional<RealFn> exact_curvature;
    std::optional<PinchBounds> pinch;
    /// Set when the curvature is identically this constant off the zeros.
    std::optional<double> constant_curvature;
    double domain_radius = 1.0;
    /// Smallest finite-difference step that resolves the density; set for
    /// densities interpolated from grid data, 0 for analytic ones.
    double curvature_step = 0.0;
  };

  explicit Pseudometric(Spec spec);

  const std::string& name() const { return spec_.name; }
  double density(Complex z) const;
  const std::vector<ZeroRecord>& zeros() const { return spec_.zeros; }
  bool has_exact_curvature() const { return spec_.exact_curvature.has_value(); }
  const std::optional<RealFn>& exact_curvature() const { return spec_.exact_curvature; }
  const std::optional<PinchBounds>& pinch() const { return spec_.pinch; }
  const std::optional<double>& constant_curvature() const { return spec_.constant_curvature; }
  double domain_radius() const { return spec_.domain_radius; }
  double curvature_step() const { return spec_.curvature_step; }

  /// Declared order at xi (0 when xi is not a declared zero).
  double order_at(Complex xi, double tol = 1e-7) const;

 private:
  Spec spec_;
};

/// 1/(1 - |z|^2), curvature -4.
Pseudometric poincare();

/// density mu(f(z)) |f'(z)|. Zeros: critical points of f and preimages of the
/// zeros of mu, with orders m*beta + m - 1 at a preimage of multiplicity m.
Pseudometric pullback(const HoloMap& f, const Pseudometric& mu);

/// (1 + beta)|z|^beta / (1 - |z|^{2(1+beta)}), zero of order beta at 0, curvature -4.
Pseudometric mu_max(double beta);

/// t * mu for t in (0, 1]; curvature kappa_mu / t^2.
Pseudometric scale(double t, const Pseudometric& mu);

/// e^{s} / (1 - |z|^2) for a subharmonic weight s. When the Laplacian of s is
/// supplied the curvature is exact; otherwise it is evaluated numerically.
/// Throws when a sampled Laplacian of s is negative.
Pseudometric exp_weight(std::string name, RealFn s, std::optional<RealFn> laplacian_s = std::nullopt);

/// rho * mu(rho z): carries a metric on |z| < rho * R to |z| < R with the
/// curvature kappa_mu(rho z).
Pseudometric dilate(double rho, const Pseudometric& mu);

constexpr double kDefaultCurvatureStep = 1e-3;

/// Gauss curvature -Laplacian(log density)/density^2: the closed form when
/// available, otherwise a Richardson-extrapolated five-point stencil with
/// step max(h, curvature_step of mu). Points
/// with |z| > 0.999 R are refused, as are numeric stencils within 2h of a
/// declared zero.
double curvature(const Pseudometric& mu, Complex z, double h = kDefaultCurvatureStep);

/// Throws DomainError naming the first zero of mu that lambda does not
/// dominate (absent from lambda, or present with a smaller order).
void require_zero_domination(const Pseudometric& lambda, const Pseudometric& mu);

/// Continuous extension of lambda/mu. At a zero xi of mu of order beta where
/// lambda has order alpha: 0 if alpha > beta, otherwise the mean of
/// lambda/mu over 32 points at distance 1e-4 from xi.
double quotient(const Pseudometric& lambda, const Pseudometric& mu, Complex z);

/// Estimated order of mu at xi from the log-log slope over radii 1e-2..1e-5.
/// Returns 0 when mu(xi) > 1e-8.
double zero_order(const Pseudometric& mu, Complex xi);

struct DominationViolation {
  Complex point;
  std::string kind;  // "curvature", "quotient", "zero"
  double amount;
};

struct DominationReport {
  bool pass = true;
  double max_curvature_excess = -std::numeric_limits<double>::infinity();
  double max_quotient = 0.0;
  double min_quotient = std::numeric_limits<double>::infinity();
  int checked = 0;
  int skipped = 0;
  std::vector<DominationViolation> violations;
};

struct DominationOptions {
  double h = kDefaultCurvatureStep;
  /// Relative tolerance on kappa_lambda <= kappa_mu.
  double curvature_tol = 1e-4;
  double quotient_tol = 1e-9;
};

/// Samples kappa_lambda <= kappa_mu and 0 <= lambda/mu <= 1 on the points.
/// Points within the curvature stencil margin of a declared zero are skipped.
DominationReport check_domination(const Pseudometric& lambda, const Pseudometric& mu,
                                  std::span<const Complex> points,
                                  const DominationOptions& options = {});

/// Deterministic polar sample of the disk |z| <= r_max avoiding the origin.
std::vector<Complex> polar_sample(double r_max, int n_r, int n_t, double r_min = 0.0);

}  // namespace pmrig
