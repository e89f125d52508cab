#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmrig {

using Complex = std::complex<double>;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a precondition on the mathematical input is violated
/// (point outside the disk, non-dominated metrics, bad parameter range).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Raised by iterative procedures that fail to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

constexpr double kPi = 3.141592653589793238462643383279502884;

/// Polar tensor-product grid on the disk |w - center| <= radius.
///
/// Radial nodes are Gauss-Legendre nodes in s = |w - center|^2 (so that
/// dA = ds dtheta / 2 carries no Jacobian), angular nodes are equispaced
/// (trapezoid rule). An optional radial break splits the s-interval into
/// two Gauss-Legendre panels; placing it at a known radial kink of the
/// integrand restores fast convergence.
struct PolarGrid {
  Complex center{0.0, 0.0};
  double radius = 1.0;
  int n_r = 64;
  int n_t = 128;
  std::optional<double> radial_break;

  void validate() const;
};

struct QuadratureNode {
  Complex point;
  double weight;
};

/// Nodes and weights of the grid. Weights are positive and sum to pi*radius^2.
std::vector<QuadratureNode> quadrature_nodes(const PolarGrid& grid);

/// Gauss-Legendre nodes/weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

/// Sum_i w_i f(node_i). A node that coincides with `singular_point` (within
/// 1e-12) is moved outward by half a radial cell; use this for integrands with
/// an integrable logarithmic singularity.
double quadrature_disk(const PolarGrid& grid, const std::function<double(Complex)>& f,
                       std::optional<Complex> singular_point = std::nullopt);

struct LaplacianOptions {
  bool richardson = true;
  /// The stencil must stay inside |w| < domain_radius.
  double domain_radius = 1.0;
};

/// Five-point Laplacian of u at z with step h, optionally Richardson
/// extrapolated once (h and h/2).
double laplacian_fd(const std::function<double(Complex)>& u, Complex z, double h,
                    const LaplacianOptions& options = {});

enum class RateVerdict { Vanishes, BoundedNonzero, Diverges };

std::string to_string(RateVerdict verdict);

struct RateSample {
  double t;
  double value;
};

struct RateReport {
  double exponent_tested = 0.0;
  std::vector<RateSample> samples;
  double fitted_limit = 0.0;
  double fitted_slope = 0.0;
  RateVerdict verdict = RateVerdict::BoundedNonzero;
};

/// Default threshold separating VANISHES from BOUNDED_NONZERO.
constexpr double kTolVanish = 1e-3;

/// Least-squares fit of value/(1-t)^exponent = limit + slope*(1-t) over the
/// second half of the samples (t increasing toward 1). The verdict compares
/// |limit| with tol_vanish and 1/tol_vanish.
RateReport fit_boundary_rate(std::span<const RateSample> samples, double exponent,
                             double tol_vanish = kTolVanish);

/// Dyadic boundary schedule t_k = 1 - 2^-k for k = k_min..k_max.
std::vector<double> dyadic_schedule(int k_min = 4, int k_max = 12);

}  // namespace pmrig
