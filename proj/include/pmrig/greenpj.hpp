#pragma once

#include <vector>

#include "pmrig/metric.hpp"
#include "pmrig/numerics.hpp"

namespace pmrig {

/// Green function of |z| < R: -log |R (z - w) / (R^2 - conj(w) z)|.
double green(double R, Complex z, Complex w);

/// Resolution of the area quadrature over |w| < R used for integrands with
/// a logarithmic singularity at z: polar coordinates centred at z, n_r
/// Gauss-Legendre nodes along each ray (graded toward z) and n_t rays.
struct DiskQuadrature {
  int n_r = 48;
  int n_t = 96;
};

/// (1/2pi) * integral of g_R(z, w) over |w| < R; equals (R^2 - |z|^2)/4.
double green_mean(double R, Complex z, const DiskQuadrature& quad = {});

struct MajorantValue {
  double value = 0.0;
  /// log(1/(1 - R^2)).
  double bound = 0.0;
  bool within_bound = false;
};

constexpr int kDefaultMajorantNodes = 512;

/// Poisson integral of log lambda over |xi| = R evaluated at z (trapezoid
/// rule). Throws when a declared zero of lambda lies on the circle.
MajorantValue harmonic_majorant(const Pseudometric& lambda, double R, Complex z,
                                int n_boundary = kDefaultMajorantNodes, double tol = 1e-9);

struct ZeroTerm {
  ZeroRecord zero;
  /// -alpha g_R(z, xi).
  double value;
};

struct PJDecomposition {
  double R = 0.0;
  Complex z;
  std::vector<ZeroTerm> zero_terms;
  double majorant_value = 0.0;
  double potential_value = 0.0;
  double reconstructed_log_density = 0.0;
  double log_density = 0.0;
  double residual = 0.0;
  bool pass = false;
};

struct PJOptions {
  DiskQuadrature quad;
  int n_boundary = kDefaultMajorantNodes;
  double tol = 1e-3;
};

/// log lambda(z) = -sum alpha_j g_R(z, xi_j) + h_R(z) + (1/2pi) int g_R(z, w) kappa(w) lambda(w)^2 dA.
/// Requires declared pinch bounds with upper <= -4, z inside |z| < R and
/// not a zero of lambda.
PJDecomposition pj_decompose(const Pseudometric& lambda, double R, Complex z, const PJOptions& options = {});

/// (1/2pi) int_{|w|<R} g_R(z, w) kappa(w) lambda(w)^2 dA on the given quadrature.
double curvature_potential(const Pseudometric& lambda, double R, Complex z, const DiskQuadrature& quad);

struct Lemma63Report {
  double lhs = 0.0;
  double rhs = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double c_r = 0.0;
  bool pass = false;
};

/// log(lambda/mu)(z) <= -(alpha - beta) g_r(z, xi) + r^2 c_r / (4 (1 - r^2)^2)
/// with alpha, beta the declared orders at xi and c_r = -min_{|w| <= r} kappa_mu
/// (from pinch bounds when declared, else sampled).
Lemma63Report lemma_6_3_bound(const Pseudometric& lambda, const Pseudometric& mu, double r, Complex xi,
                              Complex z, double tol = 1e-9);

}  // namespace pmrig
