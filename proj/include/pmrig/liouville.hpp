#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pmrig/metric.hpp"

namespace pmrig {

/// Newton failure; carries the max-norm residual after each iteration.
class SolverDivergence : public ConvergenceError {
 public:
  SolverDivergence(const std::string& what, std::vector<double> history)
      : ConvergenceError(what), history(std::move(history)) {}
  std::vector<double> history;
};

/// Prescribed curvature kappa(z) together with its declared pinching.
struct CurvatureFunction {
  std::string name;
  RealFn kappa;
  PinchBounds pinch;
};

/// kappa = k everywhere.
CurvatureFunction curvature_constant(double k);

/// kappa = -4 - a|z|^2 for a >= 0, pinched in [-4 - a, -4] on the unit disk.
CurvatureFunction curvature_radial(double a);

/// Density factor |z - xi|^alpha carried outside the unknown.
struct ZeroFactor {
  Complex xi;
  double alpha;
};

/// Delta u = -kappa(z) |z - xi|^{2 alpha} e^{2u} on |z| < R with u = data(theta)
/// on |z| = R. Without a zero factor the weight is 1.
struct DirichletProblem {
  double R = 0.9;
  CurvatureFunction kappa;
  std::function<double(double)> boundary;
  std::optional<ZeroFactor> zero_factor;
};

/// Boundary data log lambda_D(R e^{i theta}) = -log(1 - R^2).
std::function<double(double)> poincare_boundary(double R);

struct SolverOptions {
  /// Nodes per axis of the Cartesian grid on [-R, R]^2.
  int n = 128;
  int max_iter = 60;
  /// Target for the max-norm of the discrete residual.
  double tol = 1e-8;
  /// Iterates are capped at min(log Ahlfors bound, max boundary data) + margin.
  double clamp_margin = 0.05;
};

/// Discretisation: a uniform Cartesian grid masked to the disk. Nodes whose
/// 3x3 block is interior use the compact nine-point scheme (fourth order);
/// nodes next to the circle use one-sided cubic arms ending on it, falling
/// back to Shortley-Weller arms where the grid is too short.

/// Discrete solution on the masked grid, with bicubic (Keys) interpolation.
class LiouvilleSolution {
 public:
  LiouvilleSolution(DirichletProblem problem, int n, std::vector<double> u, std::vector<char> inside);

  double R() const { return problem_.R; }
  int n() const { return n_; }
  double spacing() const { return h_; }
  const DirichletProblem& problem() const { return problem_; }
  Complex node(int i, int j) const { return {-problem_.R + i * h_, -problem_.R + j * h_}; }
  bool inside(int i, int j) const { return inside_[idx(i, j)] != 0; }
  /// Grid value at a node; nodes outside the disk carry the boundary data of
  /// their radial projection.
  double node_value(int i, int j) const { return u_[idx(i, j)]; }

  /// Interpolated u at |z| < R.
  double log_v(Complex z) const;
  /// |z - xi|^alpha e^{u(z)}.
  double density(Complex z) const;

  /// x,y,u,density rows for the nodes inside the disk.
  void write_csv(std::ostream& os) const;

  int iterations = 0;
  double residual = 0.0;
  std::vector<double> residual_history;
  int clamped_nodes = 0;

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * n_ + i; }

  DirichletProblem problem_;
  int n_;
  double h_;
  std::vector<double> u_;
  std::vector<char> inside_;
};

/// Damped Newton with Armijo backtracking, started from the discrete harmonic extension of the data.
/// Requires n >= 64, kappa pinched with upper <= -4 and sampled values
/// inside the declared bounds. Throws ConvergenceError carrying the residual
/// history when max_iter is exhausted.
LiouvilleSolution solve(const DirichletProblem& problem, const SolverOptions& options = {});

/// Solves kappa with Poincare boundary data on |z| < R_construct and wraps the
/// interpolated density as a metric on |z| < 0.95 R_construct with numeric
/// curvature and the pinch bounds of kappa.
Pseudometric make_pinched_metric(const CurvatureFunction& kappa, double R_construct,
                                 const SolverOptions& options = {});

}  // namespace pmrig
