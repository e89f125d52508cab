#include "pmrig/liouville.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace pmrig {

CurvatureFunction curvature_constant(double k) {
  std::ostringstream name;
  name << "constant(" << k << ")";
  return {name.str(), [k](Complex) { return k; }, {k, k}};
}

CurvatureFunction curvature_radial(double a) {
  if (!(a >= 0.0)) throw DomainError("curvature_radial: a must be >= 0");
  std::ostringstream name;
  name << "radial(" << a << ")";
  return {name.str(), [a](Complex z) { return -4.0 - a * std::norm(z); }, {-4.0 - a, -4.0}};
}

std::function<double(double)> poincare_boundary(double R) {
  if (!(R > 0.0 && R < 1.0)) throw DomainError("poincare_boundary: R must lie in (0, 1)");
  const double v = -std::log1p(-R * R);
  return [v](double) { return v; };
}

LiouvilleSolution::LiouvilleSolution(DirichletProblem problem, int n, std::vector<double> u,
                                     std::vector<char> inside)
    : problem_(std::move(problem)), n_(n), h_(2.0 * problem_.R / (n - 1)), u_(std::move(u)),
      inside_(std::move(inside)) {}

namespace {

// Keys cubic convolution kernel with a = -1/2.
std::array<double, 4> keys_weights(double t) {
  const double a = -0.5;
  auto near = [a](double x) { return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0; };
  auto far = [a](double x) { return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a; };
  return {far(1.0 + t), near(t), near(1.0 - t), far(2.0 - t)};
}

}  // namespace

double LiouvilleSolution::log_v(Complex z) const {
  const double R = problem_.R;
  if (!(std::abs(z) < R)) throw DomainError("liouville solution: point outside |z| < R");
  const double fx = (z.real() + R) / h_, fy = (z.imag() + R) / h_;
  const int i0 = std::clamp(static_cast<int>(std::floor(fx)), 0, n_ - 2);
  const int j0 = std::clamp(static_cast<int>(std::floor(fy)), 0, n_ - 2);
  const auto wx = keys_weights(fx - i0), wy = keys_weights(fy - j0);
  double acc = 0.0;
  for (int b = 0; b < 4; ++b) {
    const int j = std::clamp(j0 - 1 + b, 0, n_ - 1);
    double row = 0.0;
    for (int a = 0; a < 4; ++a) row += wx[a] * u_[idx(std::clamp(i0 - 1 + a, 0, n_ - 1), j)];
    acc += wy[b] * row;
  }
  return acc;
}

double LiouvilleSolution::density(Complex z) const {
  double d = std::exp(log_v(z));
  if (problem_.zero_factor) d *= std::pow(std::abs(z - problem_.zero_factor->xi), problem_.zero_factor->alpha);
  return d;
}

void LiouvilleSolution::write_csv(std::ostream& os) const {
  os << "x,y,u,density\n";
  os.precision(17);
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i < n_; ++i) {
      if (!inside(i, j)) continue;
      const Complex z = node(i, j);
      double d = std::exp(u_[idx(i, j)]);
      if (problem_.zero_factor) d *= std::pow(std::abs(z - problem_.zero_factor->xi), problem_.zero_factor->alpha);
      os << z.real() << ',' << z.imag() << ',' << u_[idx(i, j)] << ',' << d << '\n';
    }
}

namespace {

struct Neighbour {
  int unknown;  // -1 when the arm ends on the circle
  double coef;
};

// Discrete equation of one unknown:
//   diag u_k + sum coef u_nb + constant + sum sigma_s g(u_s) = 0,  g(u) = kappa w e^{2u}.
// Nodes whose 3x3 block is interior use the compact nine-point stencil with
// the source averaged as (8 g_k + sum of edge g) / 12 (fourth order); the
// rest use the Shortley-Weller five-point stencil with the source at the node.
struct Row {
  double diag = 0.0;
  std::vector<Neighbour> nbs;
  double constant = 0.0;
  std::vector<Neighbour> sources;
};

struct Discretisation {
  int n = 0;
  double h = 0.0;
  std::vector<int> unknown_of;  // node -> unknown index or -1
  std::vector<Complex> points;  // unknown -> point
  std::vector<Row> rows;
  std::vector<double> weight;  // kappa * |z - xi|^{2 alpha} per unknown
  std::vector<double> cap;
};

int unknown_at(const Discretisation& d, int i, int j) {
  if (i < 0 || i >= d.n || j < 0 || j >= d.n) return -1;
  return d.unknown_of[static_cast<std::size_t>(j) * d.n + i];
}

void compact_row(const Discretisation& d, int i, int j, int k, Row& row) {
  const double h2 = d.h * d.h;
  row.diag = -20.0 / (6.0 * h2);
  row.sources.push_back({k, 8.0 / 12.0});
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) {
      if (a == 0 && b == 0) continue;
      const int nb = unknown_at(d, i + a, j + b);
      const bool edge = a == 0 || b == 0;
      row.nbs.push_back({nb, (edge ? 4.0 : 1.0) / (6.0 * h2)});
      if (edge) row.sources.push_back({nb, 1.0 / 12.0});
    }
}

// Weights of the second derivative at 0 of the interpolant through the
// offsets (three or four of them, one equal to 0).
std::vector<double> second_derivative_weights(const std::vector<double>& x) {
  std::vector<double> w(x.size());
  for (std::size_t m = 0; m < x.size(); ++m) {
    double denom = 1.0, others = 0.0;
    for (std::size_t l = 0; l < x.size(); ++l)
      if (l != m) {
        denom *= x[m] - x[l];
        others += x[l];
      }
    w[m] = (x.size() == 3 ? 2.0 : -2.0 * others) / denom;
  }
  return w;
}

// Rows next to the circle. Along each axis, an arm that leaves the unknowns
// stops on the circle at distance s. When the opposite side offers two
// regular nodes the cubic through {s, 0, -h, -2h} is used, keeping the local
// truncation error at O(h^2); otherwise the three-point Shortley-Weller arm.
void boundary_row(const Discretisation& d, const DirichletProblem& p, int i, int j, int k, Row& row) {
  const double h = d.h, R = p.R;
  const Complex z = d.points[static_cast<std::size_t>(k)];
  row.sources.push_back({k, 1.0});
  for (int axis = 0; axis < 2; ++axis) {
    const int di = axis == 0 ? 1 : 0, dj = 1 - di;
    std::vector<double> offsets{0.0};
    std::vector<int> unknowns{k};
    std::vector<double> data{0.0};
    auto arm = [&](int sign) {
      const int nb = unknown_at(d, i + sign * di, j + sign * dj);
      if (nb >= 0) {
        offsets.push_back(sign * h);
        unknowns.push_back(nb);
        data.push_back(0.0);
        return true;
      }
      const double along = sign * (axis == 0 ? z.real() : z.imag());
      const double across = axis == 0 ? z.imag() : z.real();
      const double s = std::sqrt(R * R - across * across) - along;
      offsets.push_back(sign * s);
      unknowns.push_back(-1);
      data.push_back(p.boundary(std::arg(z + sign * s * Complex(di, dj))));
      return false;
    };
    const bool plus = arm(1), minus = arm(-1);
    if (plus != minus) {
      const int sign = plus ? 1 : -1;
      const int nb2 = unknown_at(d, i + 2 * sign * di, j + 2 * sign * dj);
      if (nb2 >= 0) {
        offsets.push_back(2.0 * sign * h);
        unknowns.push_back(nb2);
        data.push_back(0.0);
      }
    }
    const auto w = second_derivative_weights(offsets);
    for (std::size_t m = 0; m < w.size(); ++m) {
      if (unknowns[m] == k)
        row.diag += w[m];
      else if (unknowns[m] >= 0)
        row.nbs.push_back({unknowns[m], w[m]});
      else
        row.constant += w[m] * data[m];
    }
  }
}

Discretisation discretise(const DirichletProblem& p, int n, double margin) {
  Discretisation d;
  d.n = n;
  d.h = 2.0 * p.R / (n - 1);
  const double h = d.h, R = p.R;
  d.unknown_of.assign(static_cast<std::size_t>(n) * n, -1);
  auto at = [&](int i, int j) { return Complex(-R + i * h, -R + j * h); };
  // Nodes within 0.1h of the circle are dropped so every arm is at least 0.1h.
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (std::abs(at(i, j)) < R - 0.1 * h) {
        d.unknown_of[static_cast<std::size_t>(j) * n + i] = static_cast<int>(d.points.size());
        d.points.push_back(at(i, j));
      }

  double data_max = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 4096; ++k) data_max = std::max(data_max, p.boundary(2.0 * kPi * k / 4096));
  if (!std::isfinite(data_max)) throw DomainError("liouville: boundary data must be finite");

  const std::size_t m = d.points.size();
  auto unknown = [&](int i, int j) { return unknown_at(d, i, j); };
  d.rows.resize(m);
  d.weight.resize(m);
  d.cap.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const Complex z = d.points[k];
    const int i = static_cast<int>(std::lround((z.real() + R) / h));
    const int j = static_cast<int>(std::lround((z.imag() + R) / h));
    Row& row = d.rows[k];
    bool compact = true;
    for (int a = -1; a <= 1 && compact; ++a)
      for (int b = -1; b <= 1 && compact; ++b) compact = unknown(i + a, j + b) >= 0;
    if (compact)
      compact_row(d, i, j, static_cast<int>(k), row);
    else
      boundary_row(d, p, i, j, static_cast<int>(k), row);
    const double kz = p.kappa.kappa(z);
    if (!(kz >= p.kappa.pinch.lower - 1e-12 && kz <= p.kappa.pinch.upper + 1e-12)) {
      std::ostringstream os;
      os << "liouville: kappa(" << format_complex(z) << ") = " << kz << " outside its declared pinch bounds";
      throw DomainError(os.str());
    }
    double w = 1.0;
    double ahlfors = std::log(R / (R * R - std::norm(z)));
    if (p.zero_factor) {
      const double r = std::abs(z - p.zero_factor->xi);
      w = std::pow(r, 2.0 * p.zero_factor->alpha);
      ahlfors = r > 0.0 ? ahlfors - p.zero_factor->alpha * std::log(r) : std::numeric_limits<double>::infinity();
    }
    d.weight[k] = kz * w;
    d.cap[k] = std::min(ahlfors, data_max) + margin;
  }
  return d;
}

using Vec = Eigen::VectorXd;

Eigen::SparseMatrix<double> laplacian_matrix(const Discretisation& d) {
  const auto m = static_cast<Eigen::Index>(d.rows.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(d.rows.size() * 5);
  for (Eigen::Index k = 0; k < m; ++k) {
    const Row& row = d.rows[static_cast<std::size_t>(k)];
    trip.emplace_back(k, k, row.diag);
    for (const auto& nb : row.nbs) trip.emplace_back(k, nb.unknown, nb.coef);
  }
  Eigen::SparseMatrix<double> L(m, m);
  L.setFromTriplets(trip.begin(), trip.end());
  return L;
}

Eigen::SparseMatrix<double> source_matrix(const Discretisation& d) {
  const auto m = static_cast<Eigen::Index>(d.rows.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(d.rows.size() * 5);
  for (Eigen::Index k = 0; k < m; ++k)
    for (const auto& s : d.rows[static_cast<std::size_t>(k)].sources) trip.emplace_back(k, s.unknown, s.coef);
  Eigen::SparseMatrix<double> S(m, m);
  S.setFromTriplets(trip.begin(), trip.end());
  return S;
}

Vec constants(const Discretisation& d) {
  Vec c(static_cast<Eigen::Index>(d.rows.size()));
  for (std::size_t k = 0; k < d.rows.size(); ++k) c[static_cast<Eigen::Index>(k)] = d.rows[k].constant;
  return c;
}

}  // namespace

LiouvilleSolution solve(const DirichletProblem& problem, const SolverOptions& options) {
  if (!(problem.R > 0.0 && problem.R < 1.0)) throw DomainError("liouville: R must lie in (0, 1)");
  if (options.n < 64) throw DomainError("liouville: grid resolution must be at least 64 x 64");
  if (!problem.boundary || !problem.kappa.kappa) throw DomainError("liouville: kappa and boundary data are required");
  if (problem.kappa.pinch.upper > -4.0 + 1e-12)
    throw DomainError("liouville: kappa must be pinched with upper bound <= -4");
  if (problem.zero_factor && !(problem.zero_factor->alpha > 0.0 && std::abs(problem.zero_factor->xi) < problem.R))
    throw DomainError("liouville: zero factor needs alpha > 0 and xi inside the disk");

  const Discretisation d = discretise(problem, options.n, options.clamp_margin);
  const Eigen::SparseMatrix<double> L = laplacian_matrix(d);
  const Eigen::SparseMatrix<double> S = source_matrix(d);
  const Vec b = constants(d);
  const Eigen::Index m = L.rows();
  Vec w(m), cap(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    w[k] = d.weight[static_cast<std::size_t>(k)];
    cap[k] = d.cap[static_cast<std::size_t>(k)];
  }

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(L);
  lu.factorize(L);
  if (lu.info() != Eigen::Success) throw ConvergenceError("liouville: Laplacian factorisation failed");
  Vec u = lu.solve(-b);

  int clamped = 0;
  auto clamp = [&](Vec& v) {
    clamped = 0;
    for (Eigen::Index k = 0; k < m; ++k)
      if (v[k] > cap[k]) {
        v[k] = cap[k];
        ++clamped;
      }
  };
  auto residual = [&](const Vec& v) -> Vec { return L * v + b + S * (w.array() * (2.0 * v.array()).exp()).matrix(); };

  clamp(u);
  Vec F = residual(u);
  double norm = F.lpNorm<Eigen::Infinity>();
  std::vector<double> history{norm};
  int iter = 0;
  while (norm > options.tol) {
    if (iter == options.max_iter) {
      std::ostringstream os;
      os << "liouville: no convergence in " << options.max_iter << " Newton steps (residual " << norm << ")";
      throw SolverDivergence(os.str(), history);
    }
    const Vec dg = 2.0 * (w.array() * (2.0 * u.array()).exp()).matrix();
    const Eigen::SparseMatrix<double> J = L + S * dg.asDiagonal();
    if (iter == 0) lu.analyzePattern(J);
    lu.factorize(J);
    if (lu.info() != Eigen::Success) throw SolverDivergence("liouville: Newton matrix factorisation failed", history);
    const Vec step = lu.solve(-F);
    // Armijo backtracking on the max-norm residual.
    double t = 1.0;
    Vec trial;
    Vec Ft;
    double nt = 0.0;
    for (;;) {
      trial = u + t * step;
      clamp(trial);
      Ft = residual(trial);
      nt = Ft.lpNorm<Eigen::Infinity>();
      if (nt <= (1.0 - 1e-4 * t) * norm) break;
      t *= 0.5;
      if (t < 1.0 / 1048576.0) {
        std::ostringstream os;
        os << "liouville: line search stalled at residual " << norm;
        throw SolverDivergence(os.str(), history);
      }
    }
    u = std::move(trial);
    F = std::move(Ft);
    norm = nt;
    history.push_back(norm);
    ++iter;
  }

  // Node values: unknowns from u, dropped nodes from the data at their radial projection.
  const int n = options.n;
  std::vector<double> values(static_cast<std::size_t>(n) * n);
  std::vector<char> inside(values.size(), 0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const std::size_t node = static_cast<std::size_t>(j) * n + i;
      const int k = d.unknown_of[node];
      if (k >= 0) {
        values[node] = u[k];
        inside[node] = 1;
      } else {
        const Complex z(-problem.R + i * d.h, -problem.R + j * d.h);
        values[node] = problem.boundary(std::arg(z));
      }
    }
  LiouvilleSolution sol(problem, n, std::move(values), std::move(inside));
  sol.iterations = iter;
  sol.residual = norm;
  sol.residual_history = std::move(history);
  sol.clamped_nodes = clamped;
  return sol;
}

Pseudometric make_pinched_metric(const CurvatureFunction& kappa, double R_construct, const SolverOptions& options) {
  DirichletProblem p;
  p.R = R_construct;
  p.kappa = kappa;
  p.boundary = poincare_boundary(R_construct);
  auto sol = std::make_shared<const LiouvilleSolution>(solve(p, options));
  Pseudometric::Spec s;
  std::ostringstream name;
  name << "liouville(" << kappa.name << "," << R_construct << ")";
  s.name = name.str();
  s.density = [sol](Complex z) { return sol->density(z); };
  s.pinch = kappa.pinch;
  s.domain_radius = 0.95 * R_construct;
  // Keys interpolation is only C^1 across cells. With a step of two cells the
  // Richardson pair (h, h/2) shifts by whole cells, so every stencil point sees
  // the same interpolation phase and the cell-edge kinks cancel.
  s.curvature_step = 2.0 * sol->spacing();
  return Pseudometric(std::move(s));
}

}  // namespace pmrig
