#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pmrig/numerics.hpp"
#include "pmrig/polynomial.hpp"

namespace pmrig {

// Geometry of the unit ball B^N of C^N.
//
// Conventions: <v, w> = sum_j v_j conj(w_j); delta(z) = 1 - |z|; the
// Kobayashi distance is normalized so that K(0, r e_1) = arctanh r, matching
// the disk distance K_D(0, r). Tangent vectors are plain CVector values; the
// base point is always passed alongside.

using CVector = Eigen::VectorXcd;
using BallPoint = CVector;
using CMatrix = Eigen::MatrixXcd;

/// <v, w>, linear in v.
Complex inner(const CVector& v, const CVector& w);
/// k-th standard basis vector of C^n (k is zero based).
CVector basis_vector(int n, int k);
BallPoint make_point(std::initializer_list<Complex> coords);

/// 1 - |z|.
double ball_delta(const BallPoint& z);

/// sqrt((1-|z|^2)|v|^2 + |<v,z>|^2) / (1-|z|^2). Requires |z| < 1.
double kobayashi_metric(const BallPoint& z, const CVector& v);
/// Same with 1 - |z|^2 supplied by the caller, for points near the sphere
/// whose gap is known more accurately than their coordinates.
double kobayashi_metric(const BallPoint& z, const CVector& v, double one_minus_norm2);
/// arctanh |phi_z(w)|, evaluated without cancellation near the sphere.
double kobayashi_distance(const BallPoint& z, const BallPoint& w);

/// Pi_p(v) = v - <v,p> p for |p| = 1.
CVector tangential_projection(const BallPoint& p, const CVector& v);
/// z / |z|; throws DomainError at z = 0.
BallPoint boundary_projection(const BallPoint& z);

/// v = transversal + tangential with tangential = Pi_{pi(z)}(v).
struct NormalDecomposition {
  CVector transversal;
  CVector tangential;
};
NormalDecomposition normal_decomposition(const BallPoint& z, const CVector& v);

/// The disc (C v + p) cap B^N as phi(zeta) = center + zeta * direction,
/// normalized so that phi(1) = p.
struct GeodesicSlice {
  BallPoint p;
  BallPoint center;
  CVector direction;  // phi'(zeta), constant

  BallPoint operator()(Complex zeta) const { return center + zeta * direction; }
  /// Component polynomials in zeta.
  std::vector<Polynomial> components() const;
};
/// Requires |p| = 1 and <v,p> != 0.
GeodesicSlice geodesic_slice(const BallPoint& p, const CVector& v);

/// Sparse multivariate polynomial in z_1..z_N.
struct Monomial {
  Complex coeff;
  std::vector<int> powers;
};

class MultiPolynomial {
 public:
  MultiPolynomial(int n, std::vector<Monomial> terms);
  int dim() const { return n_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  Complex operator()(const CVector& z) const;
  MultiPolynomial partial(int k) const;

 private:
  int n_;
  std::vector<Monomial> terms_;
};

/// Samples of the unit sphere: the basis vectors followed by seeded random
/// points (normalized complex Gaussians).
std::vector<BallPoint> sphere_sample(int n, int count, std::uint64_t seed = 1);
/// Seeded random points with |z| <= radius (uniform in the ball of that radius).
std::vector<BallPoint> ball_sample(int n, int count, double radius, std::uint64_t seed = 1);
/// Haar-distributed unitary matrix from a seeded QR factorization.
CMatrix random_unitary(int n, std::uint64_t seed);

constexpr int kSphereSamples = 2048;

/// Holomorphic self-map of B^N with an exact Jacobian.
///
///   polynomial(n, comps)   components are polynomials; certified at
///                          construction by |F| <= 1 + 1e-10 on sphere_sample
///   automorphism(a, U)     z -> U (a - P_a z - s_a Q_a z) / (1 - <z,a>),
///                          s_a = sqrt(1 - |a|^2), P_a the projection onto C a
///   compose(f, g)          z -> f(g(z))
class BallMap {
 public:
  enum class Kind { Polynomial, Automorphism, Compose };

  static BallMap identity(int n);
  static BallMap polynomial(int n, std::vector<MultiPolynomial> components);
  static BallMap automorphism(const BallPoint& a, const CMatrix& unitary = CMatrix());
  static BallMap compose(const BallMap& outer, const BallMap& inner);

  int dim() const;
  Kind kind() const;
  /// Largest |F| found on the certification sample; 1 for automorphisms and
  /// the larger of the two factors for compositions.
  double sphere_max() const;

  /// F(z). Throws DomainError unless |z| < 1 and |F(z)| < 1.
  BallPoint operator()(const BallPoint& z) const;
  /// dF_z. Requires |z| < 1.
  CMatrix jacobian(const BallPoint& z) const;
  CVector push(const BallPoint& z, const CVector& v) const { return jacobian(z) * v; }
  /// 1 - |F(z)|^2, in closed form through automorphism factors so that it
  /// keeps its relative accuracy near the sphere.
  double image_gap(const BallPoint& z) const;
  /// k(F(z); dF_z v) evaluated with image_gap.
  double push_metric(const BallPoint& z, const CVector& v) const;

  struct Node;

 private:
  explicit BallMap(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
  friend std::string to_text(const BallMap& f);
};

/// Parses
///
///   map   := "(ball-poly" N comp ... ")" | "(ball-aut" a_1 ... a_N ")"
///          | "(ball-compose" map map ")"
///   comp  := "(" term ... ")"          an empty list is the zero component
///   term  := "(" c e_1 ... e_N ")"     c z_1^e_1 ... z_N^e_N
///
/// with complex literals as in parse_complex. Unitary factors are not part
/// of the grammar.
BallMap parse_ballmap(std::string_view text);
/// Inverse of parse_ballmap; throws DomainError for automorphisms carrying a
/// unitary factor.
std::string to_text(const BallMap& f);

/// K(p0, z) + log(delta(z))/2 along the radius z = (1 - delta) u/|u|.
struct DistanceBand {
  std::vector<double> deltas;
  std::vector<double> values;  // K(p0, z) + log(delta)/2
  double max_abs = 0.0;
};
DistanceBand radial_distance_band(const BallPoint& p0, const CVector& u, const std::vector<double>& deltas);

enum class ConditionStatus { Pass, Fail, NotApplicable };
std::string to_string(ConditionStatus s);

struct TangentialSequenceReport {
  CVector direction;             // unit vector orthogonal to e_1
  std::vector<double> image_gap;  // 1 - |F(z_n)|
  bool reaches_boundary = false;
};

struct Theorem22Options {
  std::vector<double> t_ladder = dyadic_schedule(4, 12);
  /// Number of tangential directions for condition (1).
  int directions = 16;
  /// Condition (1) and the (2a) trigger: final 1 - |F| below this.
  double tol_gap = 1e-2;
  /// Condition (2a) fails when log(1 + |Pi(dF v)|) decays in log delta faster than this.
  double bounded_slope = -0.1;
};

struct Theorem22Report {
  CVector v;
  GeodesicSlice slice;
  std::vector<double> t;
  std::vector<BallPoint> path;
  /// k(F(z_t); dF v) - k(z_t; v) against delta(z_t), exponent 1.
  RateReport deficit;
  ConditionStatus condition_2b = ConditionStatus::Fail;
  std::vector<double> image_gap;
  std::vector<double> tangential_norms;  // |Pi_{pi(F(z_t))}(dF_{z_t} v)|
  double tangential_slope = 0.0;
  ConditionStatus condition_2a = ConditionStatus::Fail;
  std::vector<TangentialSequenceReport> sequences;
  ConditionStatus condition_1 = ConditionStatus::Fail;

  /// No condition reported as Fail.
  bool all_pass() const;
};

/// Checks the boundary conditions along z_t = phi(t), phi = geodesic_slice(e_1, v):
///   (2b)  k(F(z_t); dF_{z_t} v) - k(z_t; v) = o(delta(z_t)), via fit_boundary_rate;
///   (2a)  when |F(z_t)| -> 1, |Pi_{pi(F(z_t))}(dF_{z_t} v)| stays bounded;
///   (1)   for z_n = (1 - e_n) e_1 + sqrt(e_n) u, u in a sweep of unit vectors
///         orthogonal to e_1 and e_n = 2^-k for k = 4..20, |F(z_n)| -> 1
///         (vacuous for N = 1).
/// Requires |v| = 1 and v_1 != 0.
Theorem22Report theorem_2_2_check(const BallMap& f, const CVector& v, const Theorem22Options& options = {});

/// k(z; v) / (|v_tan| / (2 delta) + |v_trans|^2 / (4 delta^2))^{1/2} with the
/// decomposition of normal_decomposition. Requires z != 0 and delta(z) < 0.2.
double aladro_ratio(const BallPoint& z, const CVector& v);
constexpr double kAladroConstant = 4.0;

/// Holomorphic disc D -> C^N with polynomial components.
struct AnalyticDisc {
  std::vector<Polynomial> components;

  int dim() const { return static_cast<int>(components.size()); }
  BallPoint operator()(Complex zeta) const;
  CVector derivative(Complex zeta) const;
};

enum class DiscVerdict { Geodesic, NotGeodesic };
std::string to_string(DiscVerdict v);

struct Prop74Report {
  double sphere_max = 0.0;
  RateReport rate;  // k(f(r); f'(r)) - 1/(1 - r^2), exponent 1
  std::vector<double> tangential_norms;
  bool tangential_bounded = false;
  double origin_isometry = 0.0;  // k(f(0); f'(0))
  DiscVerdict verdict = DiscVerdict::NotGeodesic;
};

/// GEODESIC iff the rate vanishes at exponent 1 and |k(f(0); f'(0)) - 1| <=
/// 1e-6. Throws DomainError when |f| exceeds 1 + 1e-10 on the unit circle.
Prop74Report prop_7_4_check(const AnalyticDisc& f, const std::vector<double>& r_ladder = dyadic_schedule(4, 12));

}  // namespace pmrig
