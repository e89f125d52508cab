#include "pmrig/ball.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

#include "pmrig/holomap.hpp"

namespace pmrig {

namespace {

constexpr double kSphereTol = 1e-12;
constexpr double kSelfmapTol = 1e-10;

void require_dim(const CVector& a, const CVector& b, const char* where) {
  if (a.size() != b.size() || a.size() == 0)
    throw DomainError(std::string(where) + ": dimension mismatch");
}

// 1 - |z|^2 without cancellation near the sphere.
double one_minus_norm2(const BallPoint& z) {
  const double r = z.norm();
  return (1.0 - r) * (1.0 + r);
}

void require_interior(const BallPoint& z, const char* where) {
  if (!z.allFinite() || !(z.norm() < 1.0)) throw DomainError(std::string(where) + ": point outside the ball");
}

void require_sphere(const BallPoint& p, const char* where) {
  if (std::abs(p.norm() - 1.0) > kSphereTol) throw DomainError(std::string(where) + ": |p| must be 1");
}

// Least-squares slope of y against x over the second half of the samples.
double tail_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t first = x.size() / 2;
  const double n = static_cast<double>(x.size() - first);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = first; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  return denom > 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
}

// Final gap below tol and nonincreasing over the second half.
bool gap_closes(const std::vector<double>& gap, double tol) {
  if (gap.empty() || !(gap.back() <= tol)) return false;
  for (std::size_t i = gap.size() / 2 + 1; i < gap.size(); ++i)
    if (gap[i] > gap[i - 1] * (1.0 + 1e-9)) return false;
  return true;
}

// Slope of log(1 + norm) against log delta; growth shows as a negative slope.
double boundedness_slope(const std::vector<double>& deltas, const std::vector<double>& norms) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    x.push_back(std::log(deltas[i]));
    y.push_back(std::log1p(norms[i]));
  }
  return tail_slope(x, y);
}

}  // namespace

Complex inner(const CVector& v, const CVector& w) {
  require_dim(v, w, "inner");
  return w.dot(v);  // Eigen conjugates the left operand
}

CVector basis_vector(int n, int k) {
  if (n < 1 || k < 0 || k >= n) throw DomainError("basis_vector: index out of range");
  CVector e = CVector::Zero(n);
  e(k) = 1.0;
  return e;
}

BallPoint make_point(std::initializer_list<Complex> coords) {
  BallPoint z(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (Complex c : coords) z(i++) = c;
  return z;
}

double ball_delta(const BallPoint& z) { return 1.0 - z.norm(); }

double kobayashi_metric(const BallPoint& z, const CVector& v) {
  require_interior(z, "kobayashi_metric");
  return kobayashi_metric(z, v, one_minus_norm2(z));
}

double kobayashi_metric(const BallPoint& z, const CVector& v, double d) {
  require_dim(z, v, "kobayashi_metric");
  if (!(d > 0.0 && d <= 1.0)) throw DomainError("kobayashi_metric: point outside the ball");
  return std::sqrt(d * v.squaredNorm() + std::norm(inner(v, z))) / d;
}

double kobayashi_distance(const BallPoint& z, const BallPoint& w) {
  require_dim(z, w, "kobayashi_distance");
  require_interior(z, "kobayashi_distance");
  require_interior(w, "kobayashi_distance");
  const double den = std::norm(1.0 - inner(w, z));
  // |a|^2 |b|^2 - |<a,b>|^2 as a sum of 2x2 minors (Lagrange identity).
  double minors = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i)
    for (Eigen::Index j = i + 1; j < z.size(); ++j) minors += std::norm(z(i) * w(j) - z(j) * w(i));
  const double s2 = std::max(0.0, ((z - w).squaredNorm() - minors) / den);
  const double s = std::sqrt(s2);
  const double gap = one_minus_norm2(z) * one_minus_norm2(w) / den;  // 1 - s^2
  // arctanh s = log(1 + s) - log(1 - s^2)/2.
  return std::log1p(s) - 0.5 * std::log(gap);
}

CVector tangential_projection(const BallPoint& p, const CVector& v) {
  require_dim(p, v, "tangential_projection");
  require_sphere(p, "tangential_projection");
  return v - inner(v, p) * p;
}

BallPoint boundary_projection(const BallPoint& z) {
  const double r = z.norm();
  if (!(r > 0.0)) throw DomainError("boundary_projection: undefined at the center");
  return z / r;
}

NormalDecomposition normal_decomposition(const BallPoint& z, const CVector& v) {
  require_dim(z, v, "normal_decomposition");
  const BallPoint p = boundary_projection(z);
  NormalDecomposition d;
  d.tangential = v - inner(v, p) * p;
  d.transversal = v - d.tangential;
  return d;
}

std::vector<Polynomial> GeodesicSlice::components() const {
  std::vector<Polynomial> out;
  for (Eigen::Index j = 0; j < center.size(); ++j) out.push_back(Polynomial({center(j), direction(j)}));
  return out;
}

GeodesicSlice geodesic_slice(const BallPoint& p, const CVector& v) {
  require_dim(p, v, "geodesic_slice");
  require_sphere(p, "geodesic_slice");
  const Complex a = inner(v, p);
  if (!(std::abs(a) > kSphereTol * v.norm())) throw DomainError("geodesic_slice: direction is complex tangential");
  // |p + w v| < 1 is the disc |w + conj(a)/|v|^2| < |a|/|v|^2 in the w-plane.
  const Complex c = std::conj(a) / v.squaredNorm();
  return GeodesicSlice{p, p - c * v, c * v};
}

MultiPolynomial::MultiPolynomial(int n, std::vector<Monomial> terms) : n_(n) {
  if (n < 1) throw DomainError("MultiPolynomial: dimension must be positive");
  for (auto& t : terms) {
    if (static_cast<int>(t.powers.size()) != n)
      throw DomainError("MultiPolynomial: monomial has " + std::to_string(t.powers.size()) + " exponents, expected " +
                        std::to_string(n));
    for (int e : t.powers)
      if (e < 0) throw DomainError("MultiPolynomial: negative exponent");
    if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag()))
      throw DomainError("MultiPolynomial: non-finite coefficient");
    if (t.coeff != 0.0) terms_.push_back(std::move(t));
  }
}

Complex MultiPolynomial::operator()(const CVector& z) const {
  if (z.size() != n_) throw DomainError("MultiPolynomial: dimension mismatch");
  Complex sum = 0.0;
  for (const auto& t : terms_) {
    Complex m = t.coeff;
    for (int j = 0; j < n_; ++j)
      for (int e = 0; e < t.powers[j]; ++e) m *= z(j);
    sum += m;
  }
  return sum;
}

MultiPolynomial MultiPolynomial::partial(int k) const {
  if (k < 0 || k >= n_) throw DomainError("MultiPolynomial::partial: index out of range");
  std::vector<Monomial> out;
  for (const auto& t : terms_) {
    if (t.powers[k] == 0) continue;
    Monomial d = t;
    d.coeff *= static_cast<double>(t.powers[k]);
    --d.powers[k];
    out.push_back(std::move(d));
  }
  return MultiPolynomial(n_, std::move(out));
}

std::vector<BallPoint> sphere_sample(int n, int count, std::uint64_t seed) {
  if (n < 1 || count < n) throw DomainError("sphere_sample: need count >= n >= 1");
  std::vector<BallPoint> out;
  for (int k = 0; k < n; ++k) out.push_back(basis_vector(n, k));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  while (static_cast<int>(out.size()) < count) {
    BallPoint z(n);
    for (int j = 0; j < n; ++j) z(j) = Complex(g(rng), g(rng));
    const double r = z.norm();
    if (r > 1e-8) out.push_back(z / r);
  }
  return out;
}

std::vector<BallPoint> ball_sample(int n, int count, double radius, std::uint64_t seed) {
  if (!(radius > 0.0 && radius < 1.0)) throw DomainError("ball_sample: radius must lie in (0, 1)");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<BallPoint> out;
  while (static_cast<int>(out.size()) < count) {
    BallPoint z(n);
    for (int j = 0; j < n; ++j) z(j) = Complex(g(rng), g(rng));
    const double r = z.norm();
    if (r < 1e-8) continue;
    out.push_back(z * (radius * std::pow(u(rng), 0.5 / n) / r));
  }
  return out;
}

CMatrix random_unitary(int n, std::uint64_t seed) {
  if (n < 1) throw DomainError("random_unitary: dimension must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<CMatrix> qr(m);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

struct BallMap::Node {
  Kind kind;
  int n = 0;
  double sphere_max = 0.0;
  std::vector<MultiPolynomial> components;
  std::vector<std::vector<MultiPolynomial>> partials;  // partials[i][k] = d F_i / d z_k
  BallPoint a;
  CMatrix unitary;  // empty when absent
  std::shared_ptr<const Node> outer, inner;
};

namespace {

BallPoint raw_value(const BallMap::Node& node, const BallPoint& z);

BallPoint poly_value(const BallMap::Node& node, const BallPoint& z) {
  BallPoint out(node.n);
  for (int i = 0; i < node.n; ++i) out(i) = node.components[i](z);
  return out;
}

// phi_a(z) = (a - A z)/(1 - <z,a>) with A z = s z + <z,a> a/(1 + s).
BallPoint aut_value(const BallMap::Node& node, const BallPoint& z) {
  const double s = std::sqrt(1.0 - node.a.squaredNorm());
  const Complex za = inner(z, node.a);
  BallPoint w = (node.a - s * z - (za / (1.0 + s)) * node.a) / (1.0 - za);
  if (node.unitary.size() > 0) w = node.unitary * w;
  return w;
}

CMatrix aut_jacobian(const BallMap::Node& node, const BallPoint& z) {
  const double s = std::sqrt(1.0 - node.a.squaredNorm());
  const Complex za = inner(z, node.a);
  const Complex d = 1.0 - za;
  const BallPoint num = node.a - s * z - (za / (1.0 + s)) * node.a;
  // d(num/d)(v) = -A v / d + num <v,a> / d^2 with <v,a> = a^* v.
  const CMatrix A = s * CMatrix::Identity(node.n, node.n) + (node.a * node.a.adjoint()) / (1.0 + s);
  CMatrix j = -A / d + (num * node.a.adjoint()) / (d * d);
  if (node.unitary.size() > 0) j = node.unitary * j;
  return j;
}

BallPoint raw_value(const BallMap::Node& node, const BallPoint& z) {
  switch (node.kind) {
    case BallMap::Kind::Polynomial:
      return poly_value(node, z);
    case BallMap::Kind::Automorphism:
      return aut_value(node, z);
    case BallMap::Kind::Compose:
      return raw_value(*node.outer, raw_value(*node.inner, z));
  }
  throw Error("BallMap: unknown kind");
}

CMatrix raw_jacobian(const BallMap::Node& node, const BallPoint& z) {
  switch (node.kind) {
    case BallMap::Kind::Polynomial: {
      CMatrix j(node.n, node.n);
      for (int i = 0; i < node.n; ++i)
        for (int k = 0; k < node.n; ++k) j(i, k) = node.partials[i][k](z);
      return j;
    }
    case BallMap::Kind::Automorphism:
      return aut_jacobian(node, z);
    case BallMap::Kind::Compose:
      return raw_jacobian(*node.outer, raw_value(*node.inner, z)) * raw_jacobian(*node.inner, z);
  }
  throw Error("BallMap: unknown kind");
}

// 1 - |F(z)|^2; automorphisms use (1-|a|^2)(1-|z|^2)/|1-<z,a>|^2.
double raw_gap(const BallMap::Node& node, const BallPoint& z) {
  switch (node.kind) {
    case BallMap::Kind::Polynomial:
      return one_minus_norm2(poly_value(node, z));
    case BallMap::Kind::Automorphism:
      return one_minus_norm2(node.a) * one_minus_norm2(z) / std::norm(1.0 - inner(z, node.a));
    case BallMap::Kind::Compose: {
      const BallPoint w = raw_value(*node.inner, z);
      if (node.outer->kind != BallMap::Kind::Automorphism) return one_minus_norm2(raw_value(*node.outer, w));
      return one_minus_norm2(node.outer->a) * raw_gap(*node.inner, z) / std::norm(1.0 - inner(w, node.outer->a));
    }
  }
  throw Error("BallMap: unknown kind");
}

}  // namespace

BallMap BallMap::identity(int n) {
  std::vector<MultiPolynomial> comps;
  for (int i = 0; i < n; ++i) {
    std::vector<int> e(n, 0);
    e[i] = 1;
    comps.emplace_back(n, std::vector<Monomial>{{1.0, e}});
  }
  return polynomial(n, std::move(comps));
}

BallMap BallMap::polynomial(int n, std::vector<MultiPolynomial> components) {
  if (n < 1 || static_cast<int>(components.size()) != n)
    throw DomainError("BallMap::polynomial: need exactly n components");
  for (const auto& c : components)
    if (c.dim() != n) throw DomainError("BallMap::polynomial: component dimension mismatch");
  auto node = std::make_shared<Node>();
  node->kind = Kind::Polynomial;
  node->n = n;
  node->components = std::move(components);
  for (const auto& c : node->components) {
    std::vector<MultiPolynomial> row;
    for (int k = 0; k < n; ++k) row.push_back(c.partial(k));
    node->partials.push_back(std::move(row));
  }
  for (const auto& p : sphere_sample(n, kSphereSamples))
    node->sphere_max = std::max(node->sphere_max, poly_value(*node, p).norm());
  if (node->sphere_max > 1.0 + kSelfmapTol)
    throw DomainError("BallMap::polynomial: not a self-map of the ball (|F| = " + std::to_string(node->sphere_max) +
                      " on the sphere)");
  return BallMap(node);
}

BallMap BallMap::automorphism(const BallPoint& a, const CMatrix& unitary) {
  if (a.size() < 1) throw DomainError("BallMap::automorphism: empty point");
  require_interior(a, "BallMap::automorphism");
  const int n = static_cast<int>(a.size());
  if (unitary.size() > 0) {
    if (unitary.rows() != n || unitary.cols() != n)
      throw DomainError("BallMap::automorphism: unitary factor has the wrong shape");
    if ((unitary.adjoint() * unitary - CMatrix::Identity(n, n)).norm() > 1e-10)
      throw DomainError("BallMap::automorphism: factor is not unitary");
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::Automorphism;
  node->n = n;
  node->sphere_max = 1.0;
  node->a = a;
  node->unitary = unitary;
  return BallMap(node);
}

BallMap BallMap::compose(const BallMap& outer, const BallMap& inner) {
  if (outer.dim() != inner.dim()) throw DomainError("BallMap::compose: dimension mismatch");
  auto node = std::make_shared<Node>();
  node->kind = Kind::Compose;
  node->n = outer.dim();
  node->sphere_max = std::max(outer.sphere_max(), inner.sphere_max());
  node->outer = outer.node_;
  node->inner = inner.node_;
  return BallMap(node);
}

int BallMap::dim() const { return node_->n; }
BallMap::Kind BallMap::kind() const { return node_->kind; }
double BallMap::sphere_max() const { return node_->sphere_max; }

BallPoint BallMap::operator()(const BallPoint& z) const {
  if (z.size() != dim()) throw DomainError("BallMap: dimension mismatch");
  require_interior(z, "BallMap");
  BallPoint w = raw_value(*node_, z);
  if (!w.allFinite() || !(w.norm() < 1.0)) throw DomainError("BallMap: image escapes the ball");
  return w;
}

CMatrix BallMap::jacobian(const BallPoint& z) const {
  if (z.size() != dim()) throw DomainError("BallMap::jacobian: dimension mismatch");
  require_interior(z, "BallMap::jacobian");
  return raw_jacobian(*node_, z);
}

double BallMap::image_gap(const BallPoint& z) const {
  (*this)(z);  // validates z and the image
  return raw_gap(*node_, z);
}

double BallMap::push_metric(const BallPoint& z, const CVector& v) const {
  return kobayashi_metric((*this)(z), push(z, v), image_gap(z));
}

// ---------------------------------------------------------------------------
// Text form.

namespace {

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::string_view next() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ >= s_.size()) return {};
    if (s_[pos_] == '(' || s_[pos_] == ')') return s_.substr(pos_++, 1);
    const std::size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '(' &&
           s_[pos_] != ')')
      ++pos_;
    return s_.substr(start, pos_ - start);
  }
  std::string_view peek() {
    const std::size_t save = pos_;
    const auto t = next();
    pos_ = save;
    return t;
  }
  void expect(std::string_view t) {
    const auto got = next();
    if (got != t) throw DomainError("parse_ballmap: expected '" + std::string(t) + "', got '" + std::string(got) + "'");
  }
  bool done() {
    return peek().empty();
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

int parse_int(std::string_view t) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw DomainError("parse_ballmap: malformed integer '" + std::string(t) + "'");
  return v;
}

BallMap parse_map(Lexer& lx) {
  lx.expect("(");
  const std::string head(lx.next());
  if (head == "ball-poly") {
    const int n = parse_int(lx.next());
    if (n < 1 || n > 64) throw DomainError("parse_ballmap: dimension out of range");
    std::vector<MultiPolynomial> comps;
    while (lx.peek() == "(") {
      lx.next();
      std::vector<Monomial> terms;
      while (lx.peek() == "(") {
        lx.next();
        Monomial m{parse_complex(lx.next()), {}};
        for (int j = 0; j < n; ++j) m.powers.push_back(parse_int(lx.next()));
        lx.expect(")");
        terms.push_back(std::move(m));
      }
      lx.expect(")");
      comps.emplace_back(n, std::move(terms));
    }
    lx.expect(")");
    return BallMap::polynomial(n, std::move(comps));
  }
  if (head == "ball-aut") {
    std::vector<Complex> coords;
    while (lx.peek() != ")" && !lx.peek().empty()) coords.push_back(parse_complex(lx.next()));
    lx.expect(")");
    BallPoint a(static_cast<Eigen::Index>(coords.size()));
    for (std::size_t i = 0; i < coords.size(); ++i) a(static_cast<Eigen::Index>(i)) = coords[i];
    return BallMap::automorphism(a);
  }
  if (head == "ball-compose") {
    BallMap outer = parse_map(lx);
    BallMap inner = parse_map(lx);
    lx.expect(")");
    return BallMap::compose(outer, inner);
  }
  throw DomainError("parse_ballmap: unknown head '" + head + "'");
}

void write_node(std::ostringstream& os, const BallMap::Node& node) {
  switch (node.kind) {
    case BallMap::Kind::Polynomial:
      os << "(ball-poly " << node.n;
      for (const auto& c : node.components) {
        os << " (";
        bool first = true;
        for (const auto& t : c.terms()) {
          os << (first ? "(" : " (") << format_complex(t.coeff);
          for (int e : t.powers) os << ' ' << e;
          os << ')';
          first = false;
        }
        os << ')';
      }
      os << ')';
      return;
    case BallMap::Kind::Automorphism:
      if (node.unitary.size() > 0) throw DomainError("to_text: unitary factors have no text form");
      os << "(ball-aut";
      for (Eigen::Index j = 0; j < node.a.size(); ++j) os << ' ' << format_complex(node.a(j));
      os << ')';
      return;
    case BallMap::Kind::Compose:
      os << "(ball-compose ";
      write_node(os, *node.outer);
      os << ' ';
      write_node(os, *node.inner);
      os << ')';
      return;
  }
}

}  // namespace

BallMap parse_ballmap(std::string_view text) {
  Lexer lx(text);
  BallMap f = parse_map(lx);
  if (!lx.done()) throw DomainError("parse_ballmap: trailing input");
  return f;
}

std::string to_text(const BallMap& f) {
  std::ostringstream os;
  write_node(os, *f.node_);
  return os.str();
}

// ---------------------------------------------------------------------------
// Checkers.

DistanceBand radial_distance_band(const BallPoint& p0, const CVector& u, const std::vector<double>& deltas) {
  require_dim(p0, u, "radial_distance_band");
  const double nu = u.norm();
  if (!(nu > 0.0)) throw DomainError("radial_distance_band: zero direction");
  DistanceBand band;
  for (double d : deltas) {
    if (!(d > 0.0 && d <= 1.0)) throw DomainError("radial_distance_band: delta must lie in (0, 1]");
    const BallPoint z = ((1.0 - d) / nu) * u;
    const double value = kobayashi_distance(p0, z) + 0.5 * std::log(d);
    band.deltas.push_back(d);
    band.values.push_back(value);
    band.max_abs = std::max(band.max_abs, std::abs(value));
  }
  return band;
}

std::string to_string(ConditionStatus s) {
  switch (s) {
    case ConditionStatus::Pass:
      return "PASS";
    case ConditionStatus::Fail:
      return "FAIL";
    case ConditionStatus::NotApplicable:
      return "NOT_APPLICABLE";
  }
  return "?";
}

bool Theorem22Report::all_pass() const {
  return condition_1 != ConditionStatus::Fail && condition_2a != ConditionStatus::Fail &&
         condition_2b != ConditionStatus::Fail;
}

Theorem22Report theorem_2_2_check(const BallMap& f, const CVector& v, const Theorem22Options& options) {
  const int n = f.dim();
  if (v.size() != n) throw DomainError("theorem_2_2_check: direction has the wrong dimension");
  if (std::abs(v.norm() - 1.0) > 1e-12) throw DomainError("theorem_2_2_check: |v| must be 1");
  if (!(std::abs(v(0)) > 1e-12)) throw DomainError("theorem_2_2_check: v is complex tangential at e_1");
  if (options.t_ladder.size() < 5) throw DomainError("theorem_2_2_check: need at least 5 ladder points");
  if (options.directions < 1) throw DomainError("theorem_2_2_check: need at least one direction");

  Theorem22Report rep;
  rep.v = v;
  rep.slice = geodesic_slice(basis_vector(n, 0), v);

  std::vector<RateSample> samples;
  std::vector<double> deltas;
  for (double t : options.t_ladder) {
    if (!(t > 0.0 && t < 1.0)) throw DomainError("theorem_2_2_check: ladder must lie in (0, 1)");
    const BallPoint z = rep.slice(t);
    const BallPoint w = f(z);
    const CVector dv = f.push(z, v);
    rep.t.push_back(t);
    rep.path.push_back(z);
    const double gap = f.image_gap(z);
    samples.push_back({z.norm(), kobayashi_metric(w, dv, gap) - kobayashi_metric(z, v)});
    deltas.push_back(ball_delta(z));
    rep.image_gap.push_back(gap / (1.0 + w.norm()));
    rep.tangential_norms.push_back(w.norm() > 0.0 ? tangential_projection(boundary_projection(w), dv).norm() : 0.0);
  }
  rep.deficit = fit_boundary_rate(samples, 1.0);
  rep.condition_2b = rep.deficit.verdict == RateVerdict::Vanishes ? ConditionStatus::Pass : ConditionStatus::Fail;

  rep.tangential_slope = boundedness_slope(deltas, rep.tangential_norms);
  if (!gap_closes(rep.image_gap, options.tol_gap))
    rep.condition_2a = ConditionStatus::NotApplicable;
  else
    rep.condition_2a = rep.tangential_slope >= options.bounded_slope ? ConditionStatus::Pass : ConditionStatus::Fail;

  if (n == 1) {
    rep.condition_1 = ConditionStatus::NotApplicable;
    return rep;
  }
  bool all = true;
  for (int j = 0; j < options.directions; ++j) {
    const double theta = 2.0 * kPi * j / options.directions;
    CVector u = CVector::Zero(n);
    if (n == 2) {
      u(1) = std::polar(1.0, theta);
    } else {
      u(1) = std::polar(std::cos(theta), theta);
      u(2) = std::polar(std::sin(theta), theta);
    }
    TangentialSequenceReport seq;
    seq.direction = u;
    for (int k = 4; k <= 20; ++k) {
      const double e = std::ldexp(1.0, -k);
      const BallPoint z = (1.0 - e) * basis_vector(n, 0) + std::sqrt(e) * u;
      seq.image_gap.push_back(f.image_gap(z) / (1.0 + f(z).norm()));
    }
    seq.reaches_boundary = gap_closes(seq.image_gap, options.tol_gap);
    all = all && seq.reaches_boundary;
    rep.sequences.push_back(std::move(seq));
  }
  rep.condition_1 = all ? ConditionStatus::Pass : ConditionStatus::Fail;
  return rep;
}

double aladro_ratio(const BallPoint& z, const CVector& v) {
  require_dim(z, v, "aladro_ratio");
  require_interior(z, "aladro_ratio");
  const double d = ball_delta(z);
  if (!(d < 0.2)) throw DomainError("aladro_ratio: point too far from the sphere (delta >= 0.2)");
  const auto dec = normal_decomposition(z, v);
  const double model = dec.tangential.norm() / (2.0 * d) + dec.transversal.squaredNorm() / (4.0 * d * d);
  if (!(model > 0.0)) throw DomainError("aladro_ratio: zero vector");
  return kobayashi_metric(z, v) / std::sqrt(model);
}

BallPoint AnalyticDisc::operator()(Complex zeta) const {
  BallPoint z(dim());
  for (int j = 0; j < dim(); ++j) z(j) = components[j](zeta);
  return z;
}

CVector AnalyticDisc::derivative(Complex zeta) const {
  CVector z(dim());
  for (int j = 0; j < dim(); ++j) z(j) = components[j].derivative()(zeta);
  return z;
}

std::string to_string(DiscVerdict v) { return v == DiscVerdict::Geodesic ? "GEODESIC" : "NOT_GEODESIC"; }

Prop74Report prop_7_4_check(const AnalyticDisc& f, const std::vector<double>& r_ladder) {
  if (f.dim() < 1) throw DomainError("prop_7_4_check: disc has no components");
  Prop74Report rep;
  constexpr int kCircle = 1024;
  for (int k = 0; k < kCircle; ++k) rep.sphere_max = std::max(rep.sphere_max, f(std::polar(1.0, 2.0 * kPi * k / kCircle)).norm());
  if (rep.sphere_max > 1.0 + kSelfmapTol) throw DomainError("prop_7_4_check: image escapes the ball");

  std::vector<RateSample> samples;
  std::vector<double> gaps;
  for (double r : r_ladder) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("prop_7_4_check: ladder must lie in (0, 1)");
    const BallPoint z = f(r);
    const CVector dz = f.derivative(r);
    samples.push_back({r, kobayashi_metric(z, dz) - 1.0 / ((1.0 - r) * (1.0 + r))});
    gaps.push_back(1.0 - r);
    rep.tangential_norms.push_back(z.norm() > 0.0 ? tangential_projection(boundary_projection(z), dz).norm() : 0.0);
  }
  rep.rate = fit_boundary_rate(samples, 1.0);
  rep.tangential_bounded = boundedness_slope(gaps, rep.tangential_norms) >= -0.1;
  rep.origin_isometry = kobayashi_metric(f(0.0), f.derivative(0.0));
  rep.verdict = rep.rate.verdict == RateVerdict::Vanishes && std::abs(rep.origin_isometry - 1.0) <= 1e-6
                    ? DiscVerdict::Geodesic
                    : DiscVerdict::NotGeodesic;
  return rep;
}

}  // namespace pmrig
