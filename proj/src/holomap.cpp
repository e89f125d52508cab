#include <algorithm>
#include <cmath>
#include <sstream>

#include "pmrig/holomap.hpp"

namespace pmrig {

struct HoloMap::Node {
  explicit Node(Kind k) : kind(k) {}
  Kind kind;
  Complex scalar{0.0, 0.0};
  int exponent = 0;
  double angle = 0.0;
  std::vector<Complex> list;
  std::vector<HoloMap> children;
};

namespace {

Jet jet_of(const HoloMap& f, Complex z);

Complex checked_div(Complex num, Complex den) {
  if (den == Complex(0.0, 0.0)) throw DomainError("HoloMap: pole of an automorphism factor");
  return num / den;
}

}  // namespace

HoloMap HoloMap::identity() { return HoloMap(std::make_shared<Node>(Kind::Identity)); }

HoloMap HoloMap::constant(Complex c) {
  Node n{Kind::Constant};
  n.scalar = c;
  return HoloMap(std::make_shared<Node>(std::move(n)));
}

HoloMap HoloMap::monomial(int k) {
  if (k < 0) throw DomainError("HoloMap::monomial: negative exponent");
  Node n{Kind::Monomial};
  n.exponent = k;
  return HoloMap(std::make_shared<Node>(std::move(n)));
}

HoloMap HoloMap::polynomial(std::vector<Complex> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  Node n{Kind::Polynomial};
  n.list = std::move(coeffs);
  return HoloMap(std::make_shared<Node>(std::move(n)));
}

HoloMap HoloMap::automorphism(Complex a, double theta) {
  if (!(std::abs(a) < 1.0)) throw DomainError("HoloMap::automorphism: |a| must be < 1");
  Node n{Kind::Automorphism};
  n.scalar = a;
  n.angle = theta;
  return HoloMap(std::make_shared<Node>(std::move(n)));
}

HoloMap HoloMap::blaschke(std::vector<Complex> zeros, double theta) {
  for (const auto& a : zeros)
    if (!(std::abs(a) < 1.0)) throw DomainError("HoloMap::blaschke: zeros must lie in the open disk");
  Node n{Kind::Blaschke};
  n.list = std::move(zeros);
  n.angle = theta;
  return HoloMap(std::make_shared<Node>(std::move(n)));
}

HoloMap HoloMap::compose(const HoloMap& outer, const HoloMap& inner) {
  Node n{Kind::Compose};
  n.children = {outer, inner};
  return HoloMap(std::make_shared<Node>(std::move(n)));
}

HoloMap HoloMap::sum(const HoloMap& f, const HoloMap& g) {
  Node n{Kind::Sum};
  n.children = {f, g};
  return HoloMap(std::make_shared<Node>(std::move(n)));
}

HoloMap HoloMap::scale(Complex c, const HoloMap& f) {
  Node n{Kind::Scale};
  n.scalar = c;
  n.children = {f};
  return HoloMap(std::make_shared<Node>(std::move(n)));
}

HoloMap::Kind HoloMap::kind() const { return node_->kind; }
Complex HoloMap::scalar() const { return node_->scalar; }
int HoloMap::exponent() const { return node_->exponent; }
double HoloMap::angle() const { return node_->angle; }
const std::vector<Complex>& HoloMap::list() const { return node_->list; }

const HoloMap& HoloMap::left() const {
  if (node_->children.empty()) throw Error("HoloMap: node has no children");
  return node_->children[0];
}

const HoloMap& HoloMap::right() const {
  if (node_->children.size() < 2) throw Error("HoloMap: node has no second child");
  return node_->children[1];
}

namespace {

Jet jet_of(const HoloMap& f, Complex z) {
  using K = HoloMap::Kind;
  switch (f.kind()) {
    case K::Identity: return {z, 1.0};
    case K::Constant: return {f.scalar(), 0.0};
    case K::Monomial: {
      const int k = f.exponent();
      if (k == 0) return {1.0, 0.0};
      Complex zk1 = 1.0;
      for (int i = 0; i < k - 1; ++i) zk1 *= z;
      return {zk1 * z, static_cast<double>(k) * zk1};
    }
    case K::Polynomial: {
      Complex v = 0.0, d = 0.0;
      const auto& c = f.list();
      for (auto it = c.rbegin(); it != c.rend(); ++it) {
        d = d * z + v;
        v = v * z + *it;
      }
      return {v, d};
    }
    case K::Automorphism: {
      const Complex a = f.scalar();
      const Complex rot = std::polar(1.0, f.angle());
      const Complex den = 1.0 - std::conj(a) * z;
      const Complex value = rot * checked_div(a - z, den);
      const Complex deriv = rot * checked_div(std::norm(a) - 1.0, den * den);
      return {value, deriv};
    }
    case K::Blaschke: {
      Complex v = std::polar(1.0, f.angle());
      Complex d = 0.0;
      for (const Complex& a : f.list()) {
        const Complex den = 1.0 - std::conj(a) * z;
        const Complex b = checked_div(z - a, den);
        const Complex db = checked_div(1.0 - std::norm(a), den * den);
        d = d * b + v * db;
        v = v * b;
      }
      return {v, d};
    }
    case K::Compose: {
      const Jet inner = jet_of(f.right(), z);
      const Jet outer = jet_of(f.left(), inner.value);
      return {outer.value, outer.derivative * inner.derivative};
    }
    case K::Sum: {
      const Jet a = jet_of(f.left(), z);
      const Jet b = jet_of(f.right(), z);
      return {a.value + b.value, a.derivative + b.derivative};
    }
    case K::Scale: {
      const Jet a = jet_of(f.left(), z);
      return {f.scalar() * a.value, f.scalar() * a.derivative};
    }
  }
  throw Error("HoloMap: unknown node kind");
}

}  // namespace

Jet HoloMap::jet(Complex z) const {
  if (std::abs(z) > 1.0 + 1e-12) throw DomainError("HoloMap: evaluation point outside the closed unit disk");
  return jet_of(*this, z);
}

Rational HoloMap::as_rational() const {
  using K = Kind;
  const Polynomial one = Polynomial::constant(1.0);
  switch (kind()) {
    case K::Identity: return {Polynomial({0.0, 1.0}), one};
    case K::Constant: return {Polynomial::constant(scalar()), one};
    case K::Monomial: return {Polynomial::monomial(exponent()), one};
    case K::Polynomial: return {Polynomial(list()), one};
    case K::Automorphism: {
      const Complex rot = std::polar(1.0, angle());
      return {Polynomial({rot * scalar(), -rot}), Polynomial({1.0, -std::conj(scalar())})};
    }
    case K::Blaschke: {
      Polynomial num = Polynomial::constant(std::polar(1.0, angle()));
      Polynomial den = one;
      for (const Complex& a : list()) {
        num = num * Polynomial({-a, 1.0});
        den = den * Polynomial({1.0, -std::conj(a)});
      }
      return {num, den};
    }
    case K::Compose: return Rational::compose(left().as_rational(), right().as_rational());
    case K::Sum: {
      const Rational a = left().as_rational();
      const Rational b = right().as_rational();
      return {a.num * b.den + b.num * a.den, a.den * b.den};
    }
    case K::Scale: {
      const Rational a = left().as_rational();
      return {scalar() * a.num, a.den};
    }
  }
  throw Error("HoloMap: unknown node kind");
}

bool HoloMap::is_constant() const {
  const Rational r = as_rational();
  const Polynomial d = r.derivative_numerator();
  double scale = 0.0;
  for (const auto& c : r.num.coeffs()) scale = std::max(scale, std::abs(c));
  for (const auto& c : r.den.coeffs()) scale = std::max(scale, std::abs(c));
  for (const auto& c : d.coeffs())
    if (std::abs(c) > 1e-13 * std::max(1.0, scale * scale)) return false;
  return true;
}

namespace {

std::vector<RootCluster> inside_disk(std::vector<RootCluster> clusters) {
  std::vector<RootCluster> out;
  for (const auto& c : clusters)
    if (std::abs(c.location) < 1.0 - 1e-12) out.push_back(c);
  std::sort(out.begin(), out.end(), [](const RootCluster& a, const RootCluster& b) {
    if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
    return a.location.imag() < b.location.imag();
  });
  return out;
}

}  // namespace

std::vector<RootCluster> HoloMap::critical_points() const {
  return inside_disk(clustered_roots(as_rational().derivative_numerator()));
}

std::vector<RootCluster> HoloMap::preimages(Complex w) const {
  const Rational r = as_rational();
  return inside_disk(clustered_roots(r.num - w * r.den));
}

Complex eval(const HoloMap& f, Complex z) { return f.jet(z).value; }
Complex derivative(const HoloMap& f, Complex z) { return f.jet(z).derivative; }

SelfmapCertificate certify_selfmap(const HoloMap& f, int n_boundary) {
  if (n_boundary < 64) throw DomainError("certify_selfmap: need at least 64 boundary samples");
  SelfmapCertificate cert;
  for (int j = 0; j < n_boundary; ++j) {
    const Complex z = std::polar(1.0, 2.0 * kPi * j / n_boundary);
    cert.max_modulus = std::max(cert.max_modulus, std::abs(f.jet(z).value));
  }
  cert.certified = cert.max_modulus <= 1.0 + 1e-12;
  return cert;
}

double hyperbolic_derivative(const HoloMap& f, Complex z) {
  if (!(std::abs(z) < 1.0)) throw DomainError("hyperbolic_derivative: |z| must be < 1");
  const Jet j = f.jet(z);
  const double denom = 1.0 - std::norm(j.value);
  if (!(denom > 0.0)) {
    std::ostringstream os;
    os << "hyperbolic_derivative: |f(z)| >= 1 at interior point z = " << format_complex(z)
       << " (not a self-map)";
    throw DomainError(os.str());
  }
  return (1.0 - std::norm(z)) * std::abs(j.derivative) / denom;
}

namespace maps {

HoloMap f_epsilon(double eps) {
  // z - eps (z - 1)^3 = eps + (1 - 3 eps) z + 3 eps z^2 - eps z^3
  return HoloMap::polynomial({eps, 1.0 - 3.0 * eps, 3.0 * eps, -eps});
}

HoloMap power(int k) { return HoloMap::monomial(k); }

}  // namespace maps

}  // namespace pmrig
