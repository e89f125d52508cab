#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "pmrig/numerics.hpp"
#include "pmrig/polynomial.hpp"

namespace pmrig {

/// Value and first derivative of a holomorphic function at a point.
struct Jet {
  Complex value;
  Complex derivative;
};

/// Holomorphic map of the closed unit disk given as an immutable expression
/// tree. Evaluation carries the derivative along the tree (chain, product and
/// quotient rules), so derivatives are exact up to rounding.
///
/// Conventions:
///   automorphism(a, theta)  z -> e^{i theta} (a - z) / (1 - conj(a) z)
///   blaschke(zeros, theta)  z -> e^{i theta} prod_k (z - a_k) / (1 - conj(a_k) z)
///   compose(f, g)           z -> f(g(z))
class HoloMap {
 public:
  enum class Kind { Identity, Constant, Monomial, Polynomial, Automorphism, Blaschke, Compose, Sum, Scale };

  static HoloMap identity();
  static HoloMap constant(Complex c);
  static HoloMap monomial(int k);
  static HoloMap polynomial(std::vector<Complex> coeffs);
  static HoloMap automorphism(Complex a, double theta = 0.0);
  static HoloMap blaschke(std::vector<Complex> zeros, double theta = 0.0);
  static HoloMap compose(const HoloMap& outer, const HoloMap& inner);
  static HoloMap sum(const HoloMap& f, const HoloMap& g);
  static HoloMap scale(Complex c, const HoloMap& f);

  Kind kind() const;
  /// Scalar payload: constant value / scale factor / automorphism point.
  Complex scalar() const;
  /// Exponent of a monomial.
  int exponent() const;
  /// Rotation angle of an automorphism or Blaschke product.
  double angle() const;
  /// Coefficients of a polynomial or zeros of a Blaschke product.
  const std::vector<Complex>& list() const;
  /// Children of compose/sum (two) and scale (one).
  const HoloMap& left() const;
  const HoloMap& right() const;

  /// Value and derivative at z. Requires |z| <= 1 (up to 1e-12).
  Jet jet(Complex z) const;
  Complex operator()(Complex z) const { return jet(z).value; }

  /// Exact rational form num/den of the tree.
  Rational as_rational() const;
  bool is_constant() const;
  /// Zeros of f' in the open unit disk with multiplicities.
  std::vector<RootCluster> critical_points() const;
  /// Solutions of f(z) = w in the open unit disk with multiplicities.
  std::vector<RootCluster> preimages(Complex w) const;

 private:
  struct Node;
  explicit HoloMap(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Complex eval(const HoloMap& f, Complex z);
Complex derivative(const HoloMap& f, Complex z);

struct SelfmapCertificate {
  bool certified = false;
  double max_modulus = 0.0;
};

constexpr int kDefaultBoundarySamples = 4096;

/// Samples |f| at n_boundary equispaced points of the unit circle (theta = 0
/// included); certified iff the maximum is <= 1 + 1e-12.
SelfmapCertificate certify_selfmap(const HoloMap& f, int n_boundary = kDefaultBoundarySamples);

/// (1 - |z|^2) |f'(z)| / (1 - |f(z)|^2) for |z| < 1.
double hyperbolic_derivative(const HoloMap& f, Complex z);

/// Prefix (s-expression) text form; see parse_holomap for the grammar.
std::string to_text(const HoloMap& f);

/// Parses the s-expression grammar
///
///   map     := "(id)" | "(const" c ")" | "(mono" k ")" | "(poly" c0 c1 ... ")"
///            | "(aut" a theta ")" | "(blaschke" theta a1 ... ")"
///            | "(compose" map map ")" | "(sum" map map ")" | "(scale" c map ")"
///            | "(feps" eps ")"
///   c       := real | real"i" | real("+"|"-")real"i"
///
/// `(feps e)` is shorthand for the cubic z - e (z - 1)^3 and is stored as a
/// polynomial.
HoloMap parse_holomap(std::string_view text);

/// Parses one complex literal of the form accepted by parse_holomap.
Complex parse_complex(std::string_view token);
std::string format_complex(Complex c);

namespace maps {
/// z -> z - eps (z - 1)^3.
HoloMap f_epsilon(double eps);
/// z -> z^k.
HoloMap power(int k);
}  // namespace maps

}  // namespace pmrig
