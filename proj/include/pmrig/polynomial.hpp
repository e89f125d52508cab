#pragma once

#include <vector>

#include "pmrig/numerics.hpp"

namespace pmrig {

/// Dense univariate polynomial with complex coefficients, lowest degree first.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Complex> coeffs);

  static Polynomial constant(Complex c) { return Polynomial({c}); }
  static Polynomial monomial(int k, Complex c = 1.0);

  const std::vector<Complex>& coeffs() const { return coeffs_; }
  /// Degree after trimming exact zeros; the zero polynomial has degree -1.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }

  Complex operator()(Complex z) const;
  Polynomial derivative() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Complex s, const Polynomial& p);

 private:
  void trim();
  std::vector<Complex> coeffs_;
};

struct RootCluster {
  Complex location;
  int multiplicity;
};

/// All complex roots (Aberth-Ehrlich iteration), unordered.
std::vector<Complex> polynomial_roots(const Polynomial& p);

/// Roots grouped into clusters of (numerically) repeated roots. Exact roots at
/// the origin (vanishing low-order coefficients) are counted exactly.
std::vector<RootCluster> clustered_roots(const Polynomial& p, double cluster_tol = 1e-5);

/// Rational function num/den.
struct Rational {
  Polynomial num;
  Polynomial den;

  Complex operator()(Complex z) const { return num(z) / den(z); }
  /// Numerator of the derivative: num' den - num den'.
  Polynomial derivative_numerator() const;
  /// f(g(z)) as a rational function.
  static Rational compose(const Rational& f, const Rational& g);
};

}  // namespace pmrig
