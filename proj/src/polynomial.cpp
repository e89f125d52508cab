#include "pmrig/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace pmrig {

Polynomial::Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::monomial(int k, Complex c) {
  std::vector<Complex> v(static_cast<std::size_t>(k) + 1, 0.0);
  v[k] = c;
  return Polynomial(std::move(v));
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == Complex(0.0, 0.0)) coeffs_.pop_back();
}

Complex Polynomial::operator()(Complex z) const {
  Complex acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial();
  std::vector<Complex> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Complex> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + Complex(-1.0) * b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial();
  std::vector<Complex> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(c));
}

Polynomial operator*(Complex s, const Polynomial& p) {
  std::vector<Complex> c = p.coeffs_;
  for (auto& x : c) x *= s;
  return Polynomial(std::move(c));
}

std::vector<Complex> polynomial_roots(const Polynomial& p) {
  const int n = p.degree();
  if (n < 1) return {};
  const auto& a = p.coeffs();
  const Polynomial dp = p.derivative();

  // Initial guesses on a circle of Cauchy-bound radius.
  double bound = 0.0;
  for (int k = 0; k < n; ++k) bound = std::max(bound, std::abs(a[k] / a[n]));
  const double radius = std::min(1.0 + bound, 1e6);
  std::vector<Complex> z(n);
  for (int k = 0; k < n; ++k) z[k] = std::polar(radius * (0.5 + 0.5 * (k + 1) / n), 2.0 * kPi * k / n + 0.4);

  for (int iter = 0; iter < 500; ++iter) {
    double max_step = 0.0;
    for (int k = 0; k < n; ++k) {
      const Complex pk = p(z[k]);
      if (pk == Complex(0.0, 0.0)) continue;
      const Complex ratio = pk / dp(z[k]);
      Complex sum = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != k) sum += 1.0 / (z[k] - z[j]);
      const Complex step = ratio / (1.0 - ratio * sum);
      if (std::isfinite(step.real()) && std::isfinite(step.imag())) {
        z[k] -= step;
        max_step = std::max(max_step, std::abs(step) / std::max(1.0, std::abs(z[k])));
      }
    }
    if (max_step < 1e-15) break;
  }
  return z;
}

std::vector<RootCluster> clustered_roots(const Polynomial& p, double cluster_tol) {
  std::vector<RootCluster> out;
  if (p.degree() < 1) return out;
  const auto& c = p.coeffs();
  int zero_mult = 0;
  while (zero_mult < static_cast<int>(c.size()) && c[zero_mult] == Complex(0.0, 0.0)) ++zero_mult;
  std::vector<Complex> reduced(c.begin() + zero_mult, c.end());
  if (zero_mult > 0) out.push_back({Complex(0.0, 0.0), zero_mult});

  std::vector<Complex> roots = polynomial_roots(Polynomial(std::move(reduced)));
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::size_t> members{i};
    used[i] = true;
    // Grow the cluster transitively; repeated roots scatter on a small circle.
    for (std::size_t m = 0; m < members.size(); ++m) {
      for (std::size_t j = 0; j < roots.size(); ++j) {
        if (used[j]) continue;
        const double scale = std::max(1.0, std::abs(roots[members[m]]));
        if (std::abs(roots[j] - roots[members[m]]) < cluster_tol * scale) {
          used[j] = true;
          members.push_back(j);
        }
      }
    }
    Complex mean = 0.0;
    for (auto idx : members) mean += roots[idx];
    mean /= static_cast<double>(members.size());
    out.push_back({mean, static_cast<int>(members.size())});
  }
  return out;
}

Polynomial Rational::derivative_numerator() const {
  return num.derivative() * den - num * den.derivative();
}

Rational Rational::compose(const Rational& f, const Rational& g) {
  // f = P/Q with d = max(deg P, deg Q); f(A/B) = [sum p_k A^k B^(d-k)] / [sum q_k A^k B^(d-k)].
  const int d = std::max(f.num.degree(), f.den.degree());
  std::vector<Polynomial> a_pow{Polynomial::constant(1.0)}, b_pow{Polynomial::constant(1.0)};
  for (int k = 1; k <= std::max(d, 0); ++k) {
    a_pow.push_back(a_pow.back() * g.num);
    b_pow.push_back(b_pow.back() * g.den);
  }
  auto homogenize = [&](const Polynomial& p) {
    Polynomial acc;
    for (int k = 0; k <= p.degree(); ++k)
      acc = acc + p.coeffs()[k] * (a_pow[k] * b_pow[d - k]);
    return acc;
  };
  return {homogenize(f.num), homogenize(f.den)};
}

}  // namespace pmrig
