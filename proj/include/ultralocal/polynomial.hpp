#pragma once

#include <span>
#include <string>
#include <vector>

#include "ultralocal/rational.hpp"

namespace ultralocal {

// Polynomial with exact rational coefficients in ascending degree. The zero
// polynomial has no coefficients; otherwise the leading one is nonzero.
class RationalPolynomial {
 public:
  RationalPolynomial() = default;
  explicit RationalPolynomial(std::vector<Rational> ascending);

  std::span<const Rational> coefficients() const noexcept { return coeffs_; }
  // Coefficient of X^k (zero past the degree).
  Rational coefficient(std::size_t k) const;
  bool is_zero() const noexcept { return coeffs_.empty(); }
  // -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

  Rational operator()(const Rational& x) const;

  RationalPolynomial& operator+=(const RationalPolynomial& o);
  RationalPolynomial& operator*=(const RationalPolynomial& o);
  RationalPolynomial& operator*=(const Rational& c);
  friend RationalPolynomial operator+(RationalPolynomial a, const RationalPolynomial& b) { return a += b; }
  friend RationalPolynomial operator*(RationalPolynomial a, const RationalPolynomial& b) { return a *= b; }
  friend bool operator==(const RationalPolynomial&, const RationalPolynomial&) = default;

  // e.g. "31/9990*X^3 - 1673/9990*X^2 + 10811/4995*X + 1"
  std::string str() const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

// Unique polynomial of degree < n through (nodes[i], values[i]), built from
// the Lagrange basis. Throws UsageError on duplicate nodes or length mismatch.
RationalPolynomial lagrange_interpolate(std::span<const Rational> nodes,
                                        std::span<const Rational> values);

}  // namespace ultralocal
