#include "ultralocal/polynomial.hpp"

#include <sstream>

#include "ultralocal/error.hpp"

namespace ultralocal {

RationalPolynomial::RationalPolynomial(std::vector<Rational> ascending) : coeffs_(std::move(ascending)) {
  trim();
}

void RationalPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

Rational RationalPolynomial::coefficient(std::size_t k) const {
  return k < coeffs_.size() ? coeffs_[k] : Rational{};
}

Rational RationalPolynomial::operator()(const Rational& x) const {
  Rational acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

RationalPolynomial& RationalPolynomial::operator+=(const RationalPolynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  trim();
  return *this;
}

RationalPolynomial& RationalPolynomial::operator*=(const RationalPolynomial& o) {
  if (is_zero() || o.is_zero()) {
    coeffs_.clear();
    return *this;
  }
  std::vector<Rational> product(coeffs_.size() + o.coeffs_.size() - 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) product[i + j] += coeffs_[i] * o.coeffs_[j];
  coeffs_ = std::move(product);
  trim();
  return *this;
}

RationalPolynomial& RationalPolynomial::operator*=(const Rational& c) {
  for (auto& a : coeffs_) a *= c;
  trim();
  return *this;
}

std::string RationalPolynomial::str() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    const auto& c = coeffs_[k];
    if (c.is_zero()) continue;
    const Rational magnitude = c.sign() < 0 ? -c : c;
    if (first)
      os << (c.sign() < 0 ? "-" : "");
    else
      os << (c.sign() < 0 ? " - " : " + ");
    first = false;
    if (k == 0) {
      os << magnitude;
      continue;
    }
    if (magnitude != Rational(1)) os << magnitude << '*';
    os << 'X';
    if (k > 1) os << '^' << k;
  }
  return os.str();
}

RationalPolynomial lagrange_interpolate(std::span<const Rational> nodes,
                                        std::span<const Rational> values) {
  if (nodes.size() != values.size())
    throw UsageError("interpolation needs as many values as nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      if (nodes[i] == nodes[j]) throw UsageError("duplicate interpolation node " + nodes[i].str());

  RationalPolynomial result;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (values[i].is_zero()) continue;
    RationalPolynomial basis(std::vector<Rational>{Rational(1)});
    Rational scale = values[i];
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (j == i) continue;
      basis *= RationalPolynomial(std::vector<Rational>{-nodes[j], Rational(1)});
      scale /= nodes[i] - nodes[j];
    }
    basis *= scale;
    result += basis;
  }
  return result;
}

}  // namespace ultralocal
