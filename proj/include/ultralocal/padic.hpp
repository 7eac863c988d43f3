#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "ultralocal/polynomial.hpp"
#include "ultralocal/rational.hpp"
#include "ultralocal/ultra.hpp"

namespace ultralocal {

bool is_prime(std::uint64_t n) noexcept;
std::uint64_t next_prime_at_least(std::uint64_t n);

// p-adic valuation v_p(q) = v_p(num) - v_p(den); std::nullopt stands for
// +infinity (q == 0). Throws UsageError when p is not prime.
std::optional<std::int64_t> valuation(const Rational& q, std::uint64_t p);
std::optional<std::int64_t> valuation(const BigInt& n, std::uint64_t p);

// |q|_p = p^(-v_p(q)), zero for q == 0.
Rational padic_abs(const Rational& q, std::uint64_t p);

// max arity over the dendrograms plus the number of components.
std::uint64_t prime_lower_bound(std::span<const Dendrogram> dendrograms, std::size_t component_count);
// Smallest prime >= prime_lower_bound.
std::uint64_t choose_prime(std::span<const Dendrogram> dendrograms, std::size_t component_count);

// Base-p digit position assigned to a ball of the given radius (height).
using DigitPositions = std::map<double, unsigned, std::greater<>>;

struct RadiusRanks {
  DigitPositions rank;  // distinct heights, descending, ranked 0..m
  unsigned m = 0;
};

RadiusRanks radius_ranks(const Dendrogram& tree);

struct LeafCenter {
  PointId point = 0;
  BigInt center;
};

// Centers a_c of the leaf balls a_c + p^(m+1) Z_p, in leaf order. Children of
// a ball of height h take digits 0, 1, ... at position positions[h]; children
// are ordered by leaf count, then by smallest point id. m is the largest
// position used. Throws UsageError if an arity exceeds p or a height is
// missing from `positions`.
std::vector<LeafCenter> assign_centers(const Dendrogram& tree, std::uint64_t p,
                                       const DigitPositions& positions);
std::vector<LeafCenter> assign_centers(const Dendrogram& tree, std::uint64_t p);

// Equity measure of each leaf ball (leaf order): mass 1 at the root, split
// equally among the children of every node.
std::vector<Rational> equity_masses(const Dendrogram& tree);

// Distinct masses ranked descending get targets p^0, p^1, ...; equal masses
// share a target.
std::vector<Rational> mass_targets(std::span<const Rational> masses, std::uint64_t p);

struct PAdicEncoding {
  std::uint64_t p = 2;
  unsigned m = 0;
  std::vector<PointId> leaves;
  std::vector<BigInt> centers;
  std::vector<Rational> masses;
  std::vector<Rational> targets;
  DigitPositions positions;

  BigInt modulus() const;  // p^(m+1)
  // v_p of each target.
  std::vector<std::int64_t> target_ranks() const;
};

// Encodes one component's dendrogram. With no explicit positions the radius
// ranks of the tree are used.
PAdicEncoding encode(const Dendrogram& tree, std::uint64_t p,
                     const std::optional<DigitPositions>& positions = std::nullopt);

// Checks the structural invariants of an encoding; throws InvariantError.
void validate(const PAdicEncoding& enc);

// Interpolant f with f(a_c) = target_c.
RationalPolynomial interpolate(const PAdicEncoding& enc);

struct BallCheck {
  PointId point = 0;
  BigInt center;
  std::int64_t expected_valuation = 0;
  std::optional<std::int64_t> center_valuation;
  std::size_t samples_checked = 0;
  std::size_t valuation_mismatches = 0;
  std::size_t zeros = 0;

  bool ok() const noexcept {
    return center_valuation == expected_valuation && valuation_mismatches == 0 && zeros == 0;
  }
};

struct MeasureReport {
  std::vector<BallCheck> balls;
  bool ok() const noexcept;
};

// For every leaf ball: v_p(f(a_c)) equals the target's valuation, and
// v_p(f(a_c + s p^(m+1))) is unchanged for s = 1..samples_per_ball (so f
// does not vanish there).
MeasureReport verify_measure(const RationalPolynomial& f, const PAdicEncoding& enc,
                             std::size_t samples_per_ball = 81);

}  // namespace ultralocal
