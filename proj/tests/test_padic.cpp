#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "ultralocal/error.hpp"
#include "ultralocal/padic.hpp"

using namespace ultralocal;

namespace {

Rational q(std::int64_t n, std::int64_t d = 1) { return Rational(BigInt(n), BigInt(d)); }

// ((x)((y)((z)(w)))) with merge heights 2.0 > 0.5 > 0.1
Dendrogram chain4() {
  const std::vector<PointId> ids{0, 1, 2, 3};
  Dendrogram t(ids);
  const auto zw = t.add_node({2, 3}, 0.1);
  const auto yzw = t.add_node({1, zw}, 0.5);
  t.add_node({0, yzw}, 2.0);
  return t;
}

Dendrogram balanced4() {
  const std::vector<PointId> ids{0, 1, 2, 3};
  Dendrogram t(ids);
  const auto a = t.add_node({0, 1}, 1.0);
  const auto b = t.add_node({2, 3}, 1.0);
  t.add_node({a, b}, 3.0);
  return t;
}

Dendrogram star(std::size_t arity) {
  std::vector<PointId> ids(arity);
  std::vector<std::size_t> kids(arity);
  for (std::size_t i = 0; i < arity; ++i) ids[i] = kids[i] = i;
  Dendrogram t(ids);
  t.add_node(kids, 1.0);
  return t;
}

std::vector<std::string> strings(const std::vector<LeafCenter>& centers) {
  std::vector<std::string> out;
  for (const auto& c : centers) out.push_back(c.center.str());
  return out;
}

const std::vector<Rational> kCubicNodes{q(0), q(1), q(10), q(37)};
const std::vector<Rational> kCubicValues{q(1), q(3), q(9), q(9)};

}  // namespace

TEST_CASE("Rational normalization and formatting") {
  CHECK(q(6, 4).str() == "3/2");
  CHECK(q(6, -4).str() == "-3/2");
  CHECK(q(0, -7).str() == "0");
  CHECK(q(0, -7).denominator() == 1);
  CHECK(Rational::parse("-1673/9990") == q(-1673, 9990));
  CHECK(Rational::parse("12") == q(12));
  CHECK_THROWS_AS(Rational::parse("1/x"), DataError);
  CHECK_THROWS_AS(q(1, 0), UsageError);
  CHECK_THROWS_AS(q(1) / q(0), UsageError);
  CHECK(q(1, 3) < q(1, 2));
  CHECK(q(-1, 2) < q(1, 3));
  CHECK(pow(q(3), 4) == q(81));
  CHECK(q(1, 4).to_double() == 0.25);
}

TEST_CASE("Rational field axioms hold exactly") {
  std::mt19937_64 rng(61);
  for (int i = 0; i < 500; ++i) {
    const auto a = oracle::random_rational(rng);
    const auto b = oracle::random_rational(rng);
    const auto c = oracle::random_rational(rng);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == Rational{});
    if (!a.is_zero()) CHECK(a / a == q(1));
    CHECK(a + Rational{} == a);
    CHECK(a * q(1) == a);
  }
}

TEST_CASE("valuation") {
  CHECK(valuation(q(9), 3) == 2);
  CHECK(valuation(q(31, 9990), 3) == -3);
  CHECK(valuation(q(-1673, 9990), 3) == -3);
  CHECK(valuation(q(10811, 4995), 3) == -3);
  CHECK_FALSE(valuation(q(0), 3).has_value());
  CHECK(valuation(q(7, 2), 5) == 0);
  CHECK_THROWS_AS(valuation(q(9), 4), UsageError);
  CHECK_THROWS_AS(valuation(q(0), 1), UsageError);
  CHECK(padic_abs(q(18), 3) == q(1, 9));
  CHECK(padic_abs(q(1, 27), 3) == q(27));
  CHECK(padic_abs(q(0), 3) == q(0));
}

TEST_CASE("valuation is additive and ultrametric") {
  std::mt19937_64 rng(67);
  for (std::uint64_t p : {2u, 3u, 5u, 7u}) {
    for (int i = 0; i < 300; ++i) {
      const auto a = oracle::random_rational(rng, 500) * q(static_cast<std::int64_t>(p * p));
      const auto b = oracle::random_rational(rng, 500);
      const auto va = valuation(a, p);
      const auto vb = valuation(b, p);
      if (va && vb) {
        CHECK(valuation(a * b, p) == *va + *vb);
        const auto vs = valuation(a + b, p);
        if (vs) CHECK(*vs >= std::min(*va, *vb));
      }
    }
  }
}

TEST_CASE("primes") {
  CHECK(is_prime(2));
  CHECK(is_prime(11));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(9));
  CHECK(next_prime_at_least(8) == 11);
  CHECK(next_prime_at_least(7) == 7);
}

TEST_CASE("choose_prime") {
  const std::vector<Dendrogram> binary{chain4()};
  CHECK(choose_prime(binary, 5) == 7);
  CHECK(choose_prime(binary, 1) == 3);
  const std::vector<Dendrogram> four{star(4), chain4()};
  CHECK(prime_lower_bound(four, 4) == 8);
  CHECK(choose_prime(four, 4) == 11);
  CHECK_THROWS_AS(choose_prime(std::vector<Dendrogram>{}, 1), UsageError);
}

TEST_CASE("radius_ranks") {
  const auto r = radius_ranks(chain4());
  CHECK(r.m == 2);
  CHECK(r.rank.at(2.0) == 0);
  CHECK(r.rank.at(0.5) == 1);
  CHECK(r.rank.at(0.1) == 2);
  CHECK(radius_ranks(star(2)).m == 0);
  CHECK(radius_ranks(balanced4()).m == 1);
}

TEST_CASE("assign_centers") {
  SUBCASE("single merge") { CHECK(strings(assign_centers(star(2), 3)) == std::vector<std::string>{"0", "1"}); }
  SUBCASE("chain with explicit positions 0, 2, 3") {
    const DigitPositions pos{{2.0, 0}, {0.5, 2}, {0.1, 3}};
    CHECK(strings(assign_centers(chain4(), 3, pos)) == std::vector<std::string>{"0", "1", "10", "37"});
  }
  SUBCASE("chain with its own radius ranks") {
    CHECK(strings(assign_centers(chain4(), 3)) == std::vector<std::string>{"0", "1", "4", "13"});
  }
  SUBCASE("balanced tree") {
    CHECK(strings(assign_centers(balanced4(), 5)) == std::vector<std::string>{"0", "5", "1", "6"});
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(assign_centers(star(4), 3), UsageError);
    CHECK_THROWS_AS(assign_centers(star(2), 4), UsageError);
    const DigitPositions missing{{2.0, 0}};
    CHECK_THROWS_AS(assign_centers(chain4(), 3, missing), UsageError);
    const DigitPositions decreasing{{2.0, 2}, {0.5, 1}, {0.1, 3}};
    CHECK_THROWS_AS(assign_centers(chain4(), 3, decreasing), UsageError);
  }
}

TEST_CASE("equity_masses") {
  CHECK(equity_masses(chain4()) == std::vector<Rational>{q(1, 2), q(1, 4), q(1, 8), q(1, 8)});
  CHECK(equity_masses(balanced4()) == std::vector<Rational>(4, q(1, 4)));
  const std::vector<PointId> one{0};
  CHECK(equity_masses(Dendrogram(one)) == std::vector<Rational>{q(1)});
}

TEST_CASE("equity masses sum to exactly 1 on random dendrograms") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 500; ++trial) {
    const auto tree = oracle::random_dendrogram(rng, 1 + trial % 40);
    Rational total;
    for (const auto& m : equity_masses(tree)) total += m;
    CHECK(total == q(1));
  }
}

TEST_CASE("mass_targets") {
  const std::vector<Rational> masses{q(1, 2), q(1, 4), q(1, 8), q(1, 8)};
  CHECK(mass_targets(masses, 3) == std::vector<Rational>{q(1), q(3), q(9), q(9)});
  CHECK(mass_targets(std::vector<Rational>(3, q(1, 3)), 5) == std::vector<Rational>(3, q(1)));
  CHECK(mass_targets(std::vector<Rational>{q(2, 3), q(1, 3)}, 5) == std::vector<Rational>{q(1), q(5)});
  CHECK_THROWS_AS(mass_targets(std::vector<Rational>{q(0), q(1)}, 5), UsageError);
}

TEST_CASE("lagrange_interpolate") {
  SUBCASE("the 3-adic cluster example") {
    const auto f = lagrange_interpolate(kCubicNodes, kCubicValues);
    CHECK(f.degree() == 3);
    CHECK(f.coefficient(0) == q(1));
    CHECK(f.coefficient(1) == q(10811, 4995));
    CHECK(f.coefficient(3) == q(31, 9990));
    CHECK(f.coefficient(2) == q(-1673, 9990));
    CHECK(f.coefficients()[2] == Rational::parse("-1673/9990"));
    CHECK(f.str() == "31/9990*X^3 - 1673/9990*X^2 + 10811/4995*X + 1");
    // The alternative X^2 coefficient -1683/9990 misses f(1) = 3.
    RationalPolynomial g({q(1), q(10811, 4995), q(-1683, 9990), q(31, 9990)});
    CHECK(g(q(1)) == q(2996, 999));
    CHECK(f(q(1)) == q(3));
  }
  SUBCASE("agrees with an exact Vandermonde solve") {
    const auto oracle_coeffs = oracle::vandermonde_solve(kCubicNodes, kCubicValues);
    const auto f = lagrange_interpolate(kCubicNodes, kCubicValues);
    CHECK(std::vector<Rational>(f.coefficients().begin(), f.coefficients().end()) == oracle_coeffs);
  }
  SUBCASE("single node") {
    const auto f = lagrange_interpolate(std::vector<Rational>{q(0)}, std::vector<Rational>{q(1)});
    CHECK(f.degree() == 0);
    CHECK(f.coefficient(0) == q(1));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(lagrange_interpolate(std::vector<Rational>{q(1), q(1)}, std::vector<Rational>{q(1), q(2)}),
                    UsageError);
    CHECK_THROWS_AS(lagrange_interpolate(std::vector<Rational>{q(1)}, std::vector<Rational>{q(1), q(2)}),
                    UsageError);
  }
}

TEST_CASE("interpolation is exact on random instances up to degree 12") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + trial % 13;
    std::vector<Rational> nodes, values;
    while (nodes.size() < n) {
      auto x = oracle::random_rational(rng, 50);
      if (std::find(nodes.begin(), nodes.end(), x) != nodes.end()) continue;
      nodes.push_back(x);
      values.push_back(oracle::random_rational(rng, 50));
    }
    const auto f = lagrange_interpolate(nodes, values);
    CHECK(f.degree() < static_cast<int>(n));
    for (std::size_t i = 0; i < n; ++i) CHECK(f(nodes[i]) == values[i]);
    const auto oracle_coeffs = oracle::vandermonde_solve(nodes, values);
    CHECK(std::vector<Rational>(f.coefficients().begin(), f.coefficients().end()) == oracle_coeffs);
  }
}

TEST_CASE("encode and verify_measure") {
  SUBCASE("chain with the explicit positions reproduces the known cubic") {
    const DigitPositions pos{{2.0, 0}, {0.5, 2}, {0.1, 3}};
    const auto enc = encode(chain4(), 3, pos);
    CHECK(enc.m == 3);
    CHECK(enc.modulus() == 81);
    CHECK(enc.targets == kCubicValues);
    const auto f = interpolate(enc);
    CHECK(f == lagrange_interpolate(kCubicNodes, kCubicValues));
    const auto report = verify_measure(f, enc, 81);
    CHECK(report.ok());
    for (const auto& b : report.balls) CHECK(b.samples_checked == 81);
  }
  SUBCASE("constant polynomial with equal masses") {
    const auto enc = encode(balanced4(), 5);
    CHECK(enc.targets == std::vector<Rational>(4, q(1)));
    CHECK(verify_measure(RationalPolynomial({q(1)}), enc).ok());
  }
  SUBCASE("f(X) = X vanishes at the center 0") {
    const auto enc = encode(balanced4(), 5);
    const auto report = verify_measure(RationalPolynomial({q(0), q(1)}), enc);
    CHECK_FALSE(report.ok());
    CHECK(report.balls[0].zeros == 1);
    CHECK_FALSE(report.balls[0].center_valuation.has_value());
  }
}

TEST_CASE("encodings of random dendrograms keep their invariants") {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 80; ++trial) {
    const auto tree = oracle::random_dendrogram(rng, 1 + trial % 12);
    const std::vector<Dendrogram> trees{tree};
    const auto p = choose_prime(trees, 1);
    const auto enc = encode(tree, p);  // validate() runs inside
    std::set<BigInt> residues;
    for (const auto& c : enc.centers) residues.insert(c % enc.modulus());
    CHECK(residues.size() == enc.centers.size());
    const auto ranks = enc.target_ranks();
    for (std::size_t i = 0; i < ranks.size(); ++i)
      for (std::size_t j = 0; j < ranks.size(); ++j)
        if (enc.masses[i] > enc.masses[j]) CHECK(ranks[i] < ranks[j]);
    if (enc.centers.size() <= 8) CHECK(verify_measure(interpolate(enc), enc, 9).balls.size() == enc.centers.size());
  }
}
