#include "ultralocal/padic.hpp"

#include <algorithm>
#include <set>

#include "ultralocal/error.hpp"

namespace ultralocal {

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d <= n / d; d += 2)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t next_prime_at_least(std::uint64_t n) {
  if (n <= 2) return 2;
  while (!is_prime(n)) ++n;
  return n;
}

std::optional<std::int64_t> valuation(const BigInt& n, std::uint64_t p) {
  if (!is_prime(p)) throw UsageError(std::to_string(p) + " is not prime");
  if (n == 0) return std::nullopt;
  BigInt x = abs(n);
  std::int64_t v = 0;
  const BigInt bp(p);
  while (x % bp == 0) {
    x /= bp;
    ++v;
  }
  return v;
}

std::optional<std::int64_t> valuation(const Rational& q, std::uint64_t p) {
  if (q.is_zero()) {
    if (!is_prime(p)) throw UsageError(std::to_string(p) + " is not prime");
    return std::nullopt;
  }
  return *valuation(q.numerator(), p) - *valuation(q.denominator(), p);
}

Rational padic_abs(const Rational& q, std::uint64_t p) {
  const auto v = valuation(q, p);
  if (!v) return Rational{};
  const Rational base(static_cast<std::int64_t>(p));
  return *v >= 0 ? Rational(1) / pow(base, static_cast<unsigned>(*v))
                 : pow(base, static_cast<unsigned>(-*v));
}

std::uint64_t prime_lower_bound(std::span<const Dendrogram> dendrograms, std::size_t component_count) {
  if (dendrograms.empty()) throw UsageError("prime choice needs at least one dendrogram");
  std::size_t arity = 0;
  for (const auto& d : dendrograms) arity = std::max(arity, d.max_arity());
  return arity + component_count;
}

std::uint64_t choose_prime(std::span<const Dendrogram> dendrograms, std::size_t component_count) {
  return next_prime_at_least(prime_lower_bound(dendrograms, component_count));
}

RadiusRanks radius_ranks(const Dendrogram& tree) {
  RadiusRanks out;
  unsigned rank = 0;
  for (double h : tree.distinct_heights()) out.rank.emplace(h, rank++);
  out.m = rank == 0 ? 0 : rank - 1;
  return out;
}

namespace {

std::vector<std::size_t> ordered_children(const Dendrogram& tree, std::size_t v) {
  auto kids = tree.node(v).children;
  std::stable_sort(kids.begin(), kids.end(), [&](auto a, auto b) {
    const auto& na = tree.node(a);
    const auto& nb = tree.node(b);
    if (na.leaf_count != nb.leaf_count) return na.leaf_count < nb.leaf_count;
    return na.min_point < nb.min_point;
  });
  return kids;
}

}  // namespace

std::vector<LeafCenter> assign_centers(const Dendrogram& tree, std::uint64_t p,
                                       const DigitPositions& positions) {
  if (!is_prime(p)) throw UsageError(std::to_string(p) + " is not prime");
  std::vector<LeafCenter> out(tree.leaf_count());
  struct Frame {
    std::size_t node;
    BigInt prefix;
    std::optional<unsigned> parent_position;
  };
  std::vector<Frame> stack{{tree.root(), BigInt(0), std::nullopt}};
  while (!stack.empty()) {
    auto [v, prefix, parent_position] = std::move(stack.back());
    stack.pop_back();
    const auto& node = tree.node(v);
    if (node.is_leaf()) {
      out[v] = {node.point, prefix};
      continue;
    }
    if (node.children.size() > p)
      throw UsageError("node with " + std::to_string(node.children.size()) +
                       " children needs p >= that arity, got p = " + std::to_string(p));
    auto it = positions.find(node.height);
    if (it == positions.end())
      throw UsageError("no digit position for ball height " + std::to_string(node.height));
    const unsigned position = it->second;
    if (parent_position && position <= *parent_position)
      throw UsageError("digit positions must increase toward the leaves");
    const BigInt place = boost::multiprecision::pow(BigInt(p), position);
    const auto kids = ordered_children(tree, v);
    for (std::size_t digit = 0; digit < kids.size(); ++digit)
      stack.push_back({kids[digit], prefix + place * digit, position});
  }
  return out;
}

std::vector<LeafCenter> assign_centers(const Dendrogram& tree, std::uint64_t p) {
  return assign_centers(tree, p, radius_ranks(tree).rank);
}

std::vector<Rational> equity_masses(const Dendrogram& tree) {
  std::vector<Rational> mass(tree.node_count());
  mass[tree.root()] = Rational(1);
  for (std::size_t v = tree.node_count(); v-- > 0;) {
    const auto& kids = tree.node(v).children;
    if (kids.empty()) continue;
    const Rational share = mass[v] / Rational(static_cast<std::int64_t>(kids.size()));
    for (auto c : kids) mass[c] = share;
  }
  mass.resize(tree.leaf_count());
  return mass;
}

std::vector<Rational> mass_targets(std::span<const Rational> masses, std::uint64_t p) {
  if (!is_prime(p)) throw UsageError(std::to_string(p) + " is not prime");
  std::set<Rational, std::greater<>> distinct;
  for (const auto& m : masses) {
    if (m.sign() <= 0) throw UsageError("masses must be positive");
    distinct.insert(m);
  }
  std::map<Rational, unsigned, std::greater<>> rank;
  unsigned r = 0;
  for (const auto& m : distinct) rank.emplace(m, r++);
  std::vector<Rational> targets;
  targets.reserve(masses.size());
  const Rational base(static_cast<std::int64_t>(p));
  for (const auto& m : masses) targets.push_back(pow(base, rank.at(m)));
  return targets;
}

BigInt PAdicEncoding::modulus() const { return boost::multiprecision::pow(BigInt(p), m + 1); }

std::vector<std::int64_t> PAdicEncoding::target_ranks() const {
  std::vector<std::int64_t> out;
  for (const auto& t : targets) out.push_back(valuation(t, p).value_or(-1));
  return out;
}

PAdicEncoding encode(const Dendrogram& tree, std::uint64_t p,
                     const std::optional<DigitPositions>& positions) {
  PAdicEncoding enc;
  enc.p = p;
  enc.positions = positions ? *positions : radius_ranks(tree).rank;
  enc.m = 0;
  for (const auto& node : tree.nodes()) {
    if (node.is_leaf()) continue;
    if (auto it = enc.positions.find(node.height); it != enc.positions.end())
      enc.m = std::max(enc.m, it->second);
  }
  for (auto& lc : assign_centers(tree, p, enc.positions)) {
    enc.leaves.push_back(lc.point);
    enc.centers.push_back(std::move(lc.center));
  }
  enc.masses = equity_masses(tree);
  enc.targets = mass_targets(enc.masses, p);
  validate(enc);
  return enc;
}

void validate(const PAdicEncoding& enc) {
  const auto n = enc.leaves.size();
  if (enc.centers.size() != n || enc.masses.size() != n || enc.targets.size() != n)
    throw InvariantError("encoding vectors differ in length");
  const BigInt mod = enc.modulus();
  std::set<BigInt> residues;
  for (const auto& c : enc.centers) {
    if (c < 0 || c >= mod) throw InvariantError("center outside [0, p^(m+1))");
    if (!residues.insert(c % mod).second) throw InvariantError("centers collide modulo p^(m+1)");
  }
  Rational total;
  for (const auto& m : enc.masses) total += m;
  if (total != Rational(1)) throw InvariantError("equity masses sum to " + total.str());
  const auto ranks = enc.target_ranks();
  const Rational base(static_cast<std::int64_t>(enc.p));
  for (std::size_t i = 0; i < n; ++i) {
    if (ranks[i] < 0 || enc.targets[i] != pow(base, static_cast<unsigned>(ranks[i])))
      throw InvariantError("target is not a non-negative power of p");
    for (std::size_t j = 0; j < n; ++j)
      if ((enc.masses[i] > enc.masses[j]) != (ranks[i] < ranks[j]))
        throw InvariantError("targets are not strictly monotone in mass");
  }
}

RationalPolynomial interpolate(const PAdicEncoding& enc) {
  std::vector<Rational> nodes;
  for (const auto& c : enc.centers) nodes.emplace_back(c);
  return lagrange_interpolate(nodes, enc.targets);
}

bool MeasureReport::ok() const noexcept {
  return std::all_of(balls.begin(), balls.end(), [](const auto& b) { return b.ok(); });
}

MeasureReport verify_measure(const RationalPolynomial& f, const PAdicEncoding& enc,
                             std::size_t samples_per_ball) {
  MeasureReport report;
  const BigInt mod = enc.modulus();
  const auto ranks = enc.target_ranks();
  for (std::size_t i = 0; i < enc.centers.size(); ++i) {
    BallCheck ball;
    ball.point = enc.leaves[i];
    ball.center = enc.centers[i];
    ball.expected_valuation = ranks[i];
    const Rational at_center = f(Rational(enc.centers[i]));
    ball.center_valuation = valuation(at_center, enc.p);
    if (!ball.center_valuation) ++ball.zeros;
    for (std::size_t s = 1; s <= samples_per_ball; ++s) {
      const Rational x(enc.centers[i] + mod * s);
      const auto v = valuation(f(x), enc.p);
      ++ball.samples_checked;
      if (!v) ++ball.zeros;
      if (v != ball.center_valuation) ++ball.valuation_mismatches;
    }
    report.balls.push_back(std::move(ball));
  }
  return report;
}

}  // namespace ultralocal
