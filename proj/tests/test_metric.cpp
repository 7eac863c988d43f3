#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ultralocal/error.hpp"
#include "ultralocal/metric.hpp"

using namespace ultralocal;

TEST_CASE("load_points reads the bundled iris file") {
  const auto ps = load_points(UL_DATA_DIR "/iris.csv");
  CHECK(ps.size() == 150);
  CHECK(ps.dimension() == 4);
  REQUIRE(ps[0].label);
  CHECK(*ps[0].label == "setosa");
  CHECK(*ps[149].label == "virginica");
  CHECK(ps[0].coords == std::vector<double>{5.1, 3.5, 1.4, 0.2});
}

TEST_CASE("parse_points") {
  SUBCASE("headerless numeric rows") {
    const auto ps = parse_points("1,2\n3,4\n5,6", {.has_header = false});
    CHECK(ps.size() == 3);
    CHECK(ps.dimension() == 2);
    CHECK_FALSE(ps[0].label);
    CHECK(ps[2].coords == std::vector<double>{5, 6});
  }
  SUBCASE("empty input") {
    CHECK_THROWS_WITH_AS(parse_points("", {.has_header = false}), "no data rows", DataError);
    CHECK_THROWS_WITH_AS(parse_points("a,b\n", {}), "no data rows", DataError);
  }
  SUBCASE("ragged rows") {
    CHECK_THROWS_AS(parse_points("1,2\n3\n", {.has_header = false}), DataError);
  }
  SUBCASE("non-numeric cell names line and column") {
    try {
      parse_points("x,y,label\n1,2,a\n3,oops,b\n", {});
      FAIL("expected a parse error");
    } catch (const DataError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("line 3") != std::string::npos);
      CHECK(msg.find("column 2") != std::string::npos);
    }
  }
  SUBCASE("explicit label column") {
    const auto ps = parse_points("id,x,y\np,1,2\nq,3,4\n", {.has_header = true, .label_column = 0});
    CHECK(ps.dimension() == 2);
    CHECK(*ps[1].label == "q");
  }
  SUBCASE("CRLF and blank lines") {
    const auto ps = parse_points("1,2\r\n\r\n3,4\r\n", {.has_header = false});
    CHECK(ps.size() == 2);
  }
  SUBCASE("unreadable file") {
    CHECK_THROWS_AS(load_points("/nonexistent/file.csv"), DataError);
  }
}

TEST_CASE("euclidean_metric") {
  const auto ps = parse_points("0,0\n3,4\n", {.has_header = false});
  const auto m = euclidean_metric(ps);
  CHECK(m(0, 1) == 5.0);
  CHECK(m(0, 0) == 0.0);
  CHECK(m(1, 1) == 0.0);

  const auto iris = euclidean_metric(load_points(UL_DATA_DIR "/iris.csv"));
  CHECK(iris(0, 1) == doctest::Approx(std::sqrt(0.29)).epsilon(1e-12));
  CHECK(iris(0, 1) == doctest::Approx(0.53852).epsilon(1e-5));
}

TEST_CASE("FiniteMetricSpace validates the metric axioms") {
  CHECK_THROWS_AS(FiniteMetricSpace(2, {0, 1, 2, 0}), DataError);    // asymmetric
  CHECK_THROWS_AS(FiniteMetricSpace(2, {1, 1, 1, 0}), DataError);    // diagonal
  CHECK_THROWS_AS(FiniteMetricSpace(2, {0, -1, -1, 0}), DataError);  // negative
  CHECK_THROWS_AS(FiniteMetricSpace(3, {0, 1, 3, 1, 0, 1, 3, 1, 0}), DataError);  // triangle
  CHECK_THROWS_AS(FiniteMetricSpace(2, {0, 1, 1}), DataError);       // size
  CHECK_NOTHROW(FiniteMetricSpace(3, {0, 1, 2, 1, 0, 1, 2, 1, 0}));  // equality case
  // duplicates: zero off-diagonal distances are legal
  CHECK_NOTHROW(FiniteMetricSpace(3, {0, 0, 1, 0, 0, 1, 1, 1, 0}));
}

TEST_CASE("metric axioms hold for every constructed space") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = oracle::random_euclidean(rng, 12);
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(s(i, i) == 0.0);
      for (std::size_t j = 0; j < s.size(); ++j) {
        CHECK(s(i, j) == s(j, i));
        CHECK(s(i, j) >= 0.0);
        for (std::size_t k = 0; k < s.size(); ++k) CHECK(s(i, j) <= s(i, k) + s(k, j) + 1e-9);
      }
    }
  }
}

TEST_CASE("restrict") {
  const FiniteMetricSpace s(3, {0, 1, 1.5, 1, 0, 1, 1.5, 1, 0});
  SUBCASE("to all ids is the identity") {
    const std::vector<PointId> all{0, 1, 2};
    CHECK(restrict(s, all) == s);
  }
  SUBCASE("to one id") {
    const std::vector<PointId> one{1};
    const auto r = restrict(s, one);
    CHECK(r.size() == 1);
    CHECK(r(0, 0) == 0.0);
    CHECK(r.id(0) == 1);
  }
  SUBCASE("keeps the original distance and ids") {
    const std::vector<PointId> ac{2, 0};
    const auto r = restrict(s, ac);
    CHECK(r.size() == 2);
    CHECK(r(0, 1) == 1.5);
    CHECK(r.id(0) == 0);
    CHECK(r.id(1) == 2);
  }
  SUBCASE("errors") {
    const std::vector<PointId> none;
    const std::vector<PointId> bad{0, 7};
    CHECK_THROWS_AS(restrict(s, none), UsageError);
    CHECK_THROWS_AS(restrict(s, bad), UsageError);
  }
}

TEST_CASE("restrict is idempotent and commutes with nested restriction") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const auto s = oracle::random_euclidean(rng, 15);
    std::vector<PointId> outer, inner;
    std::bernoulli_distribution coin(0.6);
    for (PointId i = 0; i < 15; ++i)
      if (coin(rng)) outer.push_back(i);
    if (outer.empty()) outer.push_back(3);
    for (auto i : outer)
      if (coin(rng)) inner.push_back(i);
    if (inner.empty()) inner.push_back(outer.front());
    const auto r = restrict(s, outer);
    CHECK(restrict(r, outer) == r);
    CHECK(restrict(r, inner) == restrict(s, inner));
  }
}

TEST_CASE("distance matrix CSV") {
  const auto s = parse_distance_matrix("0,2\n2,0\n");
  CHECK(s.size() == 2);
  CHECK(s(0, 1) == 2.0);
  CHECK_THROWS_AS(parse_distance_matrix("0,1,2\n1,0,1\n"), DataError);
}
