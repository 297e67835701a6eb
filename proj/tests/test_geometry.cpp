#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "acutefq/geometry.hpp"
#include "test_util.hpp"

using namespace acutefq;
using testutil::pt2;

namespace {

Point random_point(const Field& f, int n, std::mt19937_64& rng) {
  Point pt(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) {
    pt[static_cast<std::size_t>(c)] =
        Elem{static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(f.q()))};
  }
  return pt;
}

// squares-set route to the vertex classification, the test-side oracle
QrClass vertex_oracle(const Field& f, const std::set<std::int64_t>& squares, const Point& u,
                      const Point& v, const Point& w) {
  const Elem d = delta_sum(f, u, v, w);
  if (d.code == 0) return QrClass::Zero;
  return squares.count(d.code) ? QrClass::Residue : QrClass::NonResidue;
}

}  // namespace

TEST_CASE("inner product") {
  const Field f(7, 1);
  CHECK(inner(f, pt2(1, 0), pt2(0, 1)) == Elem{0});
  CHECK(inner(f, pt2(2, 3), pt2(2, 3)) == Elem{6});
  CHECK(inner(f, pt2(0, 0), pt2(5, 6)) == Elem{0});
  CHECK_THROWS_AS(inner(f, pt2(1, 0), Point{Elem{1}}), Error);
}

TEST_CASE("delta vanishes on repeated points and right angles") {
  const Field f(7, 1);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const Point u = random_point(f, 2, rng);
    const Point w = random_point(f, 2, rng);
    CHECK(delta_sum(f, u, u, w) == Elem{0});
    CHECK(delta_dot(f, u, w, u) == Elem{0});
  }
  CHECK(delta_sum(f, pt2(0, 0), pt2(1, 0), pt2(0, 1)) == Elem{0});  // right angle at the origin
}

TEST_CASE("delta worked examples") {
  const Field f(7, 1);
  // vertex at (0,0) against (1,0) and (1,6)
  CHECK(delta_sum(f, pt2(0, 0), pt2(1, 0), pt2(1, 6)) == Elem{2});
  CHECK(delta_dot(f, pt2(0, 0), pt2(1, 1), pt2(2, 3)) == Elem{3});  // 2((-1,-1).(-2,-3)) = 10
}

TEST_CASE("the two delta routes agree") {
  // exhaustive over all ordered triples of F_3^2
  const Field f3(3, 1);
  std::vector<Point> pts;
  for (std::int64_t a = 0; a < 3; ++a) {
    for (std::int64_t b = 0; b < 3; ++b) pts.push_back(pt2(a, b));
  }
  for (const auto& u : pts) {
    for (const auto& v : pts) {
      for (const auto& w : pts) CHECK(delta_sum(f3, u, v, w) == delta_dot(f3, u, v, w));
    }
  }

  // randomized across fields and dimensions
  std::mt19937_64 rng(7);
  for (const auto& [p, k] : testutil::odd_prime_powers(27)) {
    const Field f(p, k);
    for (int n = 1; n <= 4; ++n) {
      for (int i = 0; i < 50; ++i) {
        const Point u = random_point(f, n, rng);
        const Point v = random_point(f, n, rng);
        const Point w = random_point(f, n, rng);
        CHECK(delta_sum(f, u, v, w) == delta_dot(f, u, v, w));
      }
    }
  }
}

TEST_CASE("vertex classification") {
  const Field f7(7, 1);
  CHECK(vertex_class(f7, pt2(0, 0), pt2(1, 0), pt2(0, 1)) == QrClass::Zero);
  CHECK(vertex_class(f7, pt2(0, 0), pt2(1, 0), pt2(1, 1)) == QrClass::Residue);  // 2 = 3^2 mod 7
  const Field f5(5, 1);
  CHECK(vertex_class(f5, pt2(0, 0), pt2(1, 0), pt2(1, 1)) == QrClass::NonResidue);
}

TEST_CASE("triple acuteness") {
  const Field f(7, 1);
  // a right angle anywhere kills the triple
  CHECK_FALSE(triple_is_acute(f, pt2(0, 0), pt2(1, 0), pt2(0, 1)));
  // worked example: all three vertices classify Residue
  CHECK(vertex_class(f, pt2(0, 0), pt2(1, 0), pt2(4, 2)) == QrClass::Residue);
  CHECK(vertex_class(f, pt2(1, 0), pt2(0, 0), pt2(4, 2)) == QrClass::Residue);
  CHECK(vertex_class(f, pt2(4, 2), pt2(0, 0), pt2(1, 0)) == QrClass::Residue);
  CHECK(triple_is_acute(f, pt2(0, 0), pt2(1, 0), pt2(4, 2)));
  // collinear probe: delta at (1,0) is -2 = 5, a nonresidue mod 7
  CHECK(vertex_class(f, pt2(2, 0), pt2(0, 0), pt2(1, 0)) == QrClass::Residue);
  CHECK(vertex_class(f, pt2(1, 0), pt2(0, 0), pt2(2, 0)) == QrClass::NonResidue);
  CHECK_FALSE(triple_is_acute(f, pt2(0, 0), pt2(1, 0), pt2(2, 0)));
  CHECK_THROWS_AS(triple_is_acute(f, pt2(0, 0), pt2(0, 0), pt2(1, 0)), Error);
}

TEST_CASE("set_is_acute") {
  auto f = testutil::make_field(7);

  PointSet two(f, 2);
  two.insert(pt2(0, 0));
  two.insert(pt2(1, 0));
  CHECK(set_is_acute(two).acute);

  PointSet right(f, 2);
  right.insert(pt2(0, 0));
  right.insert(pt2(1, 0));
  right.insert(pt2(0, 1));
  const auto outcome = set_is_acute(right);
  CHECK_FALSE(outcome.acute);
  REQUIRE(outcome.violation.has_value());
  CHECK(*outcome.violation == std::array<std::size_t, 3>{0, 1, 2});

  // random sets match a brute triple enumeration through the other route
  const auto squares = testutil::squares_oracle(*f);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const PointSet zs = testutil::random_set(f, 2, 5, 1000 + seed);
    bool oracle = true;
    for (std::size_t i = 0; i < zs.size() && oracle; ++i) {
      for (std::size_t j = i + 1; j < zs.size() && oracle; ++j) {
        for (std::size_t l = j + 1; l < zs.size() && oracle; ++l) {
          oracle = vertex_oracle(*f, squares, zs[i], zs[j], zs[l]) == QrClass::Residue &&
                   vertex_oracle(*f, squares, zs[j], zs[i], zs[l]) == QrClass::Residue &&
                   vertex_oracle(*f, squares, zs[l], zs[i], zs[j]) == QrClass::Residue;
        }
      }
    }
    CHECK(set_is_acute(zs).acute == oracle);
  }
}

TEST_CASE("set_is_acute is order independent") {
  auto f = testutil::make_field(7);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const PointSet zs = testutil::random_set(f, 2, 6, 2000 + static_cast<std::uint64_t>(trial));
    const bool base = set_is_acute(zs).acute;
    std::vector<Point> perm = zs.points();
    for (int shuffle = 0; shuffle < 3; ++shuffle) {
      for (std::size_t i = perm.size(); i > 1; --i) {
        std::swap(perm[i - 1], perm[rng() % i]);
      }
      PointSet permuted(f, 2);
      for (const auto& pt : perm) permuted.insert(pt);
      CHECK(set_is_acute(permuted).acute == base);
    }
  }
}

TEST_CASE("delta symmetry, translation invariance, scaling covariance") {
  std::mt19937_64 rng(5);
  for (const auto& [p, k] : std::vector<std::pair<std::int64_t, int>>{{5, 1}, {7, 1}, {3, 2}}) {
    const Field f(p, k);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 2;
      const Point u = random_point(f, n, rng);
      const Point v = random_point(f, n, rng);
      const Point w = random_point(f, n, rng);
      CHECK(delta_sum(f, u, v, w) == delta_sum(f, u, w, v));

      const Point t = random_point(f, n, rng);
      auto shift = [&](const Point& a) {
        Point out(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) out[i] = f.add(a[i], t[i]);
        return out;
      };
      CHECK(delta_sum(f, shift(u), shift(v), shift(w)) == delta_sum(f, u, v, w));

      const Elem lambda{static_cast<std::int64_t>(1 + rng() % static_cast<std::uint64_t>(f.q() - 1))};
      auto scale = [&](const Point& a) {
        Point out(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) out[i] = f.mul(lambda, a[i]);
        return out;
      };
      const Elem scaled = delta_sum(f, scale(u), scale(v), scale(w));
      CHECK(scaled == f.mul(f.mul(lambda, lambda), delta_sum(f, u, v, w)));
      CHECK(vertex_class(f, scale(u), scale(v), scale(w)) == vertex_class(f, u, v, w));
    }
  }
}

TEST_CASE("three-vertex identity, exhaustive over F_5^2") {
  const Field f(5, 1);
  std::vector<Point> pts;
  for (std::int64_t a = 0; a < 5; ++a) {
    for (std::int64_t b = 0; b < 5; ++b) pts.push_back(pt2(a, b));
  }
  auto norm2 = [&](const Point& a, const Point& b) {
    const Point d{f.sub(a[0], b[0]), f.sub(a[1], b[1])};
    return inner(f, d, d);
  };
  for (const auto& u : pts) {
    for (const auto& v : pts) {
      for (const auto& w : pts) {
        const Elem lhs =
            f.add(delta_sum(f, u, v, w), f.add(delta_sum(f, v, u, w), delta_sum(f, w, u, v)));
        const Elem rhs = f.add(norm2(u, v), f.add(norm2(u, w), norm2(v, w)));
        CHECK(lhs == rhs);
      }
    }
  }
}

TEST_CASE("point set structural invariants") {
  auto f = testutil::make_field(7);
  PointSet zs(f, 2);
  zs.insert(pt2(1, 2));
  CHECK_THROWS_AS(zs.insert(pt2(1, 2)), Error);
  CHECK_THROWS_AS(zs.insert(Point{Elem{1}}), Error);
  CHECK_THROWS_AS(zs.insert(pt2(7, 0)), Error);
  CHECK(zs.contains(pt2(1, 2)));
  CHECK_FALSE(zs.contains(pt2(2, 1)));

  // canonical hash ignores insertion order but not the field
  PointSet a(f, 2), b(f, 2);
  a.insert(pt2(0, 0));
  a.insert(pt2(3, 4));
  b.insert(pt2(3, 4));
  b.insert(pt2(0, 0));
  CHECK(a.canonical_hash() == b.canonical_hash());

  auto f5 = testutil::make_field(5);
  PointSet c(f5, 2);
  c.insert(pt2(0, 0));
  c.insert(pt2(3, 4));
  CHECK(a.canonical_hash() != c.canonical_hash());
}
