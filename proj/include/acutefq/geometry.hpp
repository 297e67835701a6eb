#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "acutefq/field.hpp"

namespace acutefq {

using Point = std::vector<Elem>;

/// Ordered list of pairwise-distinct points of F_q^n. Distinctness is a
/// structural invariant: duplicates are rejected on insert and on load.
class PointSet {
 public:
  PointSet(std::shared_ptr<const Field> field, int n);

  const Field& field() const { return *field_; }
  const std::shared_ptr<const Field>& field_ptr() const { return field_; }
  int n() const { return n_; }
  std::size_t size() const { return pts_.size(); }
  bool empty() const { return pts_.empty(); }
  const Point& operator[](std::size_t i) const { return pts_[i]; }
  const std::vector<Point>& points() const { return pts_; }

  void insert(Point pt);
  bool contains(const Point& pt) const;

  /// Order-independent identity hash over (p, k, modulus, n, sorted points).
  std::uint64_t canonical_hash() const;

 private:
  std::vector<std::int64_t> key_of(const Point& pt) const;

  std::shared_ptr<const Field> field_;
  int n_;
  std::vector<Point> pts_;
  std::set<std::vector<std::int64_t>> index_;
};

Elem inner(const Field& f, const Point& a, const Point& b);

/// Vertex form at u, coordinate expansion:
/// sum_i (u_i - v_i)^2 + (u_i - w_i)^2 - (v_i - w_i)^2.
Elem delta_sum(const Field& f, const Point& u, const Point& v, const Point& w);

/// Same quantity factored as 2 (u - v) . (u - w).
Elem delta_dot(const Field& f, const Point& u, const Point& v, const Point& w);

/// Residue <=> acute vertex at u, Zero <=> right angle, NonResidue otherwise.
QrClass vertex_class(const Field& f, const Point& u, const Point& v, const Point& w);

/// All three vertices classify Residue. Throws DegenerateTriple if any
/// two of the points coincide.
bool triple_is_acute(const Field& f, const Point& u, const Point& v, const Point& w);

struct AcuteOutcome {
  bool acute = true;
  /// Lexicographically first violating index triple (i < j < l), if any.
  std::optional<std::array<std::size_t, 3>> violation;
  std::uint64_t triples_checked = 0;
};

AcuteOutcome set_is_acute(const PointSet& zs);

}  // namespace acutefq
