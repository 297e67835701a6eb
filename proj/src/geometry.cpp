#include "acutefq/geometry.hpp"

#include <string>

namespace acutefq {

namespace {

void check_dims(const Point& a, const Point& b) {
  if (a.size() != b.size()) {
    fail(Errc::DimensionMismatch, "points have dimensions " + std::to_string(a.size()) + " and " +
                                      std::to_string(b.size()));
  }
}

}  // namespace

PointSet::PointSet(std::shared_ptr<const Field> field, int n) : field_(std::move(field)), n_(n) {
  if (!field_) fail(Errc::InvalidArgument, "null field");
  if (n_ < 1) fail(Errc::DimensionMismatch, "dimension must be at least 1");
}

std::vector<std::int64_t> PointSet::key_of(const Point& pt) const {
  std::vector<std::int64_t> key;
  key.reserve(pt.size());
  for (const Elem& e : pt) key.push_back(e.code);
  return key;
}

void PointSet::insert(Point pt) {
  if (static_cast<int>(pt.size()) != n_) {
    fail(Errc::DimensionMismatch, "point has " + std::to_string(pt.size()) +
                                      " coordinates, set dimension is " + std::to_string(n_));
  }
  for (const Elem& e : pt) field_->from_code(e.code);  // range-validates
  auto key = key_of(pt);
  if (!index_.insert(std::move(key)).second) {
    fail(Errc::DuplicatePoint, "point already present in the set");
  }
  pts_.push_back(std::move(pt));
}

bool PointSet::contains(const Point& pt) const { return index_.count(key_of(pt)) > 0; }

std::uint64_t PointSet::canonical_hash() const {
  // FNV-1a over the field description and the sorted point keys.
  constexpr std::uint64_t kOffset = 1469598103934665603ULL;
  constexpr std::uint64_t kPrime = 1099511628211ULL;
  std::uint64_t h = kOffset;
  auto mix = [&h](std::int64_t v) {
    auto u = static_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
      h ^= (u >> (8 * i)) & 0xffU;
      h *= kPrime;
    }
  };
  mix(field_->p());
  mix(field_->k());
  for (std::int64_t c : field_->modulus()) mix(c);
  mix(n_);
  for (const auto& key : index_) {
    for (std::int64_t c : key) mix(c);
  }
  return h;
}

Elem inner(const Field& f, const Point& a, const Point& b) {
  check_dims(a, b);
  Elem acc = f.zero();
  for (std::size_t i = 0; i < a.size(); ++i) acc = f.add(acc, f.mul(a[i], b[i]));
  return acc;
}

Elem delta_sum(const Field& f, const Point& u, const Point& v, const Point& w) {
  check_dims(u, v);
  check_dims(u, w);
  Elem acc = f.zero();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Elem uv = f.sub(u[i], v[i]);
    const Elem uw = f.sub(u[i], w[i]);
    const Elem vw = f.sub(v[i], w[i]);
    acc = f.add(acc, f.add(f.mul(uv, uv), f.sub(f.mul(uw, uw), f.mul(vw, vw))));
  }
  return acc;
}

Elem delta_dot(const Field& f, const Point& u, const Point& v, const Point& w) {
  check_dims(u, v);
  check_dims(u, w);
  Elem acc = f.zero();
  for (std::size_t i = 0; i < u.size(); ++i) {
    acc = f.add(acc, f.mul(f.sub(u[i], v[i]), f.sub(u[i], w[i])));
  }
  return f.add(acc, acc);
}

QrClass vertex_class(const Field& f, const Point& u, const Point& v, const Point& w) {
  return f.qr_class(delta_dot(f, u, v, w));
}

bool triple_is_acute(const Field& f, const Point& u, const Point& v, const Point& w) {
  if (u == v || u == w || v == w) {
    fail(Errc::DegenerateTriple, "triple contains a repeated point");
  }
  return vertex_class(f, u, v, w) == QrClass::Residue &&
         vertex_class(f, v, u, w) == QrClass::Residue &&
         vertex_class(f, w, u, v) == QrClass::Residue;
}

AcuteOutcome set_is_acute(const PointSet& zs) {
  AcuteOutcome out;
  const Field& f = zs.field();
  const std::size_t s = zs.size();
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = i + 1; j < s; ++j) {
      for (std::size_t l = j + 1; l < s; ++l) {
        ++out.triples_checked;
        if (!triple_is_acute(f, zs[i], zs[j], zs[l])) {
          out.acute = false;
          out.violation = {i, j, l};
          return out;
        }
      }
    }
  }
  return out;
}

}  // namespace acutefq
