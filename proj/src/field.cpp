#include "acutefq/field.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace acutefq {

const char* to_string(QrClass c) {
  switch (c) {
    case QrClass::Zero: return "Zero";
    case QrClass::Residue: return "Residue";
    case QrClass::NonResidue: return "NonResidue";
  }
  return "?";
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::int64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

void factor_prime_power(std::int64_t q, std::int64_t& p, int& k) {
  if (q < 2) fail(Errc::InvalidArgument, "q must be at least 2");
  std::int64_t base = q;
  for (std::int64_t d = 2; d * d <= base; ++d) {
    if (base % d == 0) {
      base = d;
      break;
    }
  }
  p = base;
  k = 0;
  std::int64_t acc = 1;
  while (acc < q) {
    acc *= p;
    ++k;
  }
  if (acc != q) fail(Errc::InvalidArgument, "q = " + std::to_string(q) + " is not a prime power");
}

namespace {

// Little-endian polynomial helpers over F_p. Degree = index of the last
// nonzero coefficient; the all-zero polynomial has degree -1.
int poly_degree(const std::vector<std::int64_t>& f) {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i) {
    if (f[static_cast<std::size_t>(i)] != 0) return i;
  }
  return -1;
}

std::int64_t poly_eval(const std::vector<std::int64_t>& f, std::int64_t x, std::int64_t p) {
  std::int64_t v = 0;
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i) {
    v = (v * x + f[static_cast<std::size_t>(i)]) % p;
  }
  return v;
}

// Remainder of f by a monic divisor g.
std::vector<std::int64_t> poly_rem(std::vector<std::int64_t> f, const std::vector<std::int64_t>& g,
                                   std::int64_t p) {
  const int dg = poly_degree(g);
  for (int i = poly_degree(f); i >= dg; --i) {
    const std::int64_t c = f[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    for (int j = 0; j <= dg; ++j) {
      auto& slot = f[static_cast<std::size_t>(i - dg + j)];
      slot = ((slot - c * g[static_cast<std::size_t>(j)]) % p + p) % p;
    }
  }
  return f;
}

// Irreducibility over F_p by trial division: roots for degree 1 factors,
// then every monic divisor of degree 2..k/2. Fine at the supported sizes
// since p^(k/2) <= sqrt(q).
bool poly_irreducible(const std::vector<std::int64_t>& f, std::int64_t p, int k) {
  if (k == 1) return true;
  for (std::int64_t x = 0; x < p; ++x) {
    if (poly_eval(f, x, p) == 0) return false;
  }
  for (int d = 2; 2 * d <= k; ++d) {
    std::vector<std::int64_t> g(static_cast<std::size_t>(d) + 1, 0);
    g[static_cast<std::size_t>(d)] = 1;
    // iterate non-leading coefficients as a base-p counter
    while (true) {
      if (poly_degree(poly_rem(f, g, p)) < 0) return false;
      int i = 0;
      while (i < d && ++g[static_cast<std::size_t>(i)] == p) {
        g[static_cast<std::size_t>(i)] = 0;
        ++i;
      }
      if (i == d) break;
    }
  }
  return true;
}

std::vector<std::int64_t> smallest_irreducible(std::int64_t p, int k) {
  std::vector<std::int64_t> f(static_cast<std::size_t>(k) + 1, 0);
  f[static_cast<std::size_t>(k)] = 1;
  while (true) {
    if (poly_irreducible(f, p, k)) return f;
    int i = 0;
    while (i < k && ++f[static_cast<std::size_t>(i)] == p) {
      f[static_cast<std::size_t>(i)] = 0;
      ++i;
    }
    if (i == k) fail(Errc::ReduciblePolynomial, "no irreducible polynomial found");  // unreachable
  }
}

}  // namespace

Field::Field(std::int64_t p, int k, std::optional<std::vector<std::int64_t>> modulus,
             std::int64_t qr_table_limit)
    : p_(p), k_(k) {
  if (p == 2) fail(Errc::EvenCharacteristic, "characteristic 2 is not supported");
  if (!is_prime(p)) fail(Errc::NotPrime, "p = " + std::to_string(p) + " is not prime");
  if (k < 1 || k > kMaxDegree) fail(Errc::InvalidArgument, "extension degree out of range");

  q_ = 1;
  for (int i = 0; i < k; ++i) {
    if (q_ > kMaxQ / p) fail(Errc::FieldTooLarge, "p^k exceeds the supported cap 2^31 - 1");
    q_ *= p;
  }

  if (k == 1) {
    if (modulus.has_value()) {
      fail(Errc::InvalidArgument, "modulus polynomial is only meaningful for k > 1");
    }
  } else if (!modulus.has_value()) {
    modulus_ = smallest_irreducible(p_, k_);
  } else {
    modulus_ = std::move(*modulus);
    if (static_cast<int>(modulus_.size()) != k + 1) {
      fail(Errc::InvalidArgument, "modulus must have k+1 coefficients");
    }
    for (auto& c : modulus_) c = ((c % p) + p) % p;
    if (modulus_.back() != 1) fail(Errc::InvalidArgument, "modulus must be monic");
    if (!poly_irreducible(modulus_, p_, k_)) {
      fail(Errc::ReduciblePolynomial, "modulus is reducible over F_p");
    }
  }

  if (q_ <= qr_table_limit) build_qr_table();
}

void Field::decode(std::int64_t code, std::int64_t* c) const {
  for (int i = 0; i < k_; ++i) {
    c[i] = code % p_;
    code /= p_;
  }
}

std::int64_t Field::encode(const std::int64_t* c) const {
  std::int64_t code = 0;
  for (int i = k_ - 1; i >= 0; --i) code = code * p_ + c[i];
  return code;
}

Elem Field::from_code(std::int64_t code) const {
  Elem e{code};
  check(e);
  return e;
}

Elem Field::from_int(std::int64_t v) const { return Elem{((v % p_) + p_) % p_}; }

Elem Field::from_coeffs(const std::vector<std::int64_t>& coeffs) const {
  if (static_cast<int>(coeffs.size()) != k_) {
    fail(Errc::InvalidArgument, "expected " + std::to_string(k_) + " coefficients");
  }
  std::array<std::int64_t, kMaxDegree> c{};
  for (int i = 0; i < k_; ++i) {
    const std::int64_t v = coeffs[static_cast<std::size_t>(i)];
    if (v < 0 || v >= p_) fail(Errc::InvalidArgument, "coefficient not reduced into [0, p)");
    c[static_cast<std::size_t>(i)] = v;
  }
  return Elem{encode(c.data())};
}

std::vector<std::int64_t> Field::coeffs(Elem a) const {
  check(a);
  std::vector<std::int64_t> out(static_cast<std::size_t>(k_));
  decode(a.code, out.data());
  return out;
}

Elem Field::add(Elem a, Elem b) const {
  check(a);
  check(b);
  if (k_ == 1) return Elem{(a.code + b.code) % p_};
  std::array<std::int64_t, kMaxDegree> x{}, y{};
  decode(a.code, x.data());
  decode(b.code, y.data());
  for (int i = 0; i < k_; ++i) x[static_cast<std::size_t>(i)] = (x[static_cast<std::size_t>(i)] + y[static_cast<std::size_t>(i)]) % p_;
  return Elem{encode(x.data())};
}

Elem Field::sub(Elem a, Elem b) const {
  check(a);
  check(b);
  if (k_ == 1) return Elem{((a.code - b.code) % p_ + p_) % p_};
  std::array<std::int64_t, kMaxDegree> x{}, y{};
  decode(a.code, x.data());
  decode(b.code, y.data());
  for (int i = 0; i < k_; ++i) {
    x[static_cast<std::size_t>(i)] = ((x[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)]) % p_ + p_) % p_;
  }
  return Elem{encode(x.data())};
}

Elem Field::neg(Elem a) const { return sub(zero(), a); }

Elem Field::mul(Elem a, Elem b) const {
  check(a);
  check(b);
  if (k_ == 1) return Elem{(a.code * b.code) % p_};
  std::array<std::int64_t, kMaxDegree> x{}, y{};
  std::array<std::int64_t, 2 * kMaxDegree> c{};
  decode(a.code, x.data());
  decode(b.code, y.data());
  for (int i = 0; i < k_; ++i) {
    if (x[static_cast<std::size_t>(i)] == 0) continue;
    for (int j = 0; j < k_; ++j) {
      auto& slot = c[static_cast<std::size_t>(i + j)];
      slot = (slot + x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)]) % p_;
    }
  }
  // reduce by the monic modulus
  for (int i = 2 * k_ - 2; i >= k_; --i) {
    const std::int64_t top = c[static_cast<std::size_t>(i)];
    if (top == 0) continue;
    c[static_cast<std::size_t>(i)] = 0;
    for (int j = 0; j < k_; ++j) {
      auto& slot = c[static_cast<std::size_t>(i - k_ + j)];
      slot = ((slot - top * modulus_[static_cast<std::size_t>(j)]) % p_ + p_) % p_;
    }
  }
  return Elem{encode(c.data())};
}

Elem Field::pow(Elem a, std::int64_t e) const {
  check(a);
  if (e < 0) fail(Errc::InvalidArgument, "negative exponent");
  Elem r = one();
  Elem base = a;
  while (e > 0) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

Elem Field::inv(Elem a) const {
  check(a);
  if (a.code == 0) fail(Errc::DivisionByZero, "inverse of zero");
  return pow(a, q_ - 2);
}

std::int64_t Field::trace(Elem a) const {
  check(a);
  if (k_ == 1) return a.code;
  Elem acc = a;
  Elem frob = a;
  for (int i = 1; i < k_; ++i) {
    frob = pow(frob, p_);
    acc = add(acc, frob);
  }
  // the trace lands in the prime subfield, i.e. a constant polynomial
  return acc.code % p_;
}

void Field::build_qr_table() {
  qr_table_.assign(static_cast<std::size_t>(q_), static_cast<std::uint8_t>(QrClass::NonResidue));
  qr_table_[0] = static_cast<std::uint8_t>(QrClass::Zero);
  for (std::int64_t c = 1; c < q_; ++c) {
    const Elem sq = mul(Elem{c}, Elem{c});
    qr_table_[static_cast<std::size_t>(sq.code)] = static_cast<std::uint8_t>(QrClass::Residue);
  }
}

QrClass Field::qr_class(Elem a) const {
  check(a);
  if (!qr_table_.empty()) return static_cast<QrClass>(qr_table_[static_cast<std::size_t>(a.code)]);
  return qr_class_euler(a);
}

QrClass Field::qr_class_euler(Elem a) const {
  check(a);
  if (a.code == 0) return QrClass::Zero;
  const Elem r = pow(a, (q_ - 1) / 2);
  return r == one() ? QrClass::Residue : QrClass::NonResidue;
}

Elem Field::smallest_nonresidue() const {
  for (std::int64_t c = 1; c < q_; ++c) {
    if (qr_class(Elem{c}) == QrClass::NonResidue) return Elem{c};
  }
  fail(Errc::InvalidArgument, "no nonresidue found");  // unreachable for odd q > 1
}

bool Field::same_field(const Field& other) const {
  return p_ == other.p_ && k_ == other.k_ && modulus_ == other.modulus_;
}

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NotPrime: return "NotPrime";
    case Errc::EvenCharacteristic: return "EvenCharacteristic";
    case Errc::ReduciblePolynomial: return "ReduciblePolynomial";
    case Errc::FieldTooLarge: return "FieldTooLarge";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DegenerateTriple: return "DegenerateTriple";
    case Errc::DuplicatePoint: return "DuplicatePoint";
    case Errc::PrincipalCharacter: return "PrincipalCharacter";
    case Errc::AlphaNotNonResidue: return "AlphaNotNonResidue";
    case Errc::SpaceTooLarge: return "SpaceTooLarge";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace acutefq
