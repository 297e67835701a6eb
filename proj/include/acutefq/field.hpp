#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "acutefq/errors.hpp"

namespace acutefq {

/// Quadratic-character classification of a field element.
/// Residue means a nonzero square; Zero is kept separate on purpose.
enum class QrClass : std::uint8_t { Zero = 0, Residue = 1, NonResidue = 2 };

const char* to_string(QrClass c);

/// Element of F_q in canonical form. The code of an element with reduced
/// coefficients (c_0, ..., c_{k-1}) in the polynomial basis is
/// sum_i c_i * p^i, so codes run over [0, q) and code order equals
/// lexicographic order on coefficient vectors read from the highest
/// degree down. For k = 1 the code is just the residue in [0, p).
struct Elem {
  std::int64_t code = 0;

  friend constexpr bool operator==(Elem a, Elem b) { return a.code == b.code; }
  friend constexpr auto operator<=>(Elem a, Elem b) { return a.code <=> b.code; }
};

/// Arithmetic in F_q, q = p^k with p an odd prime. Immutable after
/// construction (including the optional residue table), safe to share
/// across threads. All arithmetic is exact; no floating point anywhere.
class Field {
 public:
  /// Largest supported q. Chosen so q*q and k*p*p stay well inside
  /// int64; larger q would risk silent overflow in products.
  static constexpr std::int64_t kMaxQ = (std::int64_t{1} << 31) - 1;

  /// Residue classification is table-backed for q up to this limit
  /// (one byte per element); above it the Euler criterion is used.
  static constexpr std::int64_t kDefaultQrTableLimit = std::int64_t{1} << 20;

  static constexpr int kMaxDegree = 32;

  /// For k > 1 with no modulus given, the monic irreducible of degree k
  /// with the smallest coefficient code is selected, so element
  /// encodings are reproducible across runs.
  Field(std::int64_t p, int k,
        std::optional<std::vector<std::int64_t>> modulus = std::nullopt,
        std::int64_t qr_table_limit = kDefaultQrTableLimit);

  std::int64_t p() const { return p_; }
  int k() const { return k_; }
  std::int64_t q() const { return q_; }

  /// Monic modulus polynomial, little-endian coefficients, length k+1.
  /// Empty for k == 1.
  const std::vector<std::int64_t>& modulus() const { return modulus_; }

  Elem zero() const { return Elem{0}; }
  Elem one() const { return Elem{1}; }

  Elem from_code(std::int64_t code) const;
  /// Reduces an arbitrary integer into the prime subfield.
  Elem from_int(std::int64_t v) const;
  Elem from_coeffs(const std::vector<std::int64_t>& coeffs) const;
  std::vector<std::int64_t> coeffs(Elem a) const;

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const;
  Elem inv(Elem a) const;
  Elem pow(Elem a, std::int64_t e) const;

  /// Tr(x) = x + x^p + ... + x^{p^(k-1)}, returned as an integer in [0, p).
  std::int64_t trace(Elem a) const;

  QrClass qr_class(Elem a) const;
  /// Euler-criterion path, never table-backed. Must agree with qr_class.
  QrClass qr_class_euler(Elem a) const;
  bool has_qr_table() const { return !qr_table_.empty(); }

  /// Nonresidue with the smallest element code.
  Elem smallest_nonresidue() const;

  bool same_field(const Field& other) const;

 private:
  void check(Elem a) const {
    if (a.code < 0 || a.code >= q_) {
      fail(Errc::FieldMismatch, "element code out of range for this field");
    }
  }
  void decode(std::int64_t code, std::int64_t* c) const;
  std::int64_t encode(const std::int64_t* c) const;
  void build_qr_table();

  std::int64_t p_ = 0;
  int k_ = 1;
  std::int64_t q_ = 0;
  std::vector<std::int64_t> modulus_;
  std::vector<std::uint8_t> qr_table_;
};

bool is_prime(std::int64_t n);

/// Decomposes a prime power q = p^k; throws InvalidArgument otherwise.
void factor_prime_power(std::int64_t q, std::int64_t& p, int& k);

}  // namespace acutefq
