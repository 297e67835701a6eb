#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "acutefq/geometry.hpp"

namespace acutefq {

using Complex = std::complex<double>;

/// |character value| = 1 must hold to this tolerance; same for other
/// structural single-sum facts.
inline constexpr double kStructuralTol = 1e-9;
/// Tolerance for composite identities (sums of many character terms).
inline constexpr double kCompositeTol = 1e-6;

/// psi_t(x) = e^(2 pi i Tr(t x) / p). t = 0 is the principal character;
/// t runs over all of F_q, enumerating every additive character once.
Complex psi_eval(const Field& f, Elem t, Elem x);

/// Sum over all additive characters of psi(z): q at z = 0, else 0.
Complex orthogonality_sum(const Field& f, Elem z);

/// G_psi(alpha) = sum_z psi_t(alpha z^2), evaluated literally.
Complex gauss_sum(const Field& f, Elem t, Elem alpha);

/// Triple character sum over ordered triples (repeats included):
/// sum_{u,v,w in Z} psi_t(delta(u,v,w)).
Complex s_sum(const Field& f, Elem t, const PointSet& zs);

/// Upper bound for |s_sum|^2 at a nonprincipal character:
/// #Z q^n sum over quadruples with v+w = x+y of psi_t(2(v.w - x.y)),
/// computed by bucketing ordered pairs on their coordinate sum, never
/// enumerating all quadruples. The value is structurally real.
double s_sum_square_bound(const Field& f, Elem t, const PointSet& zs);

struct TripleCount {
  std::int64_t total = 0;
  std::int64_t degenerate = 0;  // u = v or u = w
  std::int64_t equal_vw = 0;    // v = w but u != v
  std::int64_t distinct = 0;    // pairwise distinct
};

/// Exact number of solutions (u,v,w,z) in Z^3 x F_q of
/// delta(u,v,w) = alpha z^2, with per-pattern breakdown.
/// Requires alpha to classify NonResidue.
TripleCount t_count(const PointSet& zs, Elem alpha);

/// The same count through characters:
/// (1/q) sum_t gauss_sum(t, -alpha) s_sum(t, Z). Returns the real part.
double t_identity(const PointSet& zs, Elem alpha);

/// Sum over nonprincipal characters of |s_sum|.
double r_value(const PointSet& zs);

/// Exact number of quadruples (v,w,x,y) in Z^4 with v+w = x+y and
/// v.w = x.y, computed by bucketing on the coordinate sum.
std::int64_t w_count(const PointSet& zs);

/// Integer-valued quadratic-character sum over ordered triples.
std::int64_t chi_sum(const PointSet& zs);

/// #Z sum_{v,w,x,y in Z} sum_{u in F_q^n} chi(delta(u,v,w) delta(u,x,y)).
/// Guarded: throws BudgetExceeded when q^n |Z|^4 exceeds op_budget.
std::int64_t chi_rhs(const PointSet& zs, std::uint64_t op_budget);

struct CheckResult {
  std::string name;
  bool pass = false;
  bool skipped = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
};

struct SumReportOptions {
  std::optional<Elem> alpha;  // default: smallest nonresidue of the field
  std::uint64_t quad_budget = 50'000'000;
  unsigned threads = 0;  // 0 = all cores
  /// Self-test hook: negates the character-identity value for T before
  /// the checks run, which must trip the identity checker.
  bool corrupt_t_identity = false;
};

/// One experiment record over a fixed set: all per-character sums, the
/// counting quantities, and the identity/inequality checks with their
/// residuals. Everything needed to reproduce it is carried alongside.
struct SumReport {
  std::int64_t p = 0;
  int k = 1;
  std::vector<std::int64_t> modulus;
  std::int64_t q = 0;
  int n = 0;
  std::size_t set_size = 0;
  std::uint64_t set_hash = 0;
  Elem alpha{};
  std::vector<Complex> s_psi;           // indexed by character code t
  std::vector<double> s_square_bound;   // t >= 1; slot 0 unused
  double r = 0.0;
  TripleCount t;
  double t_id = 0.0;
  double t_id_imag = 0.0;
  std::int64_t w = 0;
  std::int64_t chi = 0;
  std::optional<std::int64_t> chi_bound;  // absent when the budget was exceeded
  std::vector<CheckResult> checks;
  bool identities_ok = true;
};

SumReport make_sum_report(const PointSet& zs, const SumReportOptions& opt = {});

}  // namespace acutefq
