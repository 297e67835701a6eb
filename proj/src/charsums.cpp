#include "acutefq/charsums.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "acutefq/parallel.hpp"

namespace acutefq {

namespace {

Complex unit_root(std::int64_t m, std::int64_t p) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(p);
  return {std::cos(angle), std::sin(angle)};
}

constexpr std::int64_t kMaxBasisQ = std::int64_t{1} << 22;

// Precomputed trace table and p-th roots of unity: psi_t(x) becomes two
// table lookups around one field multiplication.
struct CharBasis {
  const Field* f = nullptr;
  std::vector<std::int32_t> tr;
  std::vector<Complex> root;

  explicit CharBasis(const Field& field) : f(&field) {
    if (field.q() > kMaxBasisQ) {
      fail(Errc::SpaceTooLarge, "q too large for character-sum tables");
    }
    tr.resize(static_cast<std::size_t>(field.q()));
    for (std::int64_t c = 0; c < field.q(); ++c) {
      tr[static_cast<std::size_t>(c)] = static_cast<std::int32_t>(field.trace(Elem{c}));
    }
    root.resize(static_cast<std::size_t>(field.p()));
    for (std::int64_t m = 0; m < field.p(); ++m) {
      root[static_cast<std::size_t>(m)] = unit_root(m, field.p());
    }
  }

  Complex psi(Elem t, Elem x) const {
    return root[static_cast<std::size_t>(tr[static_cast<std::size_t>(f->mul(t, x).code)])];
  }
};

// Counts of delta values over ordered triples of the set, split by the
// point-repetition pattern. Triples with u = v or u = w always have
// delta = 0, so a scalar count suffices for them.
struct DeltaHists {
  std::vector<std::int64_t> full;
  std::vector<std::int64_t> equal_vw;
  std::vector<std::int64_t> distinct;
  std::int64_t degenerate = 0;

  explicit DeltaHists(const PointSet& zs) {
    const Field& f = zs.field();
    const std::size_t s = zs.size();
    full.assign(static_cast<std::size_t>(f.q()), 0);
    equal_vw.assign(static_cast<std::size_t>(f.q()), 0);
    distinct.assign(static_cast<std::size_t>(f.q()), 0);
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t j = 0; j < s; ++j) {
        for (std::size_t l = 0; l < s; ++l) {
          if (i == j || i == l) {
            ++degenerate;
            ++full[0];
            continue;
          }
          const auto d = static_cast<std::size_t>(delta_dot(f, zs[i], zs[j], zs[l]).code);
          ++full[d];
          if (j == l) {
            ++equal_vw[d];
          } else {
            ++distinct[d];
          }
        }
      }
    }
  }
};

// Ordered pairs (v, w) grouped by the coordinate sum v + w; each bucket
// stores the codes of 2 (v . w).
std::map<std::vector<std::int64_t>, std::vector<std::int64_t>> pair_buckets(const PointSet& zs) {
  const Field& f = zs.field();
  std::map<std::vector<std::int64_t>, std::vector<std::int64_t>> buckets;
  const std::size_t s = zs.size();
  std::vector<std::int64_t> key(static_cast<std::size_t>(zs.n()));
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      for (int c = 0; c < zs.n(); ++c) {
        key[static_cast<std::size_t>(c)] =
            f.add(zs[i][static_cast<std::size_t>(c)], zs[j][static_cast<std::size_t>(c)]).code;
      }
      const Elem prod = inner(f, zs[i], zs[j]);
      buckets[key].push_back(f.add(prod, prod).code);
    }
  }
  return buckets;
}

std::int64_t solutions_of_alpha_z_square(const Field& f, Elem d, Elem inv_alpha) {
  if (d.code == 0) return 1;
  return f.qr_class(f.mul(d, inv_alpha)) == QrClass::Residue ? 2 : 0;
}

int chi_of(const Field& f, Elem d) {
  switch (f.qr_class(d)) {
    case QrClass::Zero: return 0;
    case QrClass::Residue: return 1;
    case QrClass::NonResidue: return -1;
  }
  return 0;
}

double pow_double(std::int64_t base, int exp) {
  double v = 1.0;
  for (int i = 0; i < exp; ++i) v *= static_cast<double>(base);
  return v;
}

void require_nonresidue(const Field& f, Elem alpha) {
  if (f.qr_class(alpha) != QrClass::NonResidue) {
    fail(Errc::AlphaNotNonResidue, "alpha must be a quadratic nonresidue");
  }
}

}  // namespace

Complex psi_eval(const Field& f, Elem t, Elem x) { return unit_root(f.trace(f.mul(t, x)), f.p()); }

Complex orthogonality_sum(const Field& f, Elem z) {
  Complex acc{0.0, 0.0};
  for (std::int64_t t = 0; t < f.q(); ++t) acc += psi_eval(f, Elem{t}, z);
  return acc;
}

Complex gauss_sum(const Field& f, Elem t, Elem alpha) {
  Complex acc{0.0, 0.0};
  for (std::int64_t z = 0; z < f.q(); ++z) {
    const Elem zz = f.mul(Elem{z}, Elem{z});
    acc += psi_eval(f, t, f.mul(alpha, zz));
  }
  return acc;
}

Complex s_sum(const Field& f, Elem t, const PointSet& zs) {
  Complex acc{0.0, 0.0};
  const std::size_t s = zs.size();
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      for (std::size_t l = 0; l < s; ++l) {
        acc += psi_eval(f, t, delta_dot(f, zs[i], zs[j], zs[l]));
      }
    }
  }
  return acc;
}

double s_sum_square_bound(const Field& f, Elem t, const PointSet& zs) {
  if (t.code == 0) fail(Errc::PrincipalCharacter, "bound requires a nonprincipal character");
  const CharBasis basis(f);
  const auto buckets = pair_buckets(zs);
  double acc = 0.0;
  for (const auto& [key, prods] : buckets) {
    Complex inner_sum{0.0, 0.0};
    for (std::int64_t c : prods) inner_sum += basis.psi(t, Elem{c});
    acc += std::norm(inner_sum);
  }
  return static_cast<double>(zs.size()) * pow_double(f.q(), zs.n()) * acc;
}

TripleCount t_count(const PointSet& zs, Elem alpha) {
  const Field& f = zs.field();
  require_nonresidue(f, alpha);
  const Elem ia = f.inv(alpha);
  TripleCount out;
  const DeltaHists hists(zs);
  out.degenerate = hists.degenerate;  // each contributes exactly z = 0
  for (std::int64_t d = 0; d < f.q(); ++d) {
    const std::int64_t sols = solutions_of_alpha_z_square(f, Elem{d}, ia);
    if (sols == 0) continue;
    out.equal_vw += hists.equal_vw[static_cast<std::size_t>(d)] * sols;
    out.distinct += hists.distinct[static_cast<std::size_t>(d)] * sols;
  }
  out.total = out.degenerate + out.equal_vw + out.distinct;
  return out;
}

double t_identity(const PointSet& zs, Elem alpha) {
  const Field& f = zs.field();
  require_nonresidue(f, alpha);
  const CharBasis basis(f);
  const DeltaHists hists(zs);
  const Elem neg_alpha = f.neg(alpha);
  Complex acc{0.0, 0.0};
  for (std::int64_t t = 0; t < f.q(); ++t) {
    Complex g{0.0, 0.0};
    for (std::int64_t z = 0; z < f.q(); ++z) {
      g += basis.psi(Elem{t}, f.mul(neg_alpha, f.mul(Elem{z}, Elem{z})));
    }
    Complex s{0.0, 0.0};
    for (std::int64_t d = 0; d < f.q(); ++d) {
      const std::int64_t c = hists.full[static_cast<std::size_t>(d)];
      if (c != 0) s += static_cast<double>(c) * basis.psi(Elem{t}, Elem{d});
    }
    acc += g * s;
  }
  acc /= static_cast<double>(f.q());
  return acc.real();
}

double r_value(const PointSet& zs) {
  const Field& f = zs.field();
  const CharBasis basis(f);
  const DeltaHists hists(zs);
  double acc = 0.0;
  for (std::int64_t t = 1; t < f.q(); ++t) {
    Complex s{0.0, 0.0};
    for (std::int64_t d = 0; d < f.q(); ++d) {
      const std::int64_t c = hists.full[static_cast<std::size_t>(d)];
      if (c != 0) s += static_cast<double>(c) * basis.psi(Elem{t}, Elem{d});
    }
    acc += std::abs(s);
  }
  return acc;
}

std::int64_t w_count(const PointSet& zs) {
  const auto buckets = pair_buckets(zs);
  std::int64_t total = 0;
  std::map<std::int64_t, std::int64_t> per_product;
  for (const auto& [key, prods] : buckets) {
    per_product.clear();
    for (std::int64_t c : prods) ++per_product[c];
    for (const auto& [c, count] : per_product) total += count * count;
  }
  return total;
}

std::int64_t chi_sum(const PointSet& zs) {
  const Field& f = zs.field();
  const DeltaHists hists(zs);
  std::int64_t acc = 0;
  for (std::int64_t d = 1; d < f.q(); ++d) {
    const std::int64_t c = hists.full[static_cast<std::size_t>(d)];
    if (c != 0) acc += c * chi_of(f, Elem{d});
  }
  return acc;
}

std::int64_t chi_rhs(const PointSet& zs, std::uint64_t op_budget) {
  const Field& f = zs.field();
  const std::size_t s = zs.size();
  if (s == 0) return 0;
  const int n = zs.n();
  // space size q^n with saturation
  unsigned __int128 space = 1;
  for (int i = 0; i < n; ++i) space *= static_cast<unsigned __int128>(f.q());
  const unsigned __int128 s4 = static_cast<unsigned __int128>(s) * s * s * s;
  if (space * s4 > static_cast<unsigned __int128>(op_budget)) {
    fail(Errc::BudgetExceeded, "q^n |Z|^4 exceeds the quadruple budget");
  }
  // sum over u of (sum_{v,w} chi(delta(u,v,w)))^2, times #Z; identical to
  // the literal quadruple sum because the square expands to (x,y) pairs.
  const auto total = static_cast<std::int64_t>(space);
  Point u(static_cast<std::size_t>(n), Elem{0});
  std::int64_t acc = 0;
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::int64_t rest = idx;
    for (int c = n - 1; c >= 0; --c) {
      u[static_cast<std::size_t>(c)] = Elem{rest % f.q()};
      rest /= f.q();
    }
    std::int64_t inner_acc = 0;
    for (std::size_t j = 0; j < s; ++j) {
      for (std::size_t l = 0; l < s; ++l) {
        inner_acc += chi_of(f, delta_dot(f, u, zs[j], zs[l]));
      }
    }
    acc += inner_acc * inner_acc;
  }
  return static_cast<std::int64_t>(s) * acc;
}

SumReport make_sum_report(const PointSet& zs, const SumReportOptions& opt) {
  const Field& f = zs.field();
  SumReport rep;
  rep.p = f.p();
  rep.k = f.k();
  rep.modulus = f.modulus();
  rep.q = f.q();
  rep.n = zs.n();
  rep.set_size = zs.size();
  rep.set_hash = zs.canonical_hash();
  rep.alpha = opt.alpha.value_or(f.smallest_nonresidue());
  require_nonresidue(f, rep.alpha);

  const CharBasis basis(f);
  const DeltaHists hists(zs);
  const auto buckets = pair_buckets(zs);
  const std::size_t qsz = static_cast<std::size_t>(f.q());
  const double s = static_cast<double>(zs.size());
  const double qn = pow_double(f.q(), zs.n());

  // sparse (delta, count) pairs drive every per-character sum
  std::vector<std::pair<std::int64_t, double>> delta_weights;
  for (std::int64_t d = 0; d < f.q(); ++d) {
    const std::int64_t c = hists.full[static_cast<std::size_t>(d)];
    if (c != 0) delta_weights.emplace_back(d, static_cast<double>(c));
  }

  rep.s_psi.assign(qsz, Complex{0.0, 0.0});
  rep.s_square_bound.assign(qsz, 0.0);
  std::vector<Complex> gauss(qsz, Complex{0.0, 0.0});
  const Elem neg_alpha = f.neg(rep.alpha);

  parallel_for(qsz, opt.threads, [&](std::size_t ti) {
    const Elem t{static_cast<std::int64_t>(ti)};
    Complex sv{0.0, 0.0};
    for (const auto& [d, c] : delta_weights) sv += c * basis.psi(t, Elem{d});
    rep.s_psi[ti] = sv;

    Complex g{0.0, 0.0};
    for (std::int64_t z = 0; z < f.q(); ++z) {
      g += basis.psi(t, f.mul(neg_alpha, f.mul(Elem{z}, Elem{z})));
    }
    gauss[ti] = g;

    if (ti != 0) {
      double bound = 0.0;
      for (const auto& [key, prods] : buckets) {
        Complex a{0.0, 0.0};
        for (std::int64_t c : prods) a += basis.psi(t, Elem{c});
        bound += std::norm(a);
      }
      rep.s_square_bound[ti] = s * qn * bound;
    }
  });

  rep.r = 0.0;
  for (std::size_t ti = 1; ti < qsz; ++ti) rep.r += std::abs(rep.s_psi[ti]);

  rep.t = t_count(zs, rep.alpha);

  Complex tid{0.0, 0.0};
  for (std::size_t ti = 0; ti < qsz; ++ti) tid += gauss[ti] * rep.s_psi[ti];
  tid /= static_cast<double>(f.q());
  if (opt.corrupt_t_identity) tid = -tid - Complex{1.0, 0.0};
  rep.t_id = tid.real();
  rep.t_id_imag = tid.imag();

  rep.w = w_count(zs);
  rep.chi = chi_sum(zs);
  try {
    rep.chi_bound = chi_rhs(zs, opt.quad_budget);
  } catch (const Error& e) {
    if (e.code() != Errc::BudgetExceeded) throw;
    rep.chi_bound = std::nullopt;
  }

  // identity and inequality checks; these hold for every input, so a
  // failure signals a defect in the build rather than in the data
  const double cube = s * s * s;
  auto add_check = [&rep](CheckResult c) {
    if (!c.skipped && !c.pass) rep.identities_ok = false;
    rep.checks.push_back(std::move(c));
  };

  {
    CheckResult c{.name = "principal_s_sum_cube"};
    c.lhs = rep.s_psi[0].real();
    c.rhs = cube;
    c.tolerance = kStructuralTol * std::max(1.0, cube);
    c.pass = std::abs(c.lhs - c.rhs) <= c.tolerance && std::abs(rep.s_psi[0].imag()) <= c.tolerance;
    add_check(std::move(c));
  }
  {
    CheckResult c{.name = "s_sum_square_bound"};
    c.tolerance = kCompositeTol;
    c.pass = true;
    double worst = -1.0;
    for (std::size_t ti = 1; ti < qsz; ++ti) {
      const double lhs = std::norm(rep.s_psi[ti]);
      const double rhs = rep.s_square_bound[ti];
      if (lhs - rhs > worst) {
        worst = lhs - rhs;
        c.lhs = lhs;
        c.rhs = rhs;
      }
      if (lhs > rhs + c.tolerance) c.pass = false;
    }
    add_check(std::move(c));
  }
  {
    CheckResult c{.name = "s_sum_coarse_bound"};
    c.tolerance = kCompositeTol;
    c.pass = true;
    const double coarse = s * s * std::sqrt(qn);
    c.rhs = coarse;
    for (std::size_t ti = 1; ti < qsz; ++ti) {
      const double lhs = std::abs(rep.s_psi[ti]);
      c.lhs = std::max(c.lhs, lhs);
      if (lhs > coarse + c.tolerance) c.pass = false;
    }
    add_check(std::move(c));
  }
  {
    CheckResult c{.name = "t_identity_real"};
    c.lhs = std::abs(rep.t_id_imag);
    c.rhs = 0.0;
    c.tolerance = kCompositeTol * std::max(1.0, std::abs(rep.t_id));
    c.pass = c.lhs <= c.tolerance;
    add_check(std::move(c));
  }
  {
    CheckResult c{.name = "t_count_matches_identity"};
    c.lhs = static_cast<double>(rep.t.total);
    c.rhs = rep.t_id;
    c.tolerance = kCompositeTol * std::max(1.0, static_cast<double>(rep.t.total));
    c.pass = std::abs(c.lhs - c.rhs) <= c.tolerance;
    add_check(std::move(c));
  }
  {
    CheckResult c{.name = "t_deviation_bound"};
    c.lhs = std::abs(static_cast<double>(rep.t.total) - cube);
    c.rhs = rep.r / std::sqrt(static_cast<double>(f.q()));
    c.tolerance = kCompositeTol;
    c.pass = c.lhs <= c.rhs + c.tolerance;
    add_check(std::move(c));
  }
  {
    CheckResult c{.name = "r_square_vs_w"};
    c.lhs = rep.r * rep.r;
    c.rhs = s * pow_double(f.q(), zs.n() + 2) * static_cast<double>(rep.w);
    c.tolerance = kCompositeTol + 1e-9 * c.rhs;
    c.pass = c.lhs <= c.rhs + c.tolerance;
    add_check(std::move(c));
  }
  if (zs.n() == 2) {
    CheckResult c{.name = "w_pair_bound"};
    c.lhs = static_cast<double>(rep.w);
    c.rhs = 2.0 * s * s * static_cast<double>(f.q());
    c.tolerance = 0.0;
    c.pass = rep.w <= static_cast<std::int64_t>(2 * zs.size() * zs.size()) * f.q();
    add_check(std::move(c));
  }
  {
    CheckResult c{.name = "chi_square_bound"};
    if (rep.chi_bound.has_value()) {
      c.lhs = static_cast<double>(rep.chi) * static_cast<double>(rep.chi);
      c.rhs = static_cast<double>(*rep.chi_bound);
      c.tolerance = 0.0;
      c.pass = static_cast<__int128>(rep.chi) * rep.chi <= static_cast<__int128>(*rep.chi_bound);
    } else {
      c.skipped = true;
      c.pass = true;
    }
    add_check(std::move(c));
  }

  return rep;
}

}  // namespace acutefq
