#include "acutefq/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "acutefq/parallel.hpp"

namespace acutefq {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string int128_to_string(unsigned __int128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// Flat table of all points of F_q^n in canonical order: index i written
// base q with coordinate 0 as the most significant digit, so index order
// is lexicographic on coordinate vectors.
struct PointTable {
  std::vector<std::int64_t> codes;  // count * n
  std::size_t count = 0;
  int n = 1;

  const std::int64_t* at(std::size_t i) const { return codes.data() + i * static_cast<std::size_t>(n); }

  Point point(std::size_t i) const {
    Point pt(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) pt[static_cast<std::size_t>(c)] = Elem{at(i)[c]};
    return pt;
  }

  std::optional<std::size_t> index_of(const std::vector<std::int64_t>& pt_codes, std::int64_t q) const {
    if (static_cast<int>(pt_codes.size()) != n) return std::nullopt;
    std::size_t idx = 0;
    for (int c = 0; c < n; ++c) {
      const std::int64_t v = pt_codes[static_cast<std::size_t>(c)];
      if (v < 0 || v >= q) return std::nullopt;
      idx = idx * static_cast<std::size_t>(q) + static_cast<std::size_t>(v);
    }
    return idx;
  }
};

PointTable enumerate_points(const Field& f, int n, std::size_t cap) {
  if (n < 1 || n > 16) fail(Errc::DimensionMismatch, "dimension must be in [1, 16]");
  unsigned __int128 space = 1;
  for (int i = 0; i < n; ++i) space *= static_cast<unsigned __int128>(f.q());
  if (space > static_cast<unsigned __int128>(cap)) {
    fail(Errc::SpaceTooLarge, "q^n = " + int128_to_string(space) + " exceeds the cap " + std::to_string(cap));
  }
  PointTable t;
  t.n = n;
  t.count = static_cast<std::size_t>(space);
  t.codes.resize(t.count * static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < t.count; ++i) {
    std::size_t rest = i;
    for (int c = n - 1; c >= 0; --c) {
      t.codes[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(c)] =
          static_cast<std::int64_t>(rest % static_cast<std::size_t>(f.q()));
      rest /= static_cast<std::size_t>(f.q());
    }
  }
  return t;
}

QrClass vertex_class_flat(const Field& f, const std::int64_t* u, const std::int64_t* v,
                          const std::int64_t* w, int n) {
  Elem acc = f.zero();
  for (int c = 0; c < n; ++c) {
    acc = f.add(acc, f.mul(f.sub(Elem{u[c]}, Elem{v[c]}), f.sub(Elem{u[c]}, Elem{w[c]})));
  }
  return f.qr_class(f.add(acc, acc));
}

bool acute_triple_flat(const Field& f, const PointTable& t, std::size_t a, std::size_t b, std::size_t c) {
  const std::int64_t* pa = t.at(a);
  const std::int64_t* pb = t.at(b);
  const std::int64_t* pc = t.at(c);
  return vertex_class_flat(f, pa, pb, pc, t.n) == QrClass::Residue &&
         vertex_class_flat(f, pb, pa, pc, t.n) == QrClass::Residue &&
         vertex_class_flat(f, pc, pa, pb, t.n) == QrClass::Residue;
}

PointSet to_point_set(std::shared_ptr<const Field> field, const PointTable& t,
                      const std::vector<std::size_t>& indices) {
  PointSet zs(std::move(field), t.n);
  for (std::size_t i : indices) zs.insert(t.point(i));
  return zs;
}

void verify_witness(const std::shared_ptr<const Field>& field, const PointTable& t,
                    const std::vector<std::size_t>& indices) {
  if (!set_is_acute(to_point_set(field, t, indices)).acute) {
    fail(Errc::InvalidArgument, "internal error: search produced a non-acute witness");
  }
}

// Unbiased bounded draw with fully specified behavior, so reports do not
// depend on the standard library's distribution internals.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

}  // namespace

SearchReport max_acute_exact(std::shared_ptr<const Field> field, int n, const SearchOptions& opt,
                             const ExactCheckpoint* resume, std::optional<ExactCheckpoint>* out_checkpoint) {
  const auto start = Clock::now();
  const Field& f = *field;
  const PointTable table = enumerate_points(f, n, opt.max_points);

  SearchReport rep;
  rep.p = f.p();
  rep.k = f.k();
  rep.modulus = f.modulus();
  rep.q = f.q();
  rep.n = n;
  rep.mode = "exact";
  rep.node_budget = opt.node_budget;
  rep.fix_origin = resume ? resume->fix_origin : opt.fix_origin;

  const bool fix_origin = rep.fix_origin;

  std::vector<std::size_t> chain;          // chosen point indices, root anchor included
  std::vector<std::vector<std::size_t>> cands;  // per level
  std::vector<std::size_t> cursor;

  std::vector<std::size_t> incumbent;
  std::size_t best = 0;
  std::uint64_t nodes = 0;

  auto note_incumbent = [&]() {
    if (chain.size() > best) {
      best = chain.size();
      incumbent = chain;
    }
  };

  // level 0 candidates
  std::vector<std::size_t> root;
  if (fix_origin) {
    chain.push_back(0);
    note_incumbent();
    root.reserve(table.count > 0 ? table.count - 1 : 0);
    for (std::size_t i = 1; i < table.count; ++i) root.push_back(i);
  } else {
    root.reserve(table.count);
    for (std::size_t i = 0; i < table.count; ++i) root.push_back(i);
  }
  cands.push_back(std::move(root));
  cursor.push_back(0);

  auto filter_children = [&](const std::vector<std::size_t>& parent, std::size_t from,
                             std::size_t added) {
    std::vector<std::size_t> child;
    const std::size_t prior = chain.size() - 1;  // points before `added`
    for (std::size_t idx = from; idx < parent.size(); ++idx) {
      const std::size_t z = parent[idx];
      bool ok = true;
      for (std::size_t a = 0; a < prior; ++a) {
        if (!acute_triple_flat(f, table, chain[a], added, z)) {
          ok = false;
          break;
        }
      }
      if (ok) child.push_back(z);
    }
    return child;
  };

  if (resume != nullptr) {
    // rebuild the frame stack by replaying the chosen chain
    best = resume->best_size;
    nodes = resume->nodes_explored;
    incumbent.clear();
    for (const auto& pt : resume->incumbent) {
      const auto idx = table.index_of(pt, f.q());
      if (!idx) fail(Errc::InvalidArgument, "checkpoint incumbent does not match this field");
      incumbent.push_back(*idx);
    }
    if (resume->cursor.size() != resume->chosen.size() + 1) {
      fail(Errc::InvalidArgument, "checkpoint cursor/chosen length mismatch");
    }
    for (std::size_t level = 0; level < resume->chosen.size(); ++level) {
      const auto idx = table.index_of(resume->chosen[level], f.q());
      if (!idx) fail(Errc::InvalidArgument, "checkpoint point does not match this field");
      const auto& cur = cands.back();
      const std::size_t pos = resume->cursor[level];
      if (pos == 0 || pos > cur.size() || cur[pos - 1] != *idx) {
        fail(Errc::InvalidArgument, "checkpoint cursor does not match the search tree");
      }
      cursor.back() = pos;
      chain.push_back(*idx);
      cands.push_back(filter_children(cur, pos, *idx));
      cursor.push_back(0);
    }
    cursor.back() = resume->cursor.back();
  }

  bool aborted = false;
  while (!cands.empty()) {
    auto& level_cands = cands.back();
    auto& pos = cursor.back();
    // bound prune: even taking every remaining candidate cannot beat best
    if (pos >= level_cands.size() || chain.size() + (level_cands.size() - pos) <= best) {
      cands.pop_back();
      cursor.pop_back();
      if (!cands.empty()) chain.pop_back();
      continue;
    }
    if (nodes >= opt.node_budget) {
      aborted = true;
      break;
    }
    const std::size_t c = level_cands[pos];
    ++pos;
    ++nodes;
    chain.push_back(c);
    note_incumbent();
    cands.push_back(filter_children(level_cands, pos, c));
    cursor.push_back(0);
  }

  if (aborted && out_checkpoint != nullptr) {
    ExactCheckpoint ck;
    ck.fix_origin = fix_origin;
    ck.best_size = best;
    ck.nodes_explored = nodes;
    const std::size_t base = fix_origin ? 1 : 0;
    for (std::size_t level = base; level < chain.size(); ++level) {
      const auto pt = table.point(chain[level]);
      std::vector<std::int64_t> codes;
      for (const Elem& e : pt) codes.push_back(e.code);
      ck.chosen.push_back(std::move(codes));
    }
    ck.cursor = cursor;
    for (std::size_t i : incumbent) {
      const auto pt = table.point(i);
      std::vector<std::int64_t> codes;
      for (const Elem& e : pt) codes.push_back(e.code);
      ck.incumbent.push_back(std::move(codes));
    }
    *out_checkpoint = std::move(ck);
  }

  if (incumbent.empty() && table.count > 0) incumbent.push_back(0);
  best = std::max(best, incumbent.size());

  verify_witness(field, table, incumbent);
  rep.best_size = best;
  for (std::size_t i : incumbent) rep.witness.push_back(table.point(i));
  rep.exhaustive = !aborted;
  rep.budget_aborted = aborted;
  rep.nodes_explored = nodes;
  rep.wall_ms = elapsed_ms(start);
  return rep;
}

SearchReport greedy_lower(std::shared_ptr<const Field> field, int n, int restarts, std::uint64_t seed,
                          const SearchOptions& opt) {
  const auto start = Clock::now();
  const Field& f = *field;
  SearchOptions local = opt;
  local.max_points = opt.max_points_greedy;
  const PointTable table = enumerate_points(f, n, local.max_points);
  if (restarts < 1) fail(Errc::InvalidArgument, "restarts must be at least 1");

  struct RestartResult {
    std::vector<std::size_t> set;
  };
  std::vector<RestartResult> results(static_cast<std::size_t>(restarts));

  parallel_for(static_cast<std::size_t>(restarts), opt.threads, [&](std::size_t r) {
    // seed_seq keeps 32 bits per word, so split the seed explicitly
    std::seed_seq sseq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(sseq);
    std::vector<std::size_t> order(table.count);
    for (std::size_t i = 0; i < table.count; ++i) order[i] = i;
    for (std::size_t i = table.count; i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(bounded_draw(rng, i));
      std::swap(order[i - 1], order[j]);
    }
    std::vector<std::size_t>& set = results[r].set;
    for (const std::size_t z : order) {
      bool ok = true;
      for (std::size_t a = 0; a < set.size() && ok; ++a) {
        for (std::size_t b = a + 1; b < set.size(); ++b) {
          if (!acute_triple_flat(f, table, set[a], set[b], z)) {
            ok = false;
            break;
          }
        }
      }
      if (ok) set.push_back(z);
    }
  });

  std::size_t best_r = 0;
  for (std::size_t r = 1; r < results.size(); ++r) {
    if (results[r].set.size() > results[best_r].set.size()) best_r = r;
  }
  auto incumbent = results[best_r].set;
  std::sort(incumbent.begin(), incumbent.end());

  verify_witness(field, table, incumbent);

  SearchReport rep;
  rep.p = f.p();
  rep.k = f.k();
  rep.modulus = f.modulus();
  rep.q = f.q();
  rep.n = n;
  rep.mode = "greedy";
  rep.best_size = incumbent.size();
  for (std::size_t i : incumbent) rep.witness.push_back(table.point(i));
  rep.exhaustive = false;
  rep.nodes_explored = static_cast<std::uint64_t>(restarts) * table.count;
  rep.node_budget = opt.node_budget;
  rep.seed = seed;
  rep.restarts = restarts;
  rep.wall_ms = elapsed_ms(start);
  return rep;
}

int qr_run(const Field& field) {
  if (field.k() != 1) fail(Errc::InvalidArgument, "qr_run is defined over prime fields");
  int m = 0;
  for (std::int64_t z = 1; z < field.p(); ++z) {
    if (field.qr_class(Elem{z}) != QrClass::Residue) break;
    m = static_cast<int>(z);
  }
  return m;
}

std::vector<std::pair<std::int64_t, int>> qr_run_range(std::int64_t p_min, std::int64_t p_max) {
  if (p_min < 3 || p_max < p_min) fail(Errc::InvalidArgument, "invalid prime range");
  if (p_max > Field::kMaxQ) fail(Errc::FieldTooLarge, "p_max exceeds the supported cap");
  std::vector<std::pair<std::int64_t, int>> rows;
  for (std::int64_t p = p_min | 1; p <= p_max; p += 2) {
    if (!is_prime(p)) continue;
    const Field f(p, 1, std::nullopt, /*qr_table_limit=*/0);  // Euler path, no table
    rows.emplace_back(p, qr_run(f));
  }
  return rows;
}

GridReport grid_construct(std::int64_t p, int n, int m, std::size_t max_points) {
  auto field = std::make_shared<const Field>(p, 1);
  if (m < 1) fail(Errc::InvalidArgument, "m must be at least 1");
  if (m > p) fail(Errc::InvalidArgument, "m may not exceed p; grid points would collide mod p");
  if (n < 1 || n > 16) fail(Errc::DimensionMismatch, "dimension must be in [1, 16]");
  double space = 1.0;
  for (int i = 0; i < n; ++i) space *= static_cast<double>(m);
  if (space > static_cast<double>(max_points)) fail(Errc::SpaceTooLarge, "m^n exceeds the cap");

  GridReport rep;
  rep.p = p;
  rep.n = n;
  rep.m = m;
  rep.p_mod_4 = static_cast<int>(p % 4);

  const auto count = static_cast<std::size_t>(space);
  std::vector<std::vector<std::int64_t>> int_pts(count, std::vector<std::int64_t>(static_cast<std::size_t>(n)));
  PointSet zs(field, n);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t rest = i;
    Point pt(static_cast<std::size_t>(n));
    for (int c = n - 1; c >= 0; --c) {
      const std::int64_t v = static_cast<std::int64_t>(rest % static_cast<std::size_t>(m)) + 1;
      int_pts[i][static_cast<std::size_t>(c)] = v;
      pt[static_cast<std::size_t>(c)] = field->from_int(v);
      rest /= static_cast<std::size_t>(m);
    }
    zs.insert(std::move(pt));
  }
  rep.size = zs.size();
  rep.points = zs.points();

  const AcuteOutcome outcome = set_is_acute(zs);
  rep.acute = outcome.acute;
  rep.violation = outcome.violation;

  // vertex form over Z, before reduction: 2 (u - v) . (u - w)
  auto delta_int = [&](std::size_t a, std::size_t b, std::size_t c) {
    std::int64_t acc = 0;
    for (int i = 0; i < n; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      acc += (int_pts[a][ii] - int_pts[b][ii]) * (int_pts[a][ii] - int_pts[c][ii]);
    }
    return 2 * acc;
  };
  if (count >= 3) {
    std::int64_t lo = std::numeric_limits<std::int64_t>::max();
    std::int64_t hi = std::numeric_limits<std::int64_t>::min();
    for (std::size_t a = 0; a < count; ++a) {
      for (std::size_t b = 0; b < count; ++b) {
        if (b == a) continue;
        for (std::size_t c = 0; c < count; ++c) {
          if (c == a || c == b) continue;
          const std::int64_t d = delta_int(a, b, c);
          lo = std::min(lo, d);
          hi = std::max(hi, d);
        }
      }
    }
    rep.delta_int_range = std::make_pair(lo, hi);
    rep.has_negative_delta = lo < 0;
  }
  return rep;
}

std::vector<BoundRow> bound_table(const std::vector<SearchReport>& reports) {
  std::vector<BoundRow> rows;
  rows.reserve(reports.size());
  for (const auto& rep : reports) {
    BoundRow row;
    row.q = rep.q;
    row.n = rep.n;
    row.best_size = rep.best_size;
    row.exhaustive = rep.exhaustive;
    const auto best = static_cast<unsigned __int128>(rep.best_size);
    const auto qq = static_cast<unsigned __int128>(rep.q);
    const unsigned __int128 lhs = best * best * best;
    const unsigned __int128 rhs = 8 * qq * qq * qq * qq;
    row.cube_bound_ok = lhs <= rhs;
    row.cube_bound_lhs = int128_to_string(lhs);
    row.cube_bound_rhs = int128_to_string(rhs);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f",
                  std::pow(static_cast<double>(rep.q), static_cast<double>(rep.n + 1) / 2.0));
    row.ref_curve = buf;
    row.ref_note = "shape only (constant unspecified)";
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace acutefq
