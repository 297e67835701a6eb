// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Each criterion carries its tolerance and wall-clock budget inline.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>
#include <unistd.h>

#include "acutefq/charsums.hpp"
#include "acutefq/cli.hpp"
#include "acutefq/io.hpp"
#include "acutefq/search.hpp"

using namespace acutefq;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

struct Criterion {
  const char* name;
  double budget_seconds;
  Clock::time_point start = Clock::now();
  bool ok = true;
  std::string detail;

  Criterion(const char* n, double budget) : name(n), budget_seconds(budget) {}

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (detail.empty()) detail = what;
    }
  }

  void finish() {
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (secs > budget_seconds) {
      ok = false;
      if (detail.empty()) detail = "over time budget";
    }
    std::printf("[%s] %s (%.2fs / %.0fs budget)%s%s\n", ok ? "PASS" : "FAIL", name, secs,
                budget_seconds, detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++failures;
  }
};

std::shared_ptr<const Field> make_field(std::int64_t p, int k = 1) {
  return std::make_shared<const Field>(p, k);
}

const std::vector<std::pair<std::int64_t, int>> kAcceptanceFields = {
    {3, 1}, {5, 1}, {7, 1}, {3, 2}, {11, 1}, {13, 1}, {5, 2}, {3, 3}};

PointSet random_set(const std::shared_ptr<const Field>& f, int n, std::size_t size,
                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PointSet zs(f, n);
  std::set<std::vector<std::int64_t>> seen;
  while (zs.size() < size) {
    Point pt(static_cast<std::size_t>(n));
    std::vector<std::int64_t> key(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) {
      const auto v = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(f->q()));
      pt[static_cast<std::size_t>(c)] = Elem{v};
      key[static_cast<std::size_t>(c)] = v;
    }
    if (seen.insert(key).second) zs.insert(std::move(pt));
  }
  return zs;
}

// the random-set corpus shared by criteria 4 and 5
template <typename Fn>
void for_corpus(Fn&& fn) {
  for (const std::int64_t q : {3, 5, 7, 9, 11, 13}) {
    std::int64_t p = 0;
    int k = 1;
    factor_prime_power(q, p, k);
    auto f = make_field(p, k);
    for (const int n : {2, 3}) {
      std::int64_t space = 1;
      for (int i = 0; i < n && space <= 12; ++i) space *= q;
      const auto max_size = static_cast<std::size_t>(std::min<std::int64_t>(12, space));
      std::mt19937_64 gen(0xACC0 + static_cast<std::uint64_t>(q) * 100 + static_cast<std::uint64_t>(n));
      for (int rep = 0; rep < 200; ++rep) {
        const std::size_t size = 1 + gen() % max_size;
        fn(f, n, random_set(f, n, size, gen()));
      }
    }
  }
}

void criterion1_gauss_magnitude() {
  Criterion c("1. gauss-sum magnitude |G|^2 = q", 5.0);
  for (const auto& [p, k] : kAcceptanceFields) {
    const Field f(p, k);
    for (std::int64_t t = 1; t < f.q(); ++t) {
      for (std::int64_t a = 1; a < f.q(); ++a) {
        const double err = std::abs(std::norm(gauss_sum(f, Elem{t}, Elem{a})) - static_cast<double>(f.q()));
        c.expect(err <= 1e-9 * static_cast<double>(f.q()),
                 "q=" + std::to_string(f.q()) + " t=" + std::to_string(t) + " a=" + std::to_string(a));
      }
    }
  }
  c.finish();
}

void criterion2_orthogonality() {
  Criterion c("2. additive-character orthogonality", 5.0);
  for (const auto& [p, k] : kAcceptanceFields) {
    const Field f(p, k);
    for (std::int64_t z = 0; z < f.q(); ++z) {
      const Complex want = z == 0 ? Complex{static_cast<double>(f.q()), 0.0} : Complex{0.0, 0.0};
      const double err = std::abs(orthogonality_sum(f, Elem{z}) - want);
      c.expect(err <= 1e-9 * static_cast<double>(f.q()), "q=" + std::to_string(f.q()) + " z=" + std::to_string(z));
    }
  }
  c.finish();
}

void criterion3_dual_formula() {
  Criterion c("3. delta dual-formula equivalence", 30.0);
  std::uint64_t mismatches = 0;

  for (const std::int64_t q : {3, 5}) {
    const Field f(q, 1);
    std::vector<Point> pts;
    for (std::int64_t a = 0; a < q; ++a) {
      for (std::int64_t b = 0; b < q; ++b) pts.push_back(Point{Elem{a}, Elem{b}});
    }
    for (const auto& u : pts) {
      for (const auto& v : pts) {
        for (const auto& w : pts) {
          if (delta_sum(f, u, v, w) != delta_dot(f, u, v, w)) ++mismatches;
        }
      }
    }
  }

  std::vector<std::pair<std::int64_t, int>> fields;
  for (const auto& [p, k] : std::vector<std::pair<std::int64_t, int>>{
           {3, 1}, {5, 1}, {7, 1}, {3, 2}, {11, 1}, {13, 1}, {17, 1}, {19, 1}, {23, 1}, {5, 2}, {3, 3}}) {
    fields.emplace_back(p, k);
  }
  std::mt19937_64 rng(0xD0D0);
  std::uint64_t done = 0;
  while (done < 100'000) {
    for (const auto& [p, k] : fields) {
      const Field f(p, k);
      for (int n = 1; n <= 4 && done < 100'000; ++n) {
        Point u(static_cast<std::size_t>(n)), v(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
          u[static_cast<std::size_t>(i)] = Elem{static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(f.q()))};
          v[static_cast<std::size_t>(i)] = Elem{static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(f.q()))};
          w[static_cast<std::size_t>(i)] = Elem{static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(f.q()))};
        }
        if (delta_sum(f, u, v, w) != delta_dot(f, u, v, w)) ++mismatches;
        ++done;
      }
    }
  }
  c.expect(mismatches == 0, std::to_string(mismatches) + " mismatches");
  c.finish();
}

void criterion4_square_bound_suite() {
  Criterion c("4. |S_psi|^2 bound suite (200 sets per field/dim)", 180.0);
  for_corpus([&](const std::shared_ptr<const Field>& f, int n, const PointSet& zs) {
    SumReportOptions opt;
    opt.threads = 1;
    const SumReport rep = make_sum_report(zs, opt);
    for (std::size_t t = 1; t < rep.s_psi.size(); ++t) {
      c.expect(std::norm(rep.s_psi[t]) <= rep.s_square_bound[t] + 1e-6,
               "bound violated q=" + std::to_string(f->q()) + " n=" + std::to_string(n));
    }
    if (zs.size() <= 6) {
      // naive quadruple oracle
      for (std::int64_t t = 1; t < f->q(); ++t) {
        Complex acc{0.0, 0.0};
        for (std::size_t i = 0; i < zs.size(); ++i) {
          for (std::size_t j = 0; j < zs.size(); ++j) {
            Point vw(static_cast<std::size_t>(n));
            for (int d = 0; d < n; ++d) {
              vw[static_cast<std::size_t>(d)] = f->add(zs[i][static_cast<std::size_t>(d)], zs[j][static_cast<std::size_t>(d)]);
            }
            const Elem pvw = inner(*f, zs[i], zs[j]);
            for (std::size_t x = 0; x < zs.size(); ++x) {
              for (std::size_t y = 0; y < zs.size(); ++y) {
                bool same = true;
                for (int d = 0; d < n && same; ++d) {
                  same = f->add(zs[x][static_cast<std::size_t>(d)], zs[y][static_cast<std::size_t>(d)]) ==
                         vw[static_cast<std::size_t>(d)];
                }
                if (!same) continue;
                const Elem pxy = inner(*f, zs[x], zs[y]);
                acc += psi_eval(*f, Elem{t}, f->sub(f->add(pvw, pvw), f->add(pxy, pxy)));
              }
            }
          }
        }
        double qn = 1.0;
        for (int i = 0; i < n; ++i) qn *= static_cast<double>(f->q());
        const double naive = static_cast<double>(zs.size()) * qn * acc.real();
        const double fast = rep.s_square_bound[static_cast<std::size_t>(t)];
        c.expect(std::abs(naive - fast) <= 1e-6, "oracle mismatch q=" + std::to_string(f->q()));
      }
    }
  });
  c.finish();
}

void criterion5_counting_chain() {
  Criterion c("5. T identity, deviation bound, R^2 and W bounds", 180.0);
  for_corpus([&](const std::shared_ptr<const Field>& f, int n, const PointSet& zs) {
    SumReportOptions opt;
    opt.threads = 1;
    const SumReport rep = make_sum_report(zs, opt);
    const double s = static_cast<double>(zs.size());
    const double cube = s * s * s;
    const double q = static_cast<double>(f->q());

    c.expect(std::abs(static_cast<double>(rep.t.total) - rep.t_id) <= 1e-6, "T != T-identity");
    c.expect(std::abs(static_cast<double>(rep.t.total) - cube) <= rep.r / std::sqrt(q) + 1e-6,
             "deviation bound");
    double qn2 = 1.0;
    for (int i = 0; i < n + 2; ++i) qn2 *= q;
    c.expect(rep.r * rep.r <= s * qn2 * static_cast<double>(rep.w) + 1e-6, "R^2 bound");
    if (n == 2) {
      c.expect(rep.w <= 2 * static_cast<std::int64_t>(zs.size() * zs.size()) * f->q(), "W bound");
    }
    // the report's own identity battery must also be green on the corpus
    c.expect(rep.identities_ok, "a report identity check failed");
  });
  c.finish();
}

// plain recursive extension oracle: index-increasing, no translation
// anchor, no bound pruning, acuteness re-judged through delta_sum and a
// squares set
struct PlainBacktracker {
  const Field& f;
  std::vector<Point> pts;
  std::set<std::int64_t> squares;
  std::size_t best = 0;

  PlainBacktracker(const Field& field, int n) : f(field) {
    std::size_t count = 1;
    for (int i = 0; i < n; ++i) count *= static_cast<std::size_t>(f.q());
    for (std::size_t idx = 0; idx < count; ++idx) {
      std::size_t rest = idx;
      Point pt(static_cast<std::size_t>(n));
      for (int c2 = n - 1; c2 >= 0; --c2) {
        pt[static_cast<std::size_t>(c2)] = Elem{static_cast<std::int64_t>(rest % static_cast<std::size_t>(f.q()))};
        rest /= static_cast<std::size_t>(f.q());
      }
      pts.push_back(std::move(pt));
    }
    for (std::int64_t v = 1; v < f.q(); ++v) squares.insert(f.mul(Elem{v}, Elem{v}).code);
  }

  bool acute(const Point& u, const Point& v, const Point& w) const {
    return squares.count(delta_sum(f, u, v, w).code) && squares.count(delta_sum(f, v, u, w).code) &&
           squares.count(delta_sum(f, w, u, v).code);
  }

  void extend(std::vector<std::size_t>& cur, std::size_t start) {
    best = std::max(best, cur.size());
    for (std::size_t i = start; i < pts.size(); ++i) {
      bool ok = true;
      for (std::size_t a = 0; a < cur.size() && ok; ++a) {
        for (std::size_t b = a + 1; b < cur.size() && ok; ++b) {
          ok = acute(pts[cur[a]], pts[cur[b]], pts[i]);
        }
      }
      if (ok) {
        cur.push_back(i);
        extend(cur, i + 1);
        cur.pop_back();
      }
    }
  }

  std::size_t run() {
    std::vector<std::size_t> cur;
    extend(cur, 0);
    return best;
  }
};

std::vector<SearchReport> exact_witnesses;  // filled by criterion 7, reused by 6

void criterion7_exact_extremal_values() {
  Criterion c("7. exact maxima N(2,3)=3, N(2,5)=4, N(2,7)=3 vs independent oracles", 600.0);
  const std::vector<std::pair<std::int64_t, std::size_t>> expected = {{3, 3}, {5, 4}, {7, 3}};
  for (const auto& [q, want] : expected) {
    auto f = make_field(q);
    const SearchReport rep = max_acute_exact(f, 2);
    c.expect(rep.exhaustive, "not exhaustive at q=" + std::to_string(q));
    c.expect(rep.best_size == want,
             "q=" + std::to_string(q) + " got " + std::to_string(rep.best_size));

    std::size_t oracle = 0;
    if (q == 3) {
      // full subset enumeration over the 9-point plane
      const PlainBacktracker helper(*f, 2);
      std::size_t best = 0;
      for (std::uint32_t mask = 1; mask < (1u << 9); ++mask) {
        std::vector<std::size_t> sel;
        for (std::size_t i = 0; i < 9; ++i) {
          if (mask & (1u << i)) sel.push_back(i);
        }
        bool ok = true;
        for (std::size_t a = 0; a < sel.size() && ok; ++a) {
          for (std::size_t b = a + 1; b < sel.size() && ok; ++b) {
            for (std::size_t d = b + 1; d < sel.size() && ok; ++d) {
              ok = helper.acute(helper.pts[sel[a]], helper.pts[sel[b]], helper.pts[sel[d]]);
            }
          }
        }
        if (ok) best = std::max(best, sel.size());
      }
      oracle = best;
    } else {
      PlainBacktracker bt(*f, 2);
      oracle = bt.run();
    }
    c.expect(rep.best_size == oracle, "oracle disagrees at q=" + std::to_string(q));

    PointSet zs(f, 2);
    for (const Point& pt : rep.witness) zs.insert(pt);
    c.expect(set_is_acute(zs).acute, "witness fails re-verification");

    const auto best = static_cast<unsigned __int128>(rep.best_size);
    const auto qq = static_cast<unsigned __int128>(q);
    c.expect(best * best * best <= 8 * qq * qq * qq * qq, "cube bound");

    exact_witnesses.push_back(rep);
  }
  c.finish();
}

void criterion6_structural_zero() {
  Criterion c("6. acute witnesses: distinct-triple solutions are zero, T <= 4s^2", 60.0);
  c.expect(!exact_witnesses.empty(), "no witnesses collected");
  for (const SearchReport& rep : exact_witnesses) {
    auto f = make_field(rep.p, rep.k);
    PointSet zs(f, rep.n);
    for (const Point& pt : rep.witness) zs.insert(pt);
    const TripleCount tc = t_count(zs, f->smallest_nonresidue());
    c.expect(tc.distinct == 0, "distinct contribution nonzero at q=" + std::to_string(rep.q));
    const auto s = static_cast<std::int64_t>(zs.size());
    c.expect(tc.total <= 4 * s * s, "T exceeds 4 s^2");
  }
  c.finish();
}

void criterion8_construction() {
  Criterion c("8. residue runs below 10^5 and accepted grids", 60.0);
  const auto rows = qr_run_range(3, 100'000 - 1);
  bool has7 = false, has23 = false;
  for (const auto& [p, m] : rows) {
    if (p == 7) has7 = m == 2;
    if (p == 23) has23 = m >= 3;
  }
  c.expect(has7, "(7,2) missing");
  c.expect(has23, "(23,>=3) missing");

  for (const std::int64_t p : {3, 5, 7, 11, 13, 23, 101, 9973}) {
    const GridReport rep = grid_construct(p, 2, 1);
    c.expect(rep.acute, "m=1 grid rejected at p=" + std::to_string(p));
    if (rep.acute) {
      auto f = make_field(p);
      PointSet zs(f, rep.n);
      for (const Point& pt : rep.points) zs.insert(pt);
      c.expect(set_is_acute(zs).acute, "accepted grid fails re-verification");
    }
  }
  c.finish();
}

void criterion9_determinism() {
  Criterion c("9. bit-identical reports across 1, 4, 8 threads", 120.0);
  const fs::path dir = fs::temp_directory_path() / ("acutefq_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  auto f13 = make_field(13);
  const PointSet zs = random_set(f13, 2, 12, 0xBEEF);
  const fs::path set_path = dir / "set.json";
  io::write_atomic(set_path, io::point_set_to_json(zs).dump() + "\n");

  auto stripped = [](const fs::path& p) {
    auto j = io::json::parse(io::read_file(p));
    j.erase("timing");
    return j.dump();
  };

  std::vector<std::string> charsum_reports, greedy_reports;
  for (const std::string threads : {"1", "4", "8"}) {
    const fs::path sum_out = dir / ("sum" + threads + ".json");
    const int rc1 = cli::run({"charsums", "--set", set_path.string(), "--threads", threads, "--out",
                              sum_out.string()});
    c.expect(rc1 == 0, "charsums exit " + std::to_string(rc1));
    charsum_reports.push_back(stripped(sum_out));

    const fs::path greedy_out = dir / ("greedy" + threads + ".json");
    const int rc2 = cli::run({"search", "--p", "101", "--n", "2", "--mode", "greedy", "--restarts",
                              "50", "--seed", "7", "--threads", threads, "--out", greedy_out.string()});
    c.expect(rc2 == 0, "greedy exit " + std::to_string(rc2));
    greedy_reports.push_back(stripped(greedy_out));
  }
  c.expect(charsum_reports[0] == charsum_reports[1] && charsum_reports[0] == charsum_reports[2],
           "charsums reports differ");
  c.expect(greedy_reports[0] == greedy_reports[1] && greedy_reports[0] == greedy_reports[2],
           "greedy reports differ");

  std::error_code ec;
  fs::remove_all(dir, ec);
  c.finish();
}

}  // namespace

int main() {
  criterion1_gauss_magnitude();
  criterion2_orthogonality();
  criterion3_dual_formula();
  criterion4_square_bound_suite();
  criterion5_counting_chain();
  criterion7_exact_extremal_values();
  criterion6_structural_zero();
  criterion8_construction();
  criterion9_determinism();
  if (failures == 0) {
    std::printf("all acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria FAILED\n", failures);
  }
  return failures;
}
