#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "acutefq/geometry.hpp"

namespace acutefq {

struct SearchOptions {
  std::uint64_t node_budget = std::numeric_limits<std::uint64_t>::max();
  /// Exact search only: exploit translation invariance by anchoring the
  /// first point at the origin. Off is sound too, just slower.
  bool fix_origin = true;
  /// Enumeration cap for the exact search space.
  std::size_t max_points = 10'000;
  /// Cap for the greedy point list (memory guard).
  std::size_t max_points_greedy = 1'000'000;
  unsigned threads = 0;  // greedy restarts; 0 = all cores
};

struct SearchReport {
  std::int64_t p = 0;
  int k = 1;
  std::vector<std::int64_t> modulus;
  std::int64_t q = 0;
  int n = 0;
  std::string mode;  // "exact" or "greedy"
  std::size_t best_size = 0;
  std::vector<Point> witness;
  bool exhaustive = false;
  bool budget_aborted = false;
  std::uint64_t nodes_explored = 0;
  double wall_ms = 0.0;
  // config echo
  std::uint64_t node_budget = 0;
  std::uint64_t seed = 0;
  int restarts = 0;
  bool fix_origin = true;
};

/// Frozen state of an interrupted exact search: the chosen chain, the
/// per-level resume cursor into the (re-derivable) candidate lists, and
/// the incumbent. Enough to continue the depth-first walk exactly where
/// it stopped.
struct ExactCheckpoint {
  bool fix_origin = true;
  std::vector<std::vector<std::int64_t>> chosen;  // per level, point coordinate codes
  std::vector<std::size_t> cursor;                // per level, next candidate index
  std::vector<std::vector<std::int64_t>> incumbent;
  std::size_t best_size = 0;
  std::uint64_t nodes_explored = 0;
};

/// Depth-first branch and bound over points in canonical order.
/// exhaustive = true only when the whole space (modulo the translation
/// anchor) was covered within the node budget. On budget exhaustion the
/// incumbent is still returned and, if out_checkpoint is given, a
/// resumable snapshot is stored there.
SearchReport max_acute_exact(std::shared_ptr<const Field> field, int n, const SearchOptions& opt = {},
                             const ExactCheckpoint* resume = nullptr,
                             std::optional<ExactCheckpoint>* out_checkpoint = nullptr);

/// Seeded randomized greedy: per restart, shuffle the point list and
/// insert whenever acuteness survives. Deterministic for a fixed
/// (seed, restarts, field), independent of the thread count.
SearchReport greedy_lower(std::shared_ptr<const Field> field, int n, int restarts, std::uint64_t seed,
                          const SearchOptions& opt = {});

/// Largest M >= 0 such that 1..M are all quadratic residues mod p.
int qr_run(const Field& field);

/// (p, run length) for every odd prime in [p_min, p_max].
std::vector<std::pair<std::int64_t, int>> qr_run_range(std::int64_t p_min, std::int64_t p_max);

struct GridReport {
  std::int64_t p = 0;
  int n = 0;
  int m = 0;
  std::size_t size = 0;
  bool acute = false;
  std::optional<std::array<std::size_t, 3>> violation;
  /// Range of the vertex form over pairwise-distinct triples, computed
  /// in plain integers before reduction mod p. Absent when the grid has
  /// fewer than three points.
  std::optional<std::pair<std::int64_t, std::int64_t>> delta_int_range;
  bool has_negative_delta = false;
  int p_mod_4 = 0;
  std::vector<Point> points;
};

/// The grid {1..m}^n embedded in F_p^n, with a full acuteness
/// verification and the integer delta range over its distinct triples.
GridReport grid_construct(std::int64_t p, int n, int m, std::size_t max_points = 10'000);

struct BoundRow {
  std::int64_t q = 0;
  int n = 0;
  std::size_t best_size = 0;
  bool exhaustive = false;
  bool cube_bound_ok = false;     // best^3 <= 8 q^4, exact integers
  std::string cube_bound_lhs;     // best^3
  std::string cube_bound_rhs;     // 8 q^4
  std::string ref_curve;          // q^((n+1)/2), two decimals
  std::string ref_note;
};

std::vector<BoundRow> bound_table(const std::vector<SearchReport>& reports);

}  // namespace acutefq
