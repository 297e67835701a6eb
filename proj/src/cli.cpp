#include "acutefq/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "acutefq/charsums.hpp"
#include "acutefq/io.hpp"
#include "acutefq/search.hpp"

namespace acutefq::cli {

namespace {

using io::json;
using Clock = std::chrono::steady_clock;

constexpr int kExitOk = 0;
constexpr int kExitPropertyFail = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitBudget = 3;
constexpr int kExitIdentityFail = 4;

std::filesystem::path resolve_out(const std::string& out) {
  std::filesystem::path p(out);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("ACUTEFQ_OUT_DIR"); dir != nullptr && *dir != '\0') {
      p = std::filesystem::path(dir) / p;
    }
  }
  return p;
}

void emit(const std::string& out, const std::string& content) {
  if (out.empty()) {
    std::cout << content;
    if (content.empty() || content.back() != '\n') std::cout << '\n';
  } else {
    io::write_atomic(resolve_out(out), content);
  }
}

void emit_json(const std::string& out, const json& j) { emit(out, j.dump(2) + "\n"); }

// The echo carries exactly what is needed to reproduce the numbers.
// Thread count and output path are deliberately absent: results are
// deterministic in both by contract.
struct FieldArgs {
  std::int64_t p = 0;
  int k = 1;
  std::vector<std::int64_t> modulus;  // empty = auto / prime field

  std::shared_ptr<const Field> make() const {
    std::optional<std::vector<std::int64_t>> mod;
    if (!modulus.empty()) mod = modulus;
    return std::make_shared<const Field>(p, k, std::move(mod));
  }
};

json field_echo(const Field& f) {
  json j{{"p", f.p()}, {"k", f.k()}};
  j["modulus"] = f.k() > 1 ? json(f.modulus()) : json(nullptr);
  return j;
}

int cmd_verify(const std::string& set_path, const std::string& out) {
  const auto start = Clock::now();
  const PointSet zs = io::load_point_set(set_path);
  const AcuteOutcome outcome = set_is_acute(zs);
  json config{{"command", "verify"},
              {"set", set_path},
              {"set_hash", io::hash_hex(zs.canonical_hash())},
              {"field", field_echo(zs.field())},
              {"n", zs.n()}};
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  emit_json(out, io::verify_report_to_json(zs, outcome, std::move(config), ms));
  return outcome.acute ? kExitOk : kExitPropertyFail;
}

struct SearchArgs {
  FieldArgs field;
  int n = 2;
  std::string mode;
  std::uint64_t node_budget = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t seed = 0;
  bool seed_given = false;
  int restarts = 1;
  std::size_t max_points = 10'000;
  bool no_fix_origin = false;
  unsigned threads = 0;
  std::string out;
  std::string checkpoint_out;
  std::string resume_path;
};

int cmd_search(const SearchArgs& a) {
  auto field = a.field.make();
  SearchOptions opt;
  opt.node_budget = a.node_budget;
  opt.fix_origin = !a.no_fix_origin;
  opt.max_points = a.max_points;
  opt.threads = a.threads;

  json config{{"command", "search"},
              {"field", field_echo(*field)},
              {"n", a.n},
              {"mode", a.mode},
              {"node_budget", a.node_budget},
              {"max_points", a.max_points}};

  if (a.mode == "exact") {
    config["fix_origin"] = opt.fix_origin;
    std::optional<ExactCheckpoint> resume;
    if (!a.resume_path.empty()) {
      resume = io::checkpoint_from_json(json::parse(io::read_file(a.resume_path)));
    }
    std::optional<ExactCheckpoint> next;
    const SearchReport rep =
        max_acute_exact(field, a.n, opt, resume ? &*resume : nullptr, &next);
    emit_json(a.out, io::search_report_to_json(rep, config));
    if (rep.budget_aborted) {
      if (!a.checkpoint_out.empty() && next.has_value()) {
        emit_json(a.checkpoint_out, io::checkpoint_to_json(*next, config));
      }
      return kExitBudget;
    }
    return kExitOk;
  }
  if (a.mode == "greedy") {
    if (!a.seed_given) fail(Errc::InvalidArgument, "--seed is mandatory for greedy mode");
    config["seed"] = a.seed;
    config["restarts"] = a.restarts;
    const SearchReport rep = greedy_lower(field, a.n, a.restarts, a.seed, opt);
    emit_json(a.out, io::search_report_to_json(rep, config));
    return kExitOk;
  }
  fail(Errc::InvalidArgument, "mode must be exact or greedy");
}

struct CharsumArgs {
  std::string set_path;
  std::optional<std::int64_t> alpha_code;
  std::uint64_t quad_budget = 50'000'000;
  std::int64_t max_q = 65'536;
  unsigned threads = 0;
  std::string out;
  bool inject_identity_fault = false;
};

int cmd_charsums(const CharsumArgs& a) {
  const auto start = Clock::now();
  const PointSet zs = io::load_point_set(a.set_path);
  if (zs.field().q() > a.max_q) {
    fail(Errc::SpaceTooLarge, "q exceeds --max-q for the character-sum suite");
  }
  SumReportOptions opt;
  if (a.alpha_code.has_value()) opt.alpha = zs.field().from_code(*a.alpha_code);
  opt.quad_budget = a.quad_budget;
  opt.threads = a.threads;
  opt.corrupt_t_identity = a.inject_identity_fault;
  const SumReport rep = make_sum_report(zs, opt);
  json config{{"command", "charsums"},
              {"set", a.set_path},
              {"set_hash", io::hash_hex(rep.set_hash)},
              {"field", field_echo(zs.field())},
              {"n", zs.n()},
              {"alpha", rep.alpha.code},
              {"quad_budget", a.quad_budget}};
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  emit_json(a.out, io::sum_report_to_json(rep, std::move(config), ms));
  return rep.identities_ok ? kExitOk : kExitIdentityFail;
}

int cmd_construct_grid(std::int64_t p, int n, int m, std::size_t max_points, const std::string& out) {
  const auto start = Clock::now();
  const GridReport rep = grid_construct(p, n, m, max_points);
  json config{{"command", "construct grid"}, {"p", p}, {"n", n}, {"m", m}, {"max_points", max_points}};
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  emit_json(out, io::grid_report_to_json(rep, std::move(config), ms));
  return rep.acute ? kExitOk : kExitPropertyFail;
}

int cmd_qr_run(std::int64_t p_min, std::int64_t p_max, const std::string& out) {
  const auto rows = qr_run_range(p_min, p_max);
  emit(out, io::qr_run_to_csv(rows));
  return kExitOk;
}

struct TableArgs {
  int n = 2;
  std::vector<std::int64_t> fields;
  std::vector<std::string> report_paths;
  std::string format = "csv";
  std::uint64_t node_budget = std::numeric_limits<std::uint64_t>::max();
  std::size_t max_points = 10'000;
  std::string out;
};

int cmd_table(const TableArgs& a) {
  if (a.fields.empty()) fail(Errc::InvalidArgument, "--fields must list at least one q");
  std::vector<SearchReport> loaded;
  for (const auto& path : a.report_paths) {
    loaded.push_back(io::search_report_from_json(json::parse(io::read_file(path))));
  }
  std::vector<SearchReport> selected;
  for (const std::int64_t qv : a.fields) {
    const SearchReport* found = nullptr;
    for (const auto& rep : loaded) {
      if (rep.q == qv && rep.n == a.n) {
        found = &rep;
        break;
      }
    }
    if (found != nullptr) {
      selected.push_back(*found);
    } else {
      std::int64_t p = 0;
      int k = 1;
      factor_prime_power(qv, p, k);
      auto field = std::make_shared<const Field>(p, k);
      SearchOptions opt;
      opt.node_budget = a.node_budget;
      opt.max_points = a.max_points;
      selected.push_back(max_acute_exact(field, a.n, opt));
    }
  }
  const auto rows = bound_table(selected);
  if (a.format == "csv") {
    emit(a.out, io::bound_table_to_csv(rows));
  } else if (a.format == "json") {
    emit_json(a.out, io::bound_table_to_json(rows));
  } else {
    fail(Errc::InvalidArgument, "format must be csv or json");
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Acute point-set experiments over odd finite fields"};
  app.name("acutefq");
  app.require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand("verify", "check that a point-set file is an acute set");
  std::string verify_set, verify_out;
  verify->add_option("--set", verify_set, "point-set JSON file")->required();
  verify->add_option("--out", verify_out, "report output path (default: stdout)");

  // search
  auto* search = app.add_subcommand("search", "search for maximum acute sets");
  SearchArgs sa;
  search->add_option("--p", sa.field.p, "field characteristic (odd prime)")->required();
  search->add_option("--k", sa.field.k, "extension degree (default 1)");
  search->add_option("--modulus", sa.field.modulus, "modulus coefficients c0,c1,...,ck")
      ->delimiter(',');
  search->add_option("--n", sa.n, "dimension")->required();
  search->add_option("--mode", sa.mode, "exact or greedy")->required();
  search->add_option("--node-budget", sa.node_budget, "exact-search node budget");
  auto* seed_opt = search->add_option("--seed", sa.seed, "random seed (mandatory for greedy)");
  search->add_option("--restarts", sa.restarts, "greedy restarts (default 1)");
  search->add_option("--max-points", sa.max_points, "enumeration cap for q^n");
  search->add_flag("--no-fix-origin", sa.no_fix_origin,
                   "disable the translation anchor (diagnostic; slower)");
  search->add_option("--threads", sa.threads, "worker threads (default: all cores)");
  search->add_option("--out", sa.out, "report output path (default: stdout)");
  search->add_option("--checkpoint", sa.checkpoint_out, "write a resumable checkpoint on budget abort");
  search->add_option("--resume", sa.resume_path, "resume an exact search from a checkpoint file");

  // charsums
  auto* charsums = app.add_subcommand("charsums", "character-sum suite over a point-set file");
  CharsumArgs ca;
  std::int64_t alpha_raw = -1;
  charsums->add_option("--set", ca.set_path, "point-set JSON file")->required();
  auto* alpha_opt = charsums->add_option("--alpha", alpha_raw, "nonresidue element code override");
  charsums->add_option("--quad-cap", ca.quad_budget, "budget for the chi quadruple sum");
  charsums->add_option("--max-q", ca.max_q, "largest field size accepted by this command");
  charsums->add_option("--threads", ca.threads, "worker threads (default: all cores)");
  charsums->add_option("--out", ca.out, "report output path (default: stdout)");
  charsums
      ->add_flag("--inject-identity-fault", ca.inject_identity_fault,
                 "self-test: corrupt one identity value; the checker must exit 4")
      ->group("");

  // construct grid
  auto* construct = app.add_subcommand("construct", "build candidate sets");
  construct->require_subcommand(1);
  auto* grid = construct->add_subcommand("grid", "the grid {1..m}^n embedded in F_p^n");
  std::int64_t grid_p = 0;
  int grid_n = 2, grid_m = 1;
  std::size_t grid_cap = 10'000;
  std::string grid_out;
  grid->add_option("--p", grid_p, "odd prime")->required();
  grid->add_option("--n", grid_n, "dimension")->required();
  grid->add_option("--m", grid_m, "grid side length")->required();
  grid->add_option("--max-points", grid_cap, "cap for m^n");
  grid->add_option("--out", grid_out, "report output path (default: stdout)");

  // qr-run
  auto* qrr = app.add_subcommand("qr-run", "initial quadratic-residue run lengths over a prime range");
  std::int64_t p_min = 3, p_max = 0;
  std::string qr_out;
  qrr->add_option("--p-min", p_min, "first prime candidate")->required();
  qrr->add_option("--p-max", p_max, "last prime candidate")->required();
  qrr->add_option("--out", qr_out, "CSV output path (default: stdout)");

  // table
  auto* table = app.add_subcommand("table", "bound table from search reports");
  TableArgs ta;
  table->add_option("--n", ta.n, "dimension")->required();
  table->add_option("--fields", ta.fields, "comma-separated q values")->delimiter(',')->required();
  table->add_option("--reports", ta.report_paths, "search-report JSON files")->delimiter(',');
  table->add_option("--format", ta.format, "csv or json (default csv)");
  table->add_option("--node-budget", ta.node_budget, "budget for searches run on the fly");
  table->add_option("--max-points", ta.max_points, "enumeration cap for q^n");
  table->add_option("--out", ta.out, "output path (default: stdout)");

  std::vector<const char*> argv;
  argv.push_back("acutefq");
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidInput;
  }

  try {
    if (*verify) return cmd_verify(verify_set, verify_out);
    if (*search) {
      sa.seed_given = seed_opt->count() > 0;
      return cmd_search(sa);
    }
    if (*charsums) {
      if (alpha_opt->count() > 0) ca.alpha_code = alpha_raw;
      return cmd_charsums(ca);
    }
    if (*grid) return cmd_construct_grid(grid_p, grid_n, grid_m, grid_cap, grid_out);
    if (*qrr) return cmd_qr_run(p_min, p_max, qr_out);
    if (*table) return cmd_table(ta);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == Errc::BudgetExceeded ? kExitBudget : kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}

}  // namespace acutefq::cli
