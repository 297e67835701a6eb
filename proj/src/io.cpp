#include "acutefq/io.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace acutefq::io {

namespace {

std::vector<std::int64_t> digits(std::int64_t code, std::int64_t p, int k) {
  std::vector<std::int64_t> out(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    out[static_cast<std::size_t>(i)] = code % p;
    code /= p;
  }
  return out;
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

}  // namespace

json field_to_json(const Field& f) {
  json j{{"p", f.p()}, {"k", f.k()}, {"q", f.q()}};
  if (f.k() > 1) j["modulus"] = f.modulus();
  return j;
}

std::shared_ptr<const Field> field_from_json(const json& j) {
  if (!j.contains("p") || !j.contains("k")) fail(Errc::InvalidArgument, "field needs p and k");
  const auto p = j.at("p").get<std::int64_t>();
  const auto k = j.at("k").get<int>();
  std::optional<std::vector<std::int64_t>> modulus;
  if (j.contains("modulus") && !j.at("modulus").is_null()) {
    modulus = j.at("modulus").get<std::vector<std::int64_t>>();
  }
  return std::make_shared<const Field>(p, k, std::move(modulus));
}

json point_to_json(std::int64_t p, int k, const Point& pt) {
  json coords = json::array();
  for (const Elem& e : pt) {
    if (k == 1) {
      coords.push_back(e.code);
    } else {
      coords.push_back(digits(e.code, p, k));
    }
  }
  return coords;
}

Point point_from_json(std::int64_t p, int k, const json& j) {
  if (!j.is_array()) fail(Errc::InvalidArgument, "point must be an array of coordinates");
  Point pt;
  pt.reserve(j.size());
  for (const auto& c : j) {
    if (k == 1) {
      if (!c.is_number_integer()) fail(Errc::InvalidArgument, "coordinate must be an integer for k = 1");
      const auto v = c.get<std::int64_t>();
      if (v < 0 || v >= p) fail(Errc::InvalidArgument, "coordinate out of range [0, p)");
      pt.push_back(Elem{v});
    } else {
      if (!c.is_array() || static_cast<int>(c.size()) != k) {
        fail(Errc::InvalidArgument, "coordinate must be a length-k coefficient array for k > 1");
      }
      std::int64_t code = 0;
      for (int i = k - 1; i >= 0; --i) {
        const auto v = c.at(static_cast<std::size_t>(i)).get<std::int64_t>();
        if (v < 0 || v >= p) fail(Errc::InvalidArgument, "coefficient out of range [0, p)");
        code = code * p + v;
      }
      pt.push_back(Elem{code});
    }
  }
  return pt;
}

json point_set_to_json(const PointSet& zs) {
  const Field& f = zs.field();
  json j{{"p", f.p()}, {"k", f.k()}, {"n", zs.n()}};
  if (f.k() > 1) j["modulus"] = f.modulus();
  json pts = json::array();
  for (const Point& pt : zs.points()) pts.push_back(point_to_json(f.p(), f.k(), pt));
  j["points"] = std::move(pts);
  return j;
}

PointSet point_set_from_json(const json& j) {
  auto field = field_from_json(j);
  if (!j.contains("n")) fail(Errc::InvalidArgument, "point set needs a dimension n");
  const int n = j.at("n").get<int>();
  PointSet zs(field, n);
  if (j.contains("points")) {
    for (const auto& pj : j.at("points")) {
      Point pt = point_from_json(field->p(), field->k(), pj);
      if (static_cast<int>(pt.size()) != n) {
        fail(Errc::DimensionMismatch, "point has the wrong number of coordinates");
      }
      zs.insert(std::move(pt));
    }
  }
  return zs;
}

PointSet load_point_set(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    fail(Errc::InvalidArgument, std::string("malformed JSON: ") + e.what());
  }
  return point_set_from_json(j);
}

json checks_to_json(const std::vector<CheckResult>& checks) {
  json arr = json::array();
  for (const auto& c : checks) {
    arr.push_back(json{{"name", c.name},
                       {"pass", c.pass},
                       {"skipped", c.skipped},
                       {"lhs", c.lhs},
                       {"rhs", c.rhs},
                       {"tolerance", c.tolerance}});
  }
  return arr;
}

json finalize_report(const std::string& kind, json config, json payload, double wall_ms) {
  json rep = std::move(payload);
  rep["kind"] = kind;
  rep["config"] = std::move(config);
  rep["timing"] = json{{"generated_at", timestamp_utc()}, {"wall_ms", wall_ms}};
  return rep;
}

json sum_report_to_json(const SumReport& rep, json config, double wall_ms) {
  json j;
  j["field"] = json{{"p", rep.p}, {"k", rep.k}, {"q", rep.q}};
  if (rep.k > 1) j["field"]["modulus"] = rep.modulus;
  j["n"] = rep.n;
  j["set_size"] = rep.set_size;
  j["set_hash"] = hash_hex(rep.set_hash);
  j["alpha"] = rep.alpha.code;
  json spsi = json::array();
  for (const auto& z : rep.s_psi) spsi.push_back(complex_to_json(z));
  j["s_psi"] = std::move(spsi);
  j["s_square_bound"] = rep.s_square_bound;
  j["r"] = rep.r;
  j["t"] = json{{"total", rep.t.total},
                {"degenerate", rep.t.degenerate},
                {"equal_vw", rep.t.equal_vw},
                {"distinct", rep.t.distinct}};
  j["t_identity"] = rep.t_id;
  j["t_identity_imag"] = rep.t_id_imag;
  j["w"] = rep.w;
  j["chi"] = rep.chi;
  j["chi_bound"] = rep.chi_bound.has_value() ? json(*rep.chi_bound) : json(nullptr);
  j["checks"] = checks_to_json(rep.checks);
  j["identities_ok"] = rep.identities_ok;
  return finalize_report("sum_report", std::move(config), std::move(j), wall_ms);
}

json search_report_to_json(const SearchReport& rep, json config) {
  json j;
  j["field"] = json{{"p", rep.p}, {"k", rep.k}, {"q", rep.q}};
  if (rep.k > 1) j["field"]["modulus"] = rep.modulus;
  j["n"] = rep.n;
  j["mode"] = rep.mode;
  j["best_size"] = rep.best_size;
  json wit = json::array();
  for (const Point& pt : rep.witness) wit.push_back(point_to_json(rep.p, rep.k, pt));
  j["witness"] = std::move(wit);
  j["exhaustive"] = rep.exhaustive;
  j["budget_aborted"] = rep.budget_aborted;
  j["nodes_explored"] = rep.nodes_explored;
  j["node_budget"] = rep.node_budget;
  j["seed"] = rep.seed;
  j["restarts"] = rep.restarts;
  j["fix_origin"] = rep.fix_origin;
  return finalize_report("search_report", std::move(config), std::move(j), rep.wall_ms);
}

SearchReport search_report_from_json(const json& j) {
  SearchReport rep;
  const auto& f = j.at("field");
  rep.p = f.at("p").get<std::int64_t>();
  rep.k = f.at("k").get<int>();
  rep.q = f.at("q").get<std::int64_t>();
  if (f.contains("modulus")) rep.modulus = f.at("modulus").get<std::vector<std::int64_t>>();
  rep.n = j.at("n").get<int>();
  rep.mode = j.at("mode").get<std::string>();
  rep.best_size = j.at("best_size").get<std::size_t>();
  for (const auto& pj : j.at("witness")) rep.witness.push_back(point_from_json(rep.p, rep.k, pj));
  rep.exhaustive = j.at("exhaustive").get<bool>();
  rep.budget_aborted = j.at("budget_aborted").get<bool>();
  rep.nodes_explored = j.at("nodes_explored").get<std::uint64_t>();
  rep.node_budget = j.at("node_budget").get<std::uint64_t>();
  rep.seed = j.at("seed").get<std::uint64_t>();
  rep.restarts = j.at("restarts").get<int>();
  rep.fix_origin = j.at("fix_origin").get<bool>();
  return rep;
}

json grid_report_to_json(const GridReport& rep, json config, double wall_ms) {
  json j;
  j["field"] = json{{"p", rep.p}, {"k", 1}, {"q", rep.p}};
  j["n"] = rep.n;
  j["m"] = rep.m;
  j["size"] = rep.size;
  j["acute"] = rep.acute;
  j["violation"] = rep.violation.has_value()
                       ? json(std::vector<std::size_t>(rep.violation->begin(), rep.violation->end()))
                       : json(nullptr);
  if (rep.delta_int_range.has_value()) {
    j["delta_int_min"] = rep.delta_int_range->first;
    j["delta_int_max"] = rep.delta_int_range->second;
  } else {
    j["delta_int_min"] = nullptr;
    j["delta_int_max"] = nullptr;
  }
  j["has_negative_delta"] = rep.has_negative_delta;
  j["p_mod_4"] = rep.p_mod_4;
  json pts = json::array();
  for (const Point& pt : rep.points) pts.push_back(point_to_json(rep.p, 1, pt));
  j["points"] = std::move(pts);
  return finalize_report("grid_report", std::move(config), std::move(j), wall_ms);
}

json verify_report_to_json(const PointSet& zs, const AcuteOutcome& outcome, json config,
                           double wall_ms) {
  json j;
  j["field"] = field_to_json(zs.field());
  j["n"] = zs.n();
  j["set_size"] = zs.size();
  j["set_hash"] = hash_hex(zs.canonical_hash());
  j["acute"] = outcome.acute;
  j["violation"] = outcome.violation.has_value()
                       ? json(std::vector<std::size_t>(outcome.violation->begin(), outcome.violation->end()))
                       : json(nullptr);
  j["triples_checked"] = outcome.triples_checked;
  return finalize_report("verify_report", std::move(config), std::move(j), wall_ms);
}

json checkpoint_to_json(const ExactCheckpoint& ck, json config) {
  json j;
  j["fix_origin"] = ck.fix_origin;
  j["chosen"] = ck.chosen;
  j["cursor"] = ck.cursor;
  j["incumbent"] = ck.incumbent;
  j["best_size"] = ck.best_size;
  j["nodes_explored"] = ck.nodes_explored;
  return finalize_report("checkpoint", std::move(config), std::move(j), 0.0);
}

ExactCheckpoint checkpoint_from_json(const json& j) {
  ExactCheckpoint ck;
  ck.fix_origin = j.at("fix_origin").get<bool>();
  ck.chosen = j.at("chosen").get<std::vector<std::vector<std::int64_t>>>();
  ck.cursor = j.at("cursor").get<std::vector<std::size_t>>();
  ck.incumbent = j.at("incumbent").get<std::vector<std::vector<std::int64_t>>>();
  ck.best_size = j.at("best_size").get<std::size_t>();
  ck.nodes_explored = j.at("nodes_explored").get<std::uint64_t>();
  return ck;
}

json bound_table_to_json(const std::vector<BoundRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back(json{{"q", r.q},
                       {"n", r.n},
                       {"best_size", r.best_size},
                       {"exhaustive", r.exhaustive},
                       {"cube_bound_ok", r.cube_bound_ok},
                       {"cube_bound_lhs", r.cube_bound_lhs},
                       {"cube_bound_rhs", r.cube_bound_rhs},
                       {"ref_curve", r.ref_curve},
                       {"ref_note", r.ref_note}});
  }
  return arr;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::string bound_table_to_csv(const std::vector<BoundRow>& rows) {
  std::ostringstream os;
  os << "q,n,best_size,exhaustive,cube_bound_ok,cube_bound_lhs,cube_bound_rhs,ref_curve,ref_note\r\n";
  for (const auto& r : rows) {
    os << r.q << ',' << r.n << ',' << r.best_size << ',' << (r.exhaustive ? "true" : "false") << ','
       << (r.cube_bound_ok ? "true" : "false") << ',' << csv_escape(r.cube_bound_lhs) << ','
       << csv_escape(r.cube_bound_rhs) << ',' << csv_escape(r.ref_curve) << ','
       << csv_escape(r.ref_note) << "\r\n";
  }
  return os.str();
}

std::string qr_run_to_csv(const std::vector<std::pair<std::int64_t, int>>& rows) {
  std::ostringstream os;
  os << "p,run_length\r\n";
  for (const auto& [p, m] : rows) os << p << ',' << m << "\r\n";
  return os.str();
}

std::string hash_hex(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.parent_path();
  if (!dir.empty()) fs::create_directories(dir);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) fail(Errc::IoError, "cannot open " + tmp.string() + " for writing");
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) fail(Errc::IoError, "short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(Errc::IoError, "cannot open " + path.string());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void validate_report(const json& rep) {
  if (!rep.contains("kind") || !rep.contains("config") || !rep.contains("timing")) {
    fail(Errc::InvalidArgument, "report lacks kind/config/timing");
  }
  const std::string kind = rep.at("kind").get<std::string>();
  const json& config = rep.at("config");
  if (rep.contains("field")) {
    auto field = field_from_json(rep.at("field"));  // must rebuild cleanly
    if (config.contains("field")) {
      auto echoed = field_from_json(config.at("field"));
      if (!field->same_field(*echoed)) {
        fail(Errc::InvalidArgument, "config echo disagrees with the report field");
      }
    }
    if (kind == "search_report") {
      const SearchReport sr = search_report_from_json(rep);
      PointSet zs(field, sr.n);
      for (const Point& pt : sr.witness) zs.insert(pt);
      if (zs.size() != sr.best_size) fail(Errc::InvalidArgument, "witness size mismatch");
      if (!set_is_acute(zs).acute) fail(Errc::InvalidArgument, "witness fails re-verification");
    }
    if (kind == "grid_report") {
      PointSet zs(field, rep.at("n").get<int>());
      for (const auto& pj : rep.at("points")) {
        zs.insert(point_from_json(field->p(), field->k(), pj));
      }
      if (set_is_acute(zs).acute != rep.at("acute").get<bool>()) {
        fail(Errc::InvalidArgument, "grid acuteness flag fails re-verification");
      }
    }
    if (kind == "sum_report" || kind == "verify_report") {
      if (!rep.contains("set_hash")) fail(Errc::InvalidArgument, "report lacks set_hash");
      if (config.contains("set_hash") && config.at("set_hash") != rep.at("set_hash")) {
        fail(Errc::InvalidArgument, "config echo disagrees with the report set hash");
      }
    }
  }
}

}  // namespace acutefq::io
