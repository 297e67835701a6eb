#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "acutefq/charsums.hpp"
#include "acutefq/geometry.hpp"
#include "acutefq/search.hpp"

namespace acutefq::io {

using json = nlohmann::json;

json field_to_json(const Field& f);
std::shared_ptr<const Field> field_from_json(const json& j);

/// Point-set document:
///   {"p": int, "k": int, "modulus": [int] (k > 1 only), "n": int,
///    "points": [[coord, ...], ...]}
/// where a coord is an integer for k = 1 and a length-k little-endian
/// coefficient array for k > 1 (index i = coefficient of x^i).
json point_set_to_json(const PointSet& zs);
PointSet point_set_from_json(const json& j);
PointSet load_point_set(const std::filesystem::path& path);

json point_to_json(std::int64_t p, int k, const Point& pt);
Point point_from_json(std::int64_t p, int k, const json& j);

json checks_to_json(const std::vector<CheckResult>& checks);

json sum_report_to_json(const SumReport& rep, json config, double wall_ms);
json search_report_to_json(const SearchReport& rep, json config);
json grid_report_to_json(const GridReport& rep, json config, double wall_ms);
json verify_report_to_json(const PointSet& zs, const AcuteOutcome& outcome, json config,
                           double wall_ms);

json checkpoint_to_json(const ExactCheckpoint& ck, json config);
ExactCheckpoint checkpoint_from_json(const json& j);

json bound_table_to_json(const std::vector<BoundRow>& rows);
std::string bound_table_to_csv(const std::vector<BoundRow>& rows);
std::string qr_run_to_csv(const std::vector<std::pair<std::int64_t, int>>& rows);

SearchReport search_report_from_json(const json& j);

/// Structural re-validation of an emitted report against its own config
/// echo: field rebuilds, hashes match, witnesses re-verify.
void validate_report(const json& rep);

std::string csv_escape(const std::string& s);

std::string hash_hex(std::uint64_t h);

void write_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// Wraps a payload with its config echo and the volatile "timing" block
/// (the one block report comparisons are allowed to ignore).
json finalize_report(const std::string& kind, json config, json payload, double wall_ms);

}  // namespace acutefq::io
