#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "heckelab/report.hpp"

namespace heckelab::cli {

nlohmann::json to_json(const VerificationReport& r, const std::string& version);
// Inverse of to_json; throws nlohmann::json::exception on malformed input.
VerificationReport from_json(const nlohmann::json& j);

std::string csv_escape(const std::string& field);
// One file per table, named <stem>.<table>.csv next to `json_path`.
std::vector<std::filesystem::path> write_tables_csv(const VerificationReport& r, const std::filesystem::path& json_path);

// Writes the JSON report and its CSV tables; throws std::runtime_error naming the path.
void write_report(const VerificationReport& r, const std::filesystem::path& json_path, const std::string& version);

}  // namespace heckelab::cli
