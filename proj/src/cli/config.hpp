#ifndef MVMIMIC_CLI_CONFIG_HPP
#define MVMIMIC_CLI_CONFIG_HPP

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mvmimic/model.hpp"
#include "mvmimic/study.hpp"

// Config files are JSON objects. One schema serves every command:
//
//   market:  "mu" [k], "sigma" [[k x k]]   or   "returns" "file.csv", "annualize" P
//   group:   "alpha" [n], "beta" [n], "phi" [n]
//   study:   "alpha1", "phi_set" [..], "a_set" [..], "a_range" [lo, hi],
//            "phi_range" [lo, hi], "grid_points"
//
// Keys outside this list are rejected so that typos surface as errors.

namespace mvmimic::cli {

using Json = nlohmann::json;

Json load_config(const std::filesystem::path& path);

/// Parses a JSON literal given on the command line, naming the flag on error.
Json parse_inline(const std::string& text, const std::string& flag);

Vector<double> to_vector(const Json& value, const std::string& key);
Matrix<double> to_matrix(const Json& value, const std::string& key);
Json to_json(const Vector<double>& v);
/// Rows of the JSON array are columns of `m` (one array per investor).
Json columns_to_json(const Matrix<double>& m);
Json rows_to_json(const Matrix<double>& m);

struct MarketInput {
  MarketModel<double> market;
  std::vector<std::string> asset_names;
  std::vector<std::filesystem::path> files;
};

/// Uses "returns" (+ "annualize") when present, otherwise "mu" and "sigma".
MarketInput resolve_market(const Json& cfg);

InvestorGroup<double> resolve_group(const Json& cfg);

/// Defaults overridden by any study keys present in cfg.
StudyConfig resolve_study(const Json& cfg);

/// 64-bit FNV-1a of the file contents, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

Json manifest(const std::string& command, const Json& config,
              const std::vector<std::filesystem::path>& inputs);

}  // namespace mvmimic::cli

#endif  // MVMIMIC_CLI_CONFIG_HPP
