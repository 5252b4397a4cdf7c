#include "config.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>

#include "mvmimic/error.hpp"
#include "mvmimic/moments.hpp"

#ifndef MVMIMIC_VERSION
#define MVMIMIC_VERSION "0.0.0"
#endif

namespace mvmimic::cli {
namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "mu",      "sigma",   "returns", "annualize", "alpha",     "beta",        "phi",
      "alpha1",  "phi_set", "a_set",   "a_range",   "phi_range", "grid_points",
  };
  return keys;
}

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); }

double to_number(const Json& v, const std::string& key) {
  if (!v.is_number()) invalid(key + ": expected a number");
  return v.get<double>();
}

Interval to_interval(const Json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 2) invalid(key + ": expected [lo, hi]");
  return {to_number(v[0], key), to_number(v[1], key)};
}

std::vector<double> to_list(const Json& v, const std::string& key) {
  const Vector<double> x = to_vector(v, key);
  return {x.data(), x.data() + x.size()};
}

}  // namespace

Json load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path.string());
  Json cfg = Json::parse(in, nullptr, false);
  if (cfg.is_discarded()) invalid(path.string() + ": not valid JSON");
  if (!cfg.is_object()) invalid(path.string() + ": top level must be an object");
  for (const auto& item : cfg.items()) {
    if (!known_keys().count(item.key())) invalid("unknown config key '" + item.key() + "'");
  }
  return cfg;
}

Json parse_inline(const std::string& text, const std::string& flag) {
  Json v = Json::parse(text, nullptr, false);
  if (v.is_discarded()) invalid(flag + ": not valid JSON");
  return v;
}

Vector<double> to_vector(const Json& value, const std::string& key) {
  if (!value.is_array()) invalid(key + ": expected an array of numbers");
  Vector<double> v(static_cast<Eigen::Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = to_number(value[i], key);
  }
  return v;
}

Matrix<double> to_matrix(const Json& value, const std::string& key) {
  if (!value.is_array() || value.empty()) invalid(key + ": expected an array of rows");
  const std::size_t rows = value.size();
  const std::size_t cols = value[0].is_array() ? value[0].size() : 0;
  Matrix<double> m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!value[i].is_array() || value[i].size() != cols) invalid(key + ": rows must have equal length");
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_number(value[i][j], key);
    }
  }
  return m;
}

Json to_json(const Vector<double>& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

Json columns_to_json(const Matrix<double>& m) {
  Json out = Json::array();
  for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(to_json(m.col(j)));
  return out;
}

Json rows_to_json(const Matrix<double>& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(m.row(i).transpose()));
  return out;
}

MarketInput resolve_market(const Json& cfg) {
  if (cfg.contains("returns")) {
    if (!cfg["returns"].is_string()) invalid("returns: expected a file path");
    std::optional<int> periods;
    if (cfg.contains("annualize")) {
      if (!cfg["annualize"].is_number_integer()) invalid("annualize: expected a positive integer");
      periods = cfg["annualize"].get<int>();
    }
    const std::filesystem::path path = cfg["returns"].get<std::string>();
    auto sample = moments::load_csv(path);
    auto market = moments::estimate(sample, periods);
    return {std::move(market), std::move(sample.asset_names), {path}};
  }
  if (!cfg.contains("mu") || !cfg.contains("sigma")) {
    invalid("market: provide either returns or both mu and sigma");
  }
  auto market = build_market(to_vector(cfg["mu"], "mu"), to_matrix(cfg["sigma"], "sigma"));
  std::vector<std::string> names;
  for (Eigen::Index i = 0; i < market.assets(); ++i) names.push_back("asset" + std::to_string(i + 1));
  return {std::move(market), std::move(names), {}};
}

InvestorGroup<double> resolve_group(const Json& cfg) {
  for (const char* key : {"alpha", "beta", "phi"}) {
    if (!cfg.contains(key)) invalid(std::string("group: missing ") + key);
  }
  return build_group(to_vector(cfg["alpha"], "alpha"), to_vector(cfg["beta"], "beta"),
                     to_vector(cfg["phi"], "phi"));
}

StudyConfig resolve_study(const Json& cfg) {
  StudyConfig out;
  if (cfg.contains("returns") || cfg.contains("mu") || cfg.contains("sigma")) {
    out.market = resolve_market(cfg).market;
  }
  if (cfg.contains("alpha1")) out.alpha1 = to_number(cfg["alpha1"], "alpha1");
  if (cfg.contains("phi_set")) out.phi_set = to_list(cfg["phi_set"], "phi_set");
  if (cfg.contains("a_set")) out.a_set = to_list(cfg["a_set"], "a_set");
  if (cfg.contains("a_range")) out.a_range = to_interval(cfg["a_range"], "a_range");
  if (cfg.contains("phi_range")) out.phi_range = to_interval(cfg["phi_range"], "phi_range");
  if (cfg.contains("grid_points")) {
    if (!cfg["grid_points"].is_number_integer()) invalid("grid_points: expected an integer");
    out.grid_points = cfg["grid_points"].get<int>();
  }
  validate(out);
  return out;
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto it = std::istreambuf_iterator<char>(in); it != std::istreambuf_iterator<char>(); ++it) {
    h ^= static_cast<unsigned char>(*it);
    h *= 0x100000001b3ULL;
  }
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(h));
  return buf.data();
}

Json manifest(const std::string& command, const Json& config,
              const std::vector<std::filesystem::path>& inputs) {
  Json files = Json::array();
  for (const auto& p : inputs) {
    files.push_back({{"path", p.string()}, {"fnv1a64", file_digest(p)}});
  }
  return {{"tool", "mvmimic"},
          {"version", MVMIMIC_VERSION},
          {"command", command},
          {"config", config},
          {"inputs", files}};
}

}  // namespace mvmimic::cli
