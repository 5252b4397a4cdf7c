#include "mvmimic/moments.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <utility>

namespace mvmimic::moments {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

[[noreturn]] void parse_error(std::size_t row, const std::string& column, const std::string& what) {
  throw Error(ErrorCode::ParseError,
              "row " + std::to_string(row) + ", column " + column + ": " + what);
}

}  // namespace

ReturnSample make_sample(Matrix<double> returns, std::vector<std::string> asset_names) {
  const Eigen::Index k = returns.cols();
  if (static_cast<Eigen::Index>(asset_names.size()) != k) {
    throw Error(ErrorCode::DimensionMismatch, "asset name count differs from column count");
  }
  if (k < 2) {
    throw Error(ErrorCode::TooFewAssets, "at least 2 assets required, got " + std::to_string(k));
  }
  if (returns.rows() < k + 2) {
    throw Error(ErrorCode::TooFewObservations,
                std::to_string(returns.rows()) + " observations for " + std::to_string(k) +
                    " assets; need at least " + std::to_string(k + 2));
  }
  if (!returns.allFinite()) {
    throw Error(ErrorCode::NonFiniteValue, "return sample contains non-finite values");
  }
  return {std::move(returns), std::move(asset_names)};
}

ReturnSample parse_csv(std::istream& in) {
  std::string line;
  std::vector<std::string> names;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::string_view header = line;
    if (header.substr(0, 3) == "\xEF\xBB\xBF") header.remove_prefix(3);
    for (auto cell : split(header)) names.emplace_back(cell);
    break;
  }
  if (names.empty()) {
    throw Error(ErrorCode::ParseError, "missing header row");
  }
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (names[j].empty()) parse_error(0, std::to_string(j + 1), "empty asset name in header");
  }

  const std::size_t k = names.size();
  std::vector<double> values;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split(line);
    if (cells.size() != k) {
      parse_error(row, "*",
                  "expected " + std::to_string(k) + " cells, found " + std::to_string(cells.size()));
    }
    for (std::size_t j = 0; j < k; ++j) {
      const auto cell = cells[j];
      if (cell.empty()) parse_error(row, names[j], "empty cell");
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        parse_error(row, names[j], "not a number: '" + std::string(cell) + "'");
      }
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::NonFiniteValue,
                    "row " + std::to_string(row) + ", column " + names[j] + ": non-finite value");
      }
      values.push_back(v);
    }
  }

  Matrix<double> returns(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < row; ++i)
    for (std::size_t j = 0; j < k; ++j)
      returns(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i * k + j];
  return make_sample(std::move(returns), std::move(names));
}

ReturnSample load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open " + path.string());
  }
  return parse_csv(in);
}

Matrix<double> sample_covariance(const Matrix<double>& x) {
  const Vector<double> mean = x.colwise().mean().transpose();
  const Matrix<double> centered = x.rowwise() - mean.transpose();
  const Matrix<double> cov = centered.transpose() * centered / static_cast<double>(x.rows() - 1);
  return (cov + cov.transpose()) / 2.0;
}

MarketModel<double> estimate(const ReturnSample& sample, std::optional<int> periods_per_year) {
  if (periods_per_year && *periods_per_year <= 0) {
    throw Error(ErrorCode::InvalidConfig, "periods per year must be a positive integer");
  }
  Vector<double> mean = sample.returns.colwise().mean().transpose();
  Matrix<double> cov = sample_covariance(sample.returns);
  if (periods_per_year) {
    mean *= *periods_per_year;
    cov *= *periods_per_year;
  }
  return build_market(mean, cov);
}

}  // namespace mvmimic::moments
