#ifndef MVMIMIC_MOMENTS_HPP
#define MVMIMIC_MOMENTS_HPP

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "mvmimic/model.hpp"

namespace mvmimic {

/// T x k matrix of simple per-period returns, one row per period in
/// chronological order. Requires T >= k + 2 and finite entries.
struct ReturnSample {
  Matrix<double> returns;
  std::vector<std::string> asset_names;

  Eigen::Index observations() const noexcept { return returns.rows(); }
  Eigen::Index assets() const noexcept { return returns.cols(); }
};

namespace moments {

/// Validates shape and contents; throws TooFewObservations / NonFiniteValue.
ReturnSample make_sample(Matrix<double> returns, std::vector<std::string> asset_names);

/// Comma-separated, first row holds asset names, '.' decimal point. Data rows
/// are numbered from 1 in error messages (the header is not counted).
ReturnSample parse_csv(std::istream& in);

ReturnSample load_csv(const std::filesystem::path& path);

/// Unbiased (divisor T-1) covariance of the columns of x; no validation.
Matrix<double> sample_covariance(const Matrix<double>& x);

/// Column means and the T-1 sample covariance, optionally scaled by the
/// number of periods per year for both moments.
MarketModel<double> estimate(const ReturnSample& sample,
                             std::optional<int> periods_per_year = std::nullopt);

}  // namespace moments
}  // namespace mvmimic

#endif  // MVMIMIC_MOMENTS_HPP
