#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mvmimic/moments.hpp"
#include "mvmimic/random.hpp"
#include "support/test_support.hpp"

using namespace mvmimic;
using namespace mvmimic::testing;
using doctest::Approx;

namespace {

std::string two_column_csv(int rows, int blank_row = -1) {
  std::ostringstream out;
  out << "A,B\n";
  for (int r = 1; r <= rows; ++r) {
    const double a = 0.01 * ((r * 7) % 11) - 0.05;
    const double b = 0.02 * ((r * 5) % 13) - 0.1;
    if (r == blank_row) {
      out << a << ",\n";
    } else {
      out << a << "," << b << "\n";
    }
  }
  return out.str();
}

ReturnSample parse(const std::string& text) {
  std::istringstream in(text);
  return moments::parse_csv(in);
}

ErrorCode code_of_parse(const std::string& text, std::string* message = nullptr) {
  try {
    parse(text);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  FAIL("expected an mvmimic::Error");
  return ErrorCode::InvalidConfig;
}

}  // namespace

TEST_CASE("60-row two-column file") {
  const auto s = parse(two_column_csv(60));
  CHECK(s.assets() == 2);
  CHECK(s.observations() == 60);
  CHECK(s.asset_names == std::vector<std::string>{"A", "B"});
  CHECK(s.returns(0, 0) == Approx(0.02));
}

TEST_CASE("blank cell is reported with its row") {
  std::string message;
  CHECK(code_of_parse(two_column_csv(60, 17), &message) == ErrorCode::ParseError);
  CHECK(message.find("row 17") != std::string::npos);
  CHECK(message.find("column B") != std::string::npos);
}

TEST_CASE("malformed files") {
  CHECK(code_of_parse("A,B\n0.1,0.2\n0.3,0.4\n") == ErrorCode::TooFewObservations);
  CHECK(code_of_parse("A,B\n0.1,0.2\n0.3\n0.1,0.2\n0.1,0.3\n") == ErrorCode::ParseError);
  CHECK(code_of_parse("A,B\n0.1,abc\n0.3,0.1\n0.1,0.2\n0.1,0.3\n") == ErrorCode::ParseError);
  CHECK(code_of_parse("A,B\n0.1,nan\n0.3,0.1\n0.1,0.2\n0.1,0.3\n") == ErrorCode::NonFiniteValue);
  CHECK(code_of_parse("") == ErrorCode::ParseError);
  CHECK(code_of_parse("A\n0.1\n0.2\n0.3\n") == ErrorCode::TooFewAssets);
}

TEST_CASE("byte-order mark, blank lines and CRLF are tolerated") {
  const auto s = parse("\xEF\xBB\xBF" "X,Y\r\n0.1,0.2\r\n\r\n0.3,0.1\r\n0.0,0.2\r\n0.1,0.3\r\n");
  CHECK(s.asset_names == std::vector<std::string>{"X", "Y"});
  CHECK(s.observations() == 4);
}

TEST_CASE("load_csv reads files and reports missing ones") {
  const auto path = std::filesystem::temp_directory_path() / "mvmimic_test_moments.csv";
  {
    std::ofstream out(path);
    out << two_column_csv(60);
  }
  CHECK(moments::load_csv(path).observations() == 60);
  std::filesystem::remove(path);
  try {
    moments::load_csv(path);
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
}

TEST_CASE("degenerate samples are not positive definite") {
  Mat anti(10, 2);
  for (int t = 0; t < 10; ++t) {
    anti(t, 0) = 0.01 * t - 0.03;
    anti(t, 1) = -anti(t, 0);
  }
  const auto s1 = moments::make_sample(anti, {"A", "B"});
  try {
    moments::estimate(s1);
    FAIL("expected NotPositiveDefinite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositiveDefinite);
  }

  Mat constant = anti;
  constant.col(1).setConstant(0.01);
  const auto s2 = moments::make_sample(constant, {"A", "B"});
  try {
    moments::estimate(s2);
    FAIL("expected NotPositiveDefinite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositiveDefinite);
  }
}

TEST_CASE("divisor is T - 1") {
  const double r = 0.03;
  Mat x(2, 1);
  x << 0.0, 2.0 * r;
  CHECK(moments::sample_covariance(x)(0, 0) == Approx(2.0 * r * r).epsilon(1e-15));
}

TEST_CASE("annualization scales both moments") {
  const auto s = parse(two_column_csv(60));
  const auto monthly = moments::estimate(s);
  const auto annual = moments::estimate(s, 12);
  CHECK(rel_diff(annual.mu(), Vec(12.0 * monthly.mu())) < 1e-15);
  CHECK(rel_diff(annual.sigma(), Mat(12.0 * monthly.sigma())) < 1e-15);
  CHECK_THROWS_AS(moments::estimate(s, 0), Error);
}

TEST_CASE("estimation is permutation-equivariant") {
  random::Engine rng(42);
  Mat x(200, 4);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = random::standard_normal(rng) * 0.05;
  Eigen::PermutationMatrix<Eigen::Dynamic> p(4);
  p.indices() << 2, 0, 3, 1;
  const auto base = moments::estimate(moments::make_sample(x, {"a", "b", "c", "d"}));
  const auto permuted = moments::estimate(moments::make_sample(Mat(x * p), {"c", "a", "d", "b"}));
  CHECK(rel_diff(permuted.mu(), Vec(p.transpose() * base.mu())) < 1e-14);
  CHECK(rel_diff(permuted.sigma(), Mat(p.transpose() * base.sigma() * p)) < 1e-14);
}

TEST_CASE("estimates converge as the sample grows") {
  Vec mu(3);
  mu << 0.01, -0.02, 0.03;
  Mat sigma(3, 3);
  sigma << 0.04, 0.01, -0.005, 0.01, 0.09, 0.02, -0.005, 0.02, 0.0625;
  const Mat l = Eigen::LLT<Mat>(sigma).matrixL();

  random::Engine rng(2718);
  std::vector<double> mu_err, sigma_err;
  for (Eigen::Index t : {100, 1000, 10000, 100000}) {
    Mat x(t, 3);
    for (Eigen::Index i = 0; i < t; ++i) {
      Vec z(3);
      for (auto& v : z) v = random::standard_normal(rng);
      x.row(i) = (mu + l * z).transpose();
    }
    const auto m = moments::estimate(moments::make_sample(x, {"a", "b", "c"}));
    mu_err.push_back((m.mu() - mu).cwiseAbs().maxCoeff());
    sigma_err.push_back((m.sigma() - sigma).cwiseAbs().maxCoeff());
  }
  CHECK(mu_err.back() < mu_err.front());
  CHECK(sigma_err.back() < sigma_err.front());
  CHECK(mu_err.back() < 0.003);
  CHECK(sigma_err.back() < 0.003);
}
