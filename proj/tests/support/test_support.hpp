#ifndef MVMIMIC_TESTS_SUPPORT_HPP
#define MVMIMIC_TESTS_SUPPORT_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

#include "mvmimic/model.hpp"

// Reference computations used only by the tests. They deliberately take the
// long way round (explicit sums, a generic KKT solve with full pivoting) so
// they share no code path with the library routines they check.

namespace mvmimic::testing {

using Vec = Vector<double>;
using Mat = Matrix<double>;

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline Mat mat2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

/// Max-norm relative difference, scaled by the reference.
inline double rel_diff(const Mat& actual, const Mat& reference) {
  const double scale = std::max(reference.cwiseAbs().maxCoeff(), 1e-300);
  return (actual - reference).cwiseAbs().maxCoeff() / scale;
}

inline double rel_diff(double actual, double reference) {
  return std::abs(actual - reference) / std::max(std::abs(reference), 1e-300);
}

/// argmin 1/2 x'Hx - f'x subject to Cx = d, via the bordered system and a
/// full-pivoting LU.
inline Vec equality_qp(const Mat& h, const Vec& f, const Mat& c, const Vec& d) {
  const Eigen::Index n = h.rows();
  const Eigen::Index m = c.rows();
  Mat kkt = Mat::Zero(n + m, n + m);
  kkt.topLeftCorner(n, n) = h;
  kkt.topRightCorner(n, m) = c.transpose();
  kkt.bottomLeftCorner(m, n) = c;
  Vec rhs(n + m);
  rhs << f, d;
  const Vec x = kkt.fullPivLu().solve(rhs);
  return x.head(n);
}

/// Unit-sum portfolio maximizing w'mu - alpha/2 w'Sigma w.
inline Vec single_investor_qp(const Vec& mu, const Mat& sigma, double alpha) {
  const Eigen::Index k = mu.size();
  return equality_qp(alpha * sigma, mu, Mat::Ones(1, k), Vec::Ones(1));
}

/// Global minimum variance portfolio by the same generic route.
inline Vec min_variance_qp(const Mat& sigma) {
  const Eigen::Index k = sigma.rows();
  return equality_qp(sigma, Vec::Zero(k), Mat::Ones(1, k), Vec::Ones(1));
}

/// sum_i beta_i [w_i'mu - alpha_i/2 w_i'Sigma w_i - phi_i/2 (w_i - Wb)'Sigma(w_i - Wb)]
inline double direct_penalized_utility(const Vec& mu, const Mat& sigma, const Vec& alpha,
                                       const Vec& beta, const Vec& phi, const Mat& w) {
  const Eigen::Index n = w.cols();
  Vec fund = Vec::Zero(w.rows());
  for (Eigen::Index i = 0; i < n; ++i) fund += beta(i) * w.col(i);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec wi = w.col(i);
    const Vec d = wi - fund;
    const double eu = wi.dot(mu) - alpha(i) / 2.0 * wi.dot(sigma * wi) -
                      phi(i) / 2.0 * d.dot(sigma * d);
    total += beta(i) * eu;
  }
  return total;
}

/// Random k x n matrix with unit column sums.
template <typename Rng>
Mat random_feasible(Rng& rng, Eigen::Index k, Eigen::Index n, double spread = 1.0) {
  std::uniform_real_distribution<double> u(-spread, spread);
  Mat w(k, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < k; ++i) w(i, j) = u(rng);
    w.col(j).array() += (1.0 - w.col(j).sum()) / static_cast<double>(k);
  }
  return w;
}

}  // namespace mvmimic::testing

#endif  // MVMIMIC_TESTS_SUPPORT_HPP
