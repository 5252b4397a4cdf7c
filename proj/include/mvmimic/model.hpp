#ifndef MVMIMIC_MODEL_HPP
#define MVMIMIC_MODEL_HPP

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "mvmimic/error.hpp"

namespace mvmimic {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

namespace detail {

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& x) {
  return x.allFinite();
}

// Cholesky with a relative pivot floor: a factorization that only succeeds
// because rounding left a tiny positive pivot on a singular matrix is
// reported as a failure.
template <typename Scalar>
bool positive_definite(const Eigen::LLT<Matrix<Scalar>>& llt, const Matrix<Scalar>& a) {
  if (llt.info() != Eigen::Success) return false;
  const Scalar scale = a.diagonal().cwiseAbs().maxCoeff();
  if (!(scale > Scalar(0))) return false;
  const Scalar floor =
      Scalar(a.rows()) * std::numeric_limits<Scalar>::epsilon() * scale;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const Scalar pivot = llt.matrixLLT()(i, i);
    if (!(pivot * pivot > floor)) return false;
  }
  return true;
}

}  // namespace detail

/// Expected returns and covariance of k risky assets.
///
/// Instances are only obtainable through build_market(), so every live value
/// satisfies: k >= 2, sigma symmetric to 1e-12 relative, sigma positive
/// definite. The Cholesky factor is kept for downstream solves.
template <typename Scalar = double>
class MarketModel {
 public:
  const Vector<Scalar>& mu() const noexcept { return mu_; }
  const Matrix<Scalar>& sigma() const noexcept { return sigma_; }
  const Eigen::LLT<Matrix<Scalar>>& cholesky() const noexcept { return llt_; }
  Eigen::Index assets() const noexcept { return mu_.size(); }

 private:
  MarketModel(Vector<Scalar> mu, Matrix<Scalar> sigma, Eigen::LLT<Matrix<Scalar>> llt)
      : mu_(std::move(mu)), sigma_(std::move(sigma)), llt_(std::move(llt)) {}

  template <typename S>
  friend MarketModel<S> build_market(const Vector<S>& mu, const Matrix<S>& sigma);

  Vector<Scalar> mu_;
  Matrix<Scalar> sigma_;
  Eigen::LLT<Matrix<Scalar>> llt_;
};

template <typename Scalar>
MarketModel<Scalar> build_market(const Vector<Scalar>& mu, const Matrix<Scalar>& sigma) {
  const Eigen::Index k = mu.size();
  if (sigma.rows() != k || sigma.cols() != k) {
    throw Error(ErrorCode::DimensionMismatch,
                "mu has " + std::to_string(k) + " entries but sigma is " +
                    std::to_string(sigma.rows()) + "x" + std::to_string(sigma.cols()));
  }
  if (k < 2) {
    throw Error(ErrorCode::TooFewAssets, "at least 2 assets required, got " + std::to_string(k));
  }
  if (!detail::all_finite(mu) || !detail::all_finite(sigma)) {
    throw Error(ErrorCode::NonFiniteValue, "mu and sigma must be finite");
  }
  const Scalar scale = sigma.cwiseAbs().maxCoeff();
  const Scalar asym = (sigma - sigma.transpose()).cwiseAbs().maxCoeff();
  if (asym > Scalar(1e-12) * scale) {
    throw Error(ErrorCode::NotSymmetric, "sigma is not symmetric");
  }
  Eigen::LLT<Matrix<Scalar>> llt(sigma);
  if (!detail::positive_definite(llt, sigma)) {
    throw Error(ErrorCode::NotPositiveDefinite, "sigma is not positive definite");
  }
  return MarketModel<Scalar>(mu, sigma, std::move(llt));
}

/// Risk aversions, wealth shares and mimicking coefficients of n investors.
template <typename Scalar = double>
class InvestorGroup {
 public:
  const Vector<Scalar>& alpha() const noexcept { return alpha_; }
  const Vector<Scalar>& beta() const noexcept { return beta_; }
  const Vector<Scalar>& phi() const noexcept { return phi_; }
  Eigen::Index investors() const noexcept { return alpha_.size(); }

  /// Wealth-weighted mean risk aversion.
  Scalar alpha_bar() const { return beta_.dot(alpha_); }
  /// Wealth-weighted mean mimicking coefficient.
  Scalar phi_bar() const { return beta_.dot(phi_); }

 private:
  InvestorGroup(Vector<Scalar> alpha, Vector<Scalar> beta, Vector<Scalar> phi)
      : alpha_(std::move(alpha)), beta_(std::move(beta)), phi_(std::move(phi)) {}

  template <typename S>
  friend InvestorGroup<S> build_group(const Vector<S>& alpha, const Vector<S>& beta,
                                      const Vector<S>& phi);

  Vector<Scalar> alpha_;
  Vector<Scalar> beta_;
  Vector<Scalar> phi_;
};

// Distinct risk aversions are not required and phi = 0 is accepted (classical case).
template <typename Scalar>
InvestorGroup<Scalar> build_group(const Vector<Scalar>& alpha, const Vector<Scalar>& beta,
                                  const Vector<Scalar>& phi) {
  const Eigen::Index n = alpha.size();
  if (beta.size() != n || phi.size() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "alpha, beta and phi must have equal length (got " + std::to_string(n) + ", " +
                    std::to_string(beta.size()) + ", " + std::to_string(phi.size()) + ")");
  }
  if (n < 2) {
    throw Error(ErrorCode::TooFewInvestors,
                "at least 2 investors required, got " + std::to_string(n));
  }
  if (!detail::all_finite(alpha) || !detail::all_finite(beta) || !detail::all_finite(phi)) {
    throw Error(ErrorCode::NonFiniteValue, "alpha, beta and phi must be finite");
  }
  if (!(alpha.array() > Scalar(0)).all()) {
    throw Error(ErrorCode::NonPositiveAlpha, "every alpha must be > 0");
  }
  if (!(beta.array() > Scalar(0)).all()) {
    throw Error(ErrorCode::NonPositiveBeta, "every beta must be > 0");
  }
  if (std::abs(beta.sum() - Scalar(1)) > Scalar(1e-12)) {
    throw Error(ErrorCode::BetaNotNormalized, "beta must sum to 1");
  }
  if (!(phi.array() >= Scalar(0)).all()) {
    throw Error(ErrorCode::NegativePhi, "every phi must be >= 0");
  }
  return InvestorGroup<Scalar>(alpha, beta, phi);
}

template <typename Scalar>
MarketModel<Scalar> validate(const MarketModel<Scalar>& m) {
  return build_market(m.mu(), m.sigma());
}

template <typename Scalar>
InvestorGroup<Scalar> validate(const InvestorGroup<Scalar>& g) {
  return build_group(g.alpha(), g.beta(), g.phi());
}

/// k x n matrix whose column i holds investor i's portfolio weights; every
/// column sums to one.
template <typename Scalar = double>
class PortfolioMatrix {
 public:
  static constexpr double default_tolerance = 1e-10;

  explicit PortfolioMatrix(Matrix<Scalar> w, Scalar tolerance = Scalar(default_tolerance))
      : w_(std::move(w)) {
    if (w_.rows() == 0 || w_.cols() == 0) {
      throw Error(ErrorCode::DimensionMismatch, "portfolio matrix must be non-empty");
    }
    if (!w_.allFinite()) {
      throw Error(ErrorCode::NonFiniteValue, "portfolio weights must be finite");
    }
    const Vector<Scalar> sums = w_.colwise().sum().transpose();
    for (Eigen::Index i = 0; i < sums.size(); ++i) {
      if (std::abs(sums(i) - Scalar(1)) > tolerance) {
        throw Error(ErrorCode::ConstraintViolated,
                    "column " + std::to_string(i) + " of the weight matrix does not sum to 1");
      }
    }
  }

  const Matrix<Scalar>& weights() const noexcept { return w_; }
  auto column(Eigen::Index i) const { return w_.col(i); }
  Eigen::Index assets() const noexcept { return w_.rows(); }
  Eigen::Index investors() const noexcept { return w_.cols(); }

 private:
  Matrix<Scalar> w_;
};

}  // namespace mvmimic

#endif  // MVMIMIC_MODEL_HPP
