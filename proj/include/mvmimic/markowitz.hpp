#ifndef MVMIMIC_MARKOWITZ_HPP
#define MVMIMIC_MARKOWITZ_HPP

#include <algorithm>
#include <cmath>
#include <utility>

#include "mvmimic/model.hpp"

namespace mvmimic {

/// A (mean, variance) pair on the mean-variance frontier.
template <typename Scalar = double>
struct FrontierPoint {
  Scalar mean;
  Scalar variance;
};

/// Quantities shared by every classical and mimicking solution for one market.
///
/// q annihilates the ones vector, so gmvp + t * q_mu sums to one for any t.
/// The frontier is {mu_gmv + t * slope, v_gmv + t^2 * slope : t >= 0}.
template <typename Scalar = double>
struct MarkowitzContext {
  Vector<Scalar> gmvp;
  Matrix<Scalar> q;
  Vector<Scalar> q_mu;
  Scalar mu_gmv;
  Scalar v_gmv;
  Scalar slope;
  Scalar ones_sigma_inv_ones;  // 1' Sigma^{-1} 1
  Scalar ones_sigma_inv_mu;    // 1' Sigma^{-1} mu

  /// Point reached by gmvp + t * q_mu.
  FrontierPoint<Scalar> frontier(Scalar t) const {
    return {mu_gmv + t * slope, v_gmv + t * t * slope};
  }

  Eigen::Index assets() const noexcept { return gmvp.size(); }
};

template <typename Scalar = double>
struct Portfolio {
  Vector<Scalar> weights;
  FrontierPoint<Scalar> point;
};

template <typename Scalar = double>
struct FundPortfolio {
  Vector<Scalar> weights;
  Scalar alpha_f;
  FrontierPoint<Scalar> point;
};

namespace markowitz {

template <typename Scalar>
MarkowitzContext<Scalar> context(const MarketModel<Scalar>& m) {
  const Eigen::Index k = m.assets();
  const auto& llt = m.cholesky();
  const Vector<Scalar> ones = Vector<Scalar>::Ones(k);

  const Vector<Scalar> inv_ones = llt.solve(ones);
  const Vector<Scalar> inv_mu = llt.solve(m.mu());
  const Scalar c = ones.dot(inv_ones);
  const Scalar b = ones.dot(inv_mu);
  if (!std::isfinite(c) || !(c > Scalar(0)) || !inv_mu.allFinite()) {
    throw Error(ErrorCode::NumericalBreakdown, "covariance solve failed");
  }

  MarkowitzContext<Scalar> ctx;
  ctx.ones_sigma_inv_ones = c;
  ctx.ones_sigma_inv_mu = b;
  ctx.gmvp = inv_ones / c;
  ctx.mu_gmv = b / c;
  ctx.v_gmv = Scalar(1) / c;

  const Matrix<Scalar> sigma_inv = llt.solve(Matrix<Scalar>::Identity(k, k));
  Matrix<Scalar> q = sigma_inv - inv_ones * inv_ones.transpose() / c;
  ctx.q = (q + q.transpose()) / Scalar(2);

  // Q mu from the two solves directly; avoids forming Sigma^{-1} on this path.
  ctx.q_mu = inv_mu - inv_ones * (b / c);
  ctx.slope = std::max(Scalar(0), m.mu().dot(ctx.q_mu));
  return ctx;
}

template <typename Scalar>
Portfolio<Scalar> individual_weights(const MarkowitzContext<Scalar>& ctx, Scalar alpha) {
  if (!(alpha > Scalar(0))) {
    throw Error(ErrorCode::NonPositiveAlpha, "risk aversion must be > 0");
  }
  const Scalar t = Scalar(1) / alpha;
  return {ctx.gmvp + t * ctx.q_mu, ctx.frontier(t)};
}

/// Classical fund: alpha_f^{-1} = sum_i beta_i / alpha_i.
template <typename Scalar>
FundPortfolio<Scalar> fund_aggregate(const MarkowitzContext<Scalar>& ctx,
                                     const InvestorGroup<Scalar>& g) {
  const Scalar t = g.beta().cwiseQuotient(g.alpha()).sum();
  return {ctx.gmvp + t * ctx.q_mu, Scalar(1) / t, ctx.frontier(t)};
}

/// Weight matrix whose column i is investor i's classical optimum.
template <typename Scalar>
PortfolioMatrix<Scalar> individual_matrix(const MarkowitzContext<Scalar>& ctx,
                                          const InvestorGroup<Scalar>& g) {
  const Vector<Scalar> inv_alpha = g.alpha().cwiseInverse();
  Matrix<Scalar> w = ctx.gmvp.replicate(1, g.investors()) + ctx.q_mu * inv_alpha.transpose();
  return PortfolioMatrix<Scalar>(std::move(w));
}

/// w'mu - (alpha / 2) w' Sigma w, for a unit-sum w.
template <typename Scalar, typename Derived>
Scalar mv_utility(const MarketModel<Scalar>& m, const Eigen::MatrixBase<Derived>& w, Scalar alpha) {
  if (w.size() != m.assets()) {
    throw Error(ErrorCode::DimensionMismatch, "weight vector length differs from asset count");
  }
  if (std::abs(w.sum() - Scalar(1)) > Scalar(1e-10)) {
    throw Error(ErrorCode::ConstraintViolated, "weights must sum to 1");
  }
  return w.dot(m.mu()) - alpha / Scalar(2) * w.dot(m.sigma() * w);
}

}  // namespace markowitz
}  // namespace mvmimic

#endif  // MVMIMIC_MARKOWITZ_HPP
