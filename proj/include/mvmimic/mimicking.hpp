#ifndef MVMIMIC_MIMICKING_HPP
#define MVMIMIC_MIMICKING_HPP

#include <Eigen/Cholesky>

#include <cmath>
#include <string>
#include <utility>

#include "mvmimic/markowitz.hpp"
#include "mvmimic/model.hpp"

namespace mvmimic {

/// The n x n matrix that turns the penalized group objective into a single
/// trace-form mean-variance problem, together with its symmetric part.
template <typename Scalar = double>
struct MimickingMatrix {
  Matrix<Scalar> a;
  Matrix<Scalar> a_phi;
  Scalar phi_bar;
  Eigen::LLT<Matrix<Scalar>> a_phi_llt;
};

template <typename Scalar = double>
struct MimickingSolution {
  PortfolioMatrix<Scalar> w_star;
  Vector<Scalar> fund_weights;
  Scalar alpha_star_f;
  FrontierPoint<Scalar> point;
  Scalar eu_star;
};

template <typename Scalar = double>
struct AsymptoticAlpha {
  Scalar limit_inverse;  // sum_i beta_i / (alpha_i + phi_i)
  Scalar upper;          // alpha_bar + phi_bar
  Scalar classical;      // alpha_f without mimicking
};

namespace mimicking {

/// A = (A0 + Phi) B + (phi_bar I - 2 Phi) beta beta', with A0, B, Phi the
/// diagonal matrices of alpha, beta, phi. Row i of the rank-one part is
/// (phi_bar - 2 phi_i) beta_i beta'.
template <typename Scalar>
MimickingMatrix<Scalar> mimicking_matrix(const InvestorGroup<Scalar>& g) {
  const auto& alpha = g.alpha();
  const auto& beta = g.beta();
  const auto& phi = g.phi();
  const Scalar phi_bar = g.phi_bar();

  const Vector<Scalar> diag = (alpha + phi).cwiseProduct(beta);
  const Vector<Scalar> row_scale =
      (Vector<Scalar>::Constant(g.investors(), phi_bar) - Scalar(2) * phi).cwiseProduct(beta);

  MimickingMatrix<Scalar> out;
  out.a = row_scale * beta.transpose();
  out.a.diagonal() += diag;
  out.a_phi = (out.a + out.a.transpose()) / Scalar(2);
  out.phi_bar = phi_bar;
  out.a_phi_llt.compute(out.a_phi);
  if (!detail::positive_definite(out.a_phi_llt, out.a_phi)) {
    throw Error(ErrorCode::NotPositiveDefinite, "symmetrized mimicking matrix is not positive definite");
  }
  return out;
}

/// beta' W' mu - 1/2 tr(A_phi W' Sigma W).
///
/// Equal to sum_i beta_i [w_i'mu - alpha_i/2 w_i'Sigma w_i - phi_i/2 d_i'Sigma d_i]
/// with d_i = w_i - W beta.
template <typename Scalar>
Scalar penalized_utility(const MarketModel<Scalar>& m, const InvestorGroup<Scalar>& g,
                         const MimickingMatrix<Scalar>& mm, const PortfolioMatrix<Scalar>& w) {
  if (w.assets() != m.assets() || w.investors() != g.investors()) {
    throw Error(ErrorCode::DimensionMismatch, "weight matrix shape does not match market and group");
  }
  const auto& wm = w.weights();
  const Matrix<Scalar> cross = wm.transpose() * m.sigma() * wm;
  const Scalar trace = mm.a_phi.cwiseProduct(cross).sum();
  return g.beta().dot(wm.transpose() * m.mu()) - trace / Scalar(2);
}

template <typename Scalar>
Scalar penalized_utility(const MarketModel<Scalar>& m, const InvestorGroup<Scalar>& g,
                         const PortfolioMatrix<Scalar>& w) {
  return penalized_utility(m, g, mimicking_matrix(g), w);
}

/// Closed-form group optimum: column i of W* is gmvp + c_i Q mu with
/// c = A_phi^{-1} beta, and the fund's inverse risk aversion is beta'c.
template <typename Scalar>
MimickingSolution<Scalar> solve(const MarketModel<Scalar>& m, const MarkowitzContext<Scalar>& ctx,
                                const InvestorGroup<Scalar>& g) {
  if (ctx.assets() != m.assets()) {
    throw Error(ErrorCode::DimensionMismatch, "context and market disagree on asset count");
  }
  const MimickingMatrix<Scalar> mm = mimicking_matrix(g);
  const Vector<Scalar> c = mm.a_phi_llt.solve(g.beta());
  const Scalar t = g.beta().dot(c);
  if (!c.allFinite() || !(t > Scalar(0))) {
    throw Error(ErrorCode::NumericalBreakdown, "mimicking matrix solve failed");
  }

  Matrix<Scalar> w = ctx.gmvp.replicate(1, g.investors()) + ctx.q_mu * c.transpose();
  PortfolioMatrix<Scalar> w_star(std::move(w));
  const Scalar eu = penalized_utility(m, g, mm, w_star);
  return {std::move(w_star), ctx.gmvp + t * ctx.q_mu, Scalar(1) / t, ctx.frontier(t), eu};
}

template <typename Scalar>
MimickingSolution<Scalar> solve(const MarketModel<Scalar>& m, const InvestorGroup<Scalar>& g) {
  return solve(m, markowitz::context(m), g);
}

/// Equal-wealth form n (A0 + Phi) + (phi_bar I - 2 Phi) 1 1'. It is n^2 times
/// the general matrix when every beta_i = 1/n, so 1'A^{-1}1 over this matrix
/// equals beta'A^{-1}beta over the general one.
template <typename Scalar>
Matrix<Scalar> corollary_matrix_equal_wealth(const InvestorGroup<Scalar>& g) {
  const Eigen::Index n = g.investors();
  const Scalar uniform = Scalar(1) / Scalar(n);
  if ((g.beta().array() - uniform).abs().maxCoeff() > Scalar(1e-12)) {
    throw Error(ErrorCode::NotUniformWealth, "every beta must equal 1/" + std::to_string(n));
  }
  const Vector<Scalar> row_scale =
      Vector<Scalar>::Constant(n, g.phi_bar()) - Scalar(2) * g.phi();
  Matrix<Scalar> a = row_scale * Vector<Scalar>::Ones(n).transpose();
  a.diagonal() += Scalar(n) * (g.alpha() + g.phi());
  return a;
}

/// Fund weights from an equal-wealth matrix: gmvp + (1' A_phi^{-1} 1) Q mu.
template <typename Scalar>
Vector<Scalar> corollary_fund_weights(const MarkowitzContext<Scalar>& ctx,
                                      const Matrix<Scalar>& a_cor) {
  const Matrix<Scalar> a_phi = (a_cor + a_cor.transpose()) / Scalar(2);
  Eigen::LLT<Matrix<Scalar>> llt(a_phi);
  if (!detail::positive_definite(llt, a_phi)) {
    throw Error(ErrorCode::NotPositiveDefinite, "equal-wealth mimicking matrix is not positive definite");
  }
  const Vector<Scalar> ones = Vector<Scalar>::Ones(a_cor.rows());
  const Scalar t = ones.dot(llt.solve(ones));
  return ctx.gmvp + t * ctx.q_mu;
}

/// Many-small-investors approximation of the aggregate risk aversion.
template <typename Scalar>
AsymptoticAlpha<Scalar> asymptotic_alpha(const InvestorGroup<Scalar>& g) {
  const Scalar limit_inverse = g.beta().cwiseQuotient(g.alpha() + g.phi()).sum();
  const Scalar classical = Scalar(1) / g.beta().cwiseQuotient(g.alpha()).sum();
  return {limit_inverse, g.alpha_bar() + g.phi_bar(), classical};
}

}  // namespace mimicking
}  // namespace mvmimic

#endif  // MVMIMIC_MIMICKING_HPP
