#ifndef MVMIMIC_ORACLE_HPP
#define MVMIMIC_ORACLE_HPP

#include <Eigen/LU>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "mvmimic/markowitz.hpp"
#include "mvmimic/model.hpp"

// Independent check of the closed-form group optimum: the aggregated problem
// is written over vec(W') with Kronecker products and the resulting
// equality-constrained QP is solved as one dense KKT system. Nothing here
// calls into the closed-form solver.

namespace mvmimic {

template <typename Scalar = double>
struct OracleSolution {
  PortfolioMatrix<Scalar> w;
  Vector<Scalar> lambda;
  Scalar residual;  // max-norm of K x - rhs
};

struct OracleOptions {
  Eigen::Index max_unknowns = 5000;
};

namespace oracle {

/// Symmetric part of the mimicking matrix, assembled entry by entry:
///   a_ii = beta_i^2 (alpha_i / beta_i + (1 / beta_i - 2) phi_i + phi_bar)
///   a_ij = beta_i beta_j (phi_bar - 2 phi_i),   i != j
template <typename Scalar>
Matrix<Scalar> symmetric_penalty_matrix(const Vector<Scalar>& alpha, const Vector<Scalar>& beta,
                                        const Vector<Scalar>& phi) {
  const Eigen::Index n = alpha.size();
  Scalar phi_bar = 0;
  for (Eigen::Index i = 0; i < n; ++i) phi_bar += beta(i) * phi(i);

  Matrix<Scalar> a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) {
        const Scalar b = beta(i);
        a(i, i) = b * b * (alpha(i) / b + (Scalar(1) / b - Scalar(2)) * phi(i) + phi_bar);
      } else {
        a(i, j) = beta(i) * beta(j) * (phi_bar - Scalar(2) * phi(i));
      }
    }
  }
  return (a + a.transpose()) / Scalar(2);
}

/// Unvalidated entry point; only shapes are checked, so degenerate inputs
/// such as a single investor are allowed.
template <typename Scalar>
OracleSolution<Scalar> kkt_solve(const Vector<Scalar>& mu, const Matrix<Scalar>& sigma,
                                 const Vector<Scalar>& alpha, const Vector<Scalar>& beta,
                                 const Vector<Scalar>& phi, const OracleOptions& opts = {}) {
  const Eigen::Index k = mu.size();
  const Eigen::Index n = alpha.size();
  if (sigma.rows() != k || sigma.cols() != k || beta.size() != n || phi.size() != n || k == 0 ||
      n == 0) {
    throw Error(ErrorCode::DimensionMismatch, "inconsistent oracle input shapes");
  }
  const Eigen::Index kn = k * n;
  const Eigen::Index unknowns = kn + n;
  if (unknowns > opts.max_unknowns) {
    throw Error(ErrorCode::SizeCapExceeded, std::to_string(unknowns) + " unknowns exceed cap of " +
                                                std::to_string(opts.max_unknowns));
  }

  const Matrix<Scalar> a_phi = symmetric_penalty_matrix(alpha, beta, phi);
  const Matrix<Scalar> eye_n = Matrix<Scalar>::Identity(n, n);
  const Matrix<Scalar> ones_k = Matrix<Scalar>::Ones(k, 1);

  // Unknowns (vec(W'), lambda). Constraint blocks carry a minus sign so that
  // lambda comes out as (A_phi 1 - beta 1'Sigma^{-1}mu) / 1'Sigma^{-1}1.
  Matrix<Scalar> kkt = Matrix<Scalar>::Zero(unknowns, unknowns);
  kkt.topLeftCorner(kn, kn) = Eigen::kroneckerProduct(sigma, a_phi);
  const Matrix<Scalar> constraint = Eigen::kroneckerProduct(ones_k.transpose(), eye_n);
  kkt.bottomLeftCorner(n, kn) = -constraint;
  kkt.topRightCorner(kn, n) = -constraint.transpose();

  Vector<Scalar> rhs(unknowns);
  rhs.head(kn) = Matrix<Scalar>(Eigen::kroneckerProduct(mu, eye_n)) * beta;
  rhs.tail(n) = -Vector<Scalar>::Ones(n);

  Eigen::PartialPivLU<Matrix<Scalar>> lu(kkt);
  if (!(lu.rcond() > std::numeric_limits<Scalar>::epsilon())) {
    throw Error(ErrorCode::SingularKkt, "KKT matrix is numerically singular");
  }
  const Vector<Scalar> x = lu.solve(rhs);
  if (!x.allFinite()) {
    throw Error(ErrorCode::SingularKkt, "KKT solve produced non-finite values");
  }
  const Scalar residual = (kkt * x - rhs).cwiseAbs().maxCoeff();

  // vec(W') stacks the rows of W: entry j * n + i is W(j, i).
  Matrix<Scalar> w(k, n);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) w(j, i) = x(j * n + i);
  }
  return {PortfolioMatrix<Scalar>(std::move(w), Scalar(1e-8)), x.tail(n), residual};
}

template <typename Scalar>
OracleSolution<Scalar> kkt_solve(const MarketModel<Scalar>& m, const InvestorGroup<Scalar>& g,
                                 const OracleOptions& opts = {}) {
  return kkt_solve(m.mu(), m.sigma(), g.alpha(), g.beta(), g.phi(), opts);
}

/// (A_phi 1 - beta 1'Sigma^{-1}mu) / 1'Sigma^{-1}1.
template <typename Scalar>
Vector<Scalar> lambda_closed_form(const MarkowitzContext<Scalar>& ctx,
                                  const InvestorGroup<Scalar>& g) {
  const Matrix<Scalar> a_phi = symmetric_penalty_matrix(g.alpha(), g.beta(), g.phi());
  const Vector<Scalar> row_sums = a_phi.rowwise().sum();
  return (row_sums - g.beta() * ctx.ones_sigma_inv_mu) / ctx.ones_sigma_inv_ones;
}

/// Bound that the KKT residual must stay under.
template <typename Scalar>
Scalar residual_bound(const Vector<Scalar>& mu, const Vector<Scalar>& beta) {
  const Scalar rhs = std::max(mu.cwiseAbs().maxCoeff() * beta.cwiseAbs().maxCoeff(), Scalar(1));
  return Scalar(1e-8) * (Scalar(1) + rhs);
}

}  // namespace oracle
}  // namespace mvmimic

#endif  // MVMIMIC_ORACLE_HPP
