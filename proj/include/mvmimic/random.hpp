#ifndef MVMIMIC_RANDOM_HPP
#define MVMIMIC_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "mvmimic/model.hpp"

// Seeded generators for synthetic markets and investor groups. Uniform draws
// are built directly from the raw 64-bit engine output so a given seed yields
// the same instances on every standard library.

namespace mvmimic::random {

using Engine = std::mt19937_64;

/// Uniform on the open interval (0, 1).
inline double open_unit(Engine& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

inline double uniform(Engine& rng, double lo, double hi) { return lo + (hi - lo) * open_unit(rng); }

inline Eigen::Index uniform_index(Engine& rng, Eigen::Index lo, Eigen::Index hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<Eigen::Index>(rng() % span);
}

inline double standard_normal(Engine& rng) {
  // Box-Muller; one draw per call keeps the stream easy to reason about.
  const double u1 = open_unit(rng);
  const double u2 = open_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

struct Ranges {
  double alpha_lo = 0.1;
  double alpha_hi = 20.0;
  double phi_lo = 0.0;
  double phi_hi = 20.0;
  double mu_lo = -0.05;
  double mu_hi = 0.20;
  double ridge = 0.05;
  double variance_scale = 0.04;
};

/// Sigma = s (F F' / k + ridge I) with F uniform on (-1, 1).
inline Matrix<double> covariance(Engine& rng, Eigen::Index k, const Ranges& r = {}) {
  Matrix<double> f(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) f(i, j) = uniform(rng, -1.0, 1.0);
  Matrix<double> sigma = f * f.transpose() / static_cast<double>(k);
  sigma.diagonal().array() += r.ridge;
  sigma *= r.variance_scale;
  return (sigma + sigma.transpose()) / 2.0;
}

inline Vector<double> simplex(Engine& rng, Eigen::Index n) {
  Vector<double> e(n);
  for (Eigen::Index i = 0; i < n; ++i) e(i) = -std::log(open_unit(rng));
  return e / e.sum();
}

inline MarketModel<double> market(Engine& rng, Eigen::Index k, const Ranges& r = {}) {
  Vector<double> mu(k);
  for (Eigen::Index i = 0; i < k; ++i) mu(i) = uniform(rng, r.mu_lo, r.mu_hi);
  return build_market(mu, covariance(rng, k, r));
}

inline InvestorGroup<double> group(Engine& rng, Eigen::Index n, bool uniform_wealth = false,
                                   const Ranges& r = {}) {
  Vector<double> alpha(n), phi(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    alpha(i) = uniform(rng, r.alpha_lo, r.alpha_hi);
    phi(i) = uniform(rng, r.phi_lo, r.phi_hi);
  }
  const Vector<double> beta =
      uniform_wealth ? Vector<double>::Constant(n, 1.0 / static_cast<double>(n)) : simplex(rng, n);
  return build_group(alpha, beta, phi);
}

struct Instance {
  MarketModel<double> market;
  InvestorGroup<double> group;
};

/// k in [2, max_k], n in [2, max_n].
inline Instance instance(Engine& rng, Eigen::Index max_k, Eigen::Index max_n, const Ranges& r = {}) {
  const Eigen::Index k = uniform_index(rng, 2, max_k);
  const Eigen::Index n = uniform_index(rng, 2, max_n);
  auto m = market(rng, k, r);
  auto g = group(rng, n, false, r);
  return {std::move(m), std::move(g)};
}

}  // namespace mvmimic::random

#endif  // MVMIMIC_RANDOM_HPP
