#include "mvmimic/study.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <system_error>

namespace mvmimic {

MarketModel<double> two_asset_market() {
  const double s1 = 0.12;
  const double s2 = 0.20;
  const double rho = 0.2;
  Vector<double> mu(2);
  mu << 0.07, 0.14;
  Matrix<double> sigma(2, 2);
  sigma << s1 * s1, rho * s1 * s2, rho * s1 * s2, s2 * s2;
  return build_market(mu, sigma);
}

void validate(const StudyConfig& cfg) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (cfg.market.assets() < 2) fail("market: at least 2 assets required");
  if (!(cfg.alpha1 > 0.0) || !std::isfinite(cfg.alpha1)) fail("alpha1 must be > 0");
  if (cfg.grid_points < 2) fail("grid_points must be >= 2");
  if (!(cfg.a_range.lo <= cfg.a_range.hi) || !(cfg.a_range.lo >= 1.0) ||
      !std::isfinite(cfg.a_range.hi)) {
    fail("a_range must be a nonempty interval with lower end >= 1");
  }
  if (!(cfg.phi_range.lo <= cfg.phi_range.hi) || !(cfg.phi_range.lo >= 0.0) ||
      !std::isfinite(cfg.phi_range.hi)) {
    fail("phi_range must be a nonempty interval with lower end >= 0");
  }
  for (double phi : cfg.phi_set) {
    if (!(phi >= 0.0) || !std::isfinite(phi)) fail("phi_set members must be >= 0");
  }
  for (double a : cfg.a_set) {
    if (!(a >= 1.0) || !std::isfinite(a)) fail("a_set members must be >= 1");
  }
}

namespace study {

InvestorGroup<double> two_investor_group(double alpha1, double a, double phi) {
  Vector<double> alpha(2), beta(2), phis(2);
  alpha << alpha1, a * alpha1;
  beta << 0.5, 0.5;
  phis << phi, phi;
  return build_group(alpha, beta, phis);
}

double delta_omega(const MarkowitzContext<double>& ctx, const InvestorGroup<double>& g) {
  const auto mm = mimicking::mimicking_matrix(g);
  const double t_star = g.beta().dot(mm.a_phi_llt.solve(g.beta()));
  const Vector<double> with_mimicking = ctx.gmvp + t_star * ctx.q_mu;
  const Vector<double> classical = markowitz::fund_aggregate(ctx, g).weights;
  return with_mimicking(0) - classical(0);
}

double delta_eu(const MarketModel<double>& m, const MarkowitzContext<double>& ctx,
                const InvestorGroup<double>& g) {
  const auto mm = mimicking::mimicking_matrix(g);
  const auto solution = mimicking::solve(m, ctx, g);
  if (!(solution.eu_star > 0.0)) {
    throw Error(ErrorCode::NonPositiveOptimum,
                "optimal penalized utility is not positive; relative gain undefined");
  }
  const auto classical = markowitz::individual_matrix(ctx, g);
  const double baseline = mimicking::penalized_utility(m, g, mm, classical);
  return (solution.eu_star - baseline) / solution.eu_star;
}

double delta_eu(const MarketModel<double>& m, const InvestorGroup<double>& g) {
  return delta_eu(m, markowitz::context(m), g);
}

std::vector<double> grid(Interval range, int points) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(points));
  const double step = (range.hi - range.lo) / static_cast<double>(points - 1);
  for (int i = 0; i < points; ++i) out.push_back(range.lo + step * i);
  out.back() = range.hi;
  return out;
}

std::string format_label_number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

namespace {

template <typename GroupAt>
void sweep(SweepTable& table, const MarketModel<double>& m, const MarkowitzContext<double>& ctx,
           const std::string& series, const std::vector<double>& coords, GroupAt group_at) {
  for (double x : coords) {
    try {
      const auto g = group_at(x);
      table.records.push_back({series, x, delta_omega(ctx, g), delta_eu(m, ctx, g)});
    } catch (const Error& e) {
      throw Error(e.code(), "series " + series + ", coordinate " + format_label_number(x) +
                                ": " + e.detail());
    }
  }
}

}  // namespace

StudyResult run_sweeps(const StudyConfig& cfg) {
  validate(cfg);
  const auto ctx = markowitz::context(cfg.market);
  StudyResult result;

  const auto a_grid = grid(cfg.a_range, cfg.grid_points);
  for (double phi : cfg.phi_set) {
    sweep(result.figure1, cfg.market, ctx, "phi=" + format_label_number(phi), a_grid,
          [&](double a) { return two_investor_group(cfg.alpha1, a, phi); });
  }

  const auto phi_grid = grid(cfg.phi_range, cfg.grid_points);
  for (double a : cfg.a_set) {
    sweep(result.figure2, cfg.market, ctx, "a=" + format_label_number(a), phi_grid,
          [&](double phi) { return two_investor_group(cfg.alpha1, a, phi); });
  }
  return result;
}

void write_csv(const SweepTable& table, std::ostream& out) {
  out << "series,coordinate,delta_omega,delta_eu\n";
  char line[256];
  for (const auto& r : table.records) {
    std::snprintf(line, sizeof line, "%s,%.15g,%.15g,%.15g\n", r.series.c_str(), r.coordinate + 0.0,
                  r.delta_omega + 0.0, r.delta_eu + 0.0);  // no "-0"
    out << line;
  }
}

}  // namespace study
}  // namespace mvmimic
