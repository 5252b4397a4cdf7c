#ifndef MVMIMIC_STUDY_HPP
#define MVMIMIC_STUDY_HPP

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "mvmimic/markowitz.hpp"
#include "mvmimic/mimicking.hpp"
#include "mvmimic/model.hpp"

namespace mvmimic {

/// Two assets: means 7% and 14%, volatilities 12% and 20%, correlation 0.2.
MarketModel<double> two_asset_market();

struct Interval {
  double lo;
  double hi;
};

/// Two equally wealthy investors with alpha_2 = a * alpha_1 and a common
/// mimicking coefficient phi. Figure 1 sweeps a for each phi in phi_set,
/// figure 2 sweeps phi for each a in a_set.
struct StudyConfig {
  MarketModel<double> market = two_asset_market();
  double alpha1 = 2.0;
  std::vector<double> phi_set = {3.0, 5.0, 10.0};
  std::vector<double> a_set = {2.0, 5.0, 10.0};
  Interval a_range = {1.0, 10.0};
  Interval phi_range = {0.0, 5.0};
  int grid_points = 101;
};

/// Throws InvalidConfig naming the offending field.
void validate(const StudyConfig& cfg);

struct SweepRecord {
  std::string series;
  double coordinate;
  double delta_omega;
  double delta_eu;
};

struct SweepTable {
  std::vector<SweepRecord> records;
};

struct StudyResult {
  SweepTable figure1;
  SweepTable figure2;
};

namespace study {

/// Group (alpha1, a * alpha1), beta = (1/2, 1/2), phi = (phi, phi).
InvestorGroup<double> two_investor_group(double alpha1, double a, double phi);

/// First fund weight with mimicking minus the classical one.
double delta_omega(const MarkowitzContext<double>& ctx, const InvestorGroup<double>& g);

/// Relative gain (EU*(W*) - EU*(W_classical)) / EU*(W*), where W_classical
/// stacks the individual no-mimicking optima. Throws NonPositiveOptimum when
/// EU*(W*) <= 0.
double delta_eu(const MarketModel<double>& m, const MarkowitzContext<double>& ctx,
                const InvestorGroup<double>& g);
double delta_eu(const MarketModel<double>& m, const InvestorGroup<double>& g);

/// n evenly spaced points from lo to hi inclusive.
std::vector<double> grid(Interval range, int points);

/// Shortest round-trip text for a number, e.g. 3 -> "3", 2.5 -> "2.5".
std::string format_label_number(double x);

StudyResult run_sweeps(const StudyConfig& cfg);

/// Header `series,coordinate,delta_omega,delta_eu`, 15 significant digits.
void write_csv(const SweepTable& table, std::ostream& out);

}  // namespace study
}  // namespace mvmimic

#endif  // MVMIMIC_STUDY_HPP
