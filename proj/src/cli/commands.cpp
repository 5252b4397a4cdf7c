#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "config.hpp"
#include "mvmimic/cli.hpp"
#include "mvmimic/markowitz.hpp"
#include "mvmimic/mimicking.hpp"
#include "mvmimic/moments.hpp"
#include "mvmimic/oracle.hpp"
#include "mvmimic/random.hpp"
#include "mvmimic/study.hpp"

namespace mvmimic::cli {
namespace {

namespace fs = std::filesystem;

constexpr double kVerifyTolerance = 1e-10;

std::string human(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string scientific(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

/// Writes text to `path`, or to `out` when path is "-".
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::IoError, "cannot write " + path);
  file << text;
  file.close();
  if (!file) throw Error(ErrorCode::IoError, "failed writing " + path);
}

int exit_for(const Error& e) {
  switch (category(e.code())) {
    case ErrorCategory::Io: return kIo;
    case ErrorCategory::Numerical: return kNumerical;
    case ErrorCategory::Validation: return kValidation;
  }
  return kValidation;
}

// --- solve -----------------------------------------------------------------

struct SolveFlags {
  std::string config;
  std::string returns;
  std::optional<int> annualize;
  std::string mu, sigma, alpha, beta, phi;
  std::string output = "-";
  bool quiet = false;
};

Json solve_config(const SolveFlags& f) {
  Json cfg = f.config.empty() ? Json::object() : load_config(f.config);
  if (!f.returns.empty()) {
    cfg["returns"] = f.returns;
    cfg.erase("mu");
    cfg.erase("sigma");
  }
  if (f.annualize) cfg["annualize"] = *f.annualize;
  if (!f.mu.empty()) cfg["mu"] = parse_inline(f.mu, "--mu");
  if (!f.sigma.empty()) cfg["sigma"] = parse_inline(f.sigma, "--sigma");
  if (!f.mu.empty() || !f.sigma.empty()) cfg.erase("returns");
  if (!f.alpha.empty()) cfg["alpha"] = parse_inline(f.alpha, "--alpha");
  if (!f.beta.empty()) cfg["beta"] = parse_inline(f.beta, "--beta");
  if (!f.phi.empty()) cfg["phi"] = parse_inline(f.phi, "--phi");
  return cfg;
}

int cmd_solve(const SolveFlags& f, std::ostream& out, std::ostream& err) {
  const Json cfg = solve_config(f);
  auto input = resolve_market(cfg);
  const auto group = resolve_group(cfg);
  const auto& m = input.market;

  const auto ctx = markowitz::context(m);
  const auto mm = mimicking::mimicking_matrix(group);
  const auto sol = mimicking::solve(m, ctx, group);
  const auto fund = markowitz::fund_aggregate(ctx, group);
  const auto individual = markowitz::individual_matrix(ctx, group);
  const double eu_classical = mimicking::penalized_utility(m, group, mm, individual);

  std::vector<fs::path> inputs = input.files;
  if (!f.config.empty()) inputs.insert(inputs.begin(), f.config);

  Json doc;
  doc["manifest"] = manifest("solve", cfg, inputs);
  doc["assets"] = input.asset_names;
  doc["mimicking"] = {
      {"w_star", columns_to_json(sol.w_star.weights())},
      {"fund_weights", to_json(sol.fund_weights)},
      {"alpha_star_f", sol.alpha_star_f},
      {"mean", sol.point.mean},
      {"variance", sol.point.variance},
      {"eu_star", sol.eu_star},
  };
  doc["classical"] = {
      {"individual_weights", columns_to_json(individual.weights())},
      {"fund_weights", to_json(fund.weights)},
      {"alpha_f", fund.alpha_f},
      {"mean", fund.point.mean},
      {"variance", fund.point.variance},
      {"eu_star_at_individual_optima", eu_classical},
  };
  doc["relative_gain"] =
      sol.eu_star > 0.0 ? Json((sol.eu_star - eu_classical) / sol.eu_star) : Json(nullptr);
  emit(f.output, doc.dump(2) + "\n", out);

  if (!f.quiet) {
    err << "alpha_star_f " << human(sol.alpha_star_f) << " (classical alpha_f "
        << human(fund.alpha_f) << ")\n"
        << "fund mean " << human(sol.point.mean) << ", variance " << human(sol.point.variance)
        << ", EU* " << human(sol.eu_star) << "\n";
  }
  return kOk;
}

// --- verify ----------------------------------------------------------------

struct VerifyFlags {
  long long count = 500;
  long long max_k = 10;
  long long max_n = 10;
  std::uint64_t seed = 7;
};

double relative_error(const Matrix<double>& a, const Matrix<double>& b) {
  return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

int cmd_verify(const VerifyFlags& f, std::ostream& out) {
  if (f.count < 0) throw Error(ErrorCode::InvalidConfig, "--count must be >= 0");
  if (f.max_k < 2 || f.max_n < 2) throw Error(ErrorCode::InvalidConfig, "--max-k and --max-n must be >= 2");

  const Json cfg = {{"count", f.count}, {"max_k", f.max_k}, {"max_n", f.max_n}, {"seed", f.seed}};
  std::ostringstream report;
  report << "# " << manifest("verify", cfg, {}).dump() << "\n";
  report << "instances: " << f.count << "\n";
  if (f.count == 0) {
    report << "0 instances checked; nothing to compare\nresult: PASS\n";
    out << report.str();
    return kOk;
  }

  double worst = 0.0;
  double worst_residual = 0.0;
  long long worst_index = 0;
  for (long long i = 0; i < f.count; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(f.seed), static_cast<std::uint32_t>(f.seed >> 32),
                      static_cast<std::uint32_t>(i)};
    random::Engine rng(seq);
    const auto inst = random::instance(rng, f.max_k, f.max_n);
    const auto& m = inst.market;
    const auto& g = inst.group;

    std::string failure;
    double err_i = 0.0;
    try {
      const auto closed = mimicking::solve(m, g);
      const auto kkt = oracle::kkt_solve(m, g);
      err_i = relative_error(closed.w_star.weights(), kkt.w.weights());
      worst_residual = std::max(worst_residual, kkt.residual);
      if (!(err_i <= kVerifyTolerance)) {
        failure = "relative_error " + scientific(err_i) + " exceeds " + scientific(kVerifyTolerance);
      } else if (!(kkt.residual <= oracle::residual_bound(m.mu(), g.beta()))) {
        failure = "KKT residual " + scientific(kkt.residual) + " too large";
      }
    } catch (const Error& e) {
      failure = e.what();
    }
    if (!failure.empty()) {
      report << "FAIL seed=" << f.seed << " instance=" << i << " k=" << m.assets()
             << " n=" << g.investors() << ": " << failure << "\nresult: FAIL\n";
      out << report.str();
      return kVerificationFailed;
    }
    if (err_i > worst) {
      worst = err_i;
      worst_index = i;
    }
  }
  report << "worst_relative_error: " << scientific(worst) << " (instance " << worst_index << ")\n"
         << "max_kkt_residual: " << scientific(worst_residual) << "\n"
         << "tolerance: " << scientific(kVerifyTolerance) << "\n"
         << "result: PASS\n";
  out << report.str();
  return kOk;
}

// --- study -----------------------------------------------------------------

struct StudyFlags {
  std::string config;
  std::string output_dir = ".";
};

int cmd_study(const StudyFlags& f, std::ostream& err) {
  const Json cfg = f.config.empty() ? Json::object() : load_config(f.config);
  const StudyConfig study_cfg = resolve_study(cfg);
  const auto result = study::run_sweeps(study_cfg);

  std::error_code ec;
  fs::create_directories(f.output_dir, ec);
  if (ec || !fs::is_directory(f.output_dir)) {
    throw Error(ErrorCode::IoError, "cannot create output directory " + f.output_dir);
  }

  std::vector<fs::path> inputs;
  if (!f.config.empty()) inputs.push_back(f.config);
  if (cfg.contains("returns")) inputs.push_back(cfg["returns"].get<std::string>());

  std::ostream null_out(nullptr);
  auto write = [&](const std::string& name, const SweepTable& table) {
    std::ostringstream csv;
    study::write_csv(table, csv);
    const fs::path path = fs::path(f.output_dir) / name;
    emit(path.string(), csv.str(), null_out);
    Json side = manifest("study", cfg, inputs);
    side["output"] = name;
    side["rows"] = table.records.size();
    emit(path.string() + ".manifest.json", side.dump(2) + "\n", null_out);
    err << "wrote " << path.string() << " (" << table.records.size() << " rows)\n";
  };
  write("figure1.csv", result.figure1);
  write("figure2.csv", result.figure2);
  return kOk;
}

// --- estimate --------------------------------------------------------------

struct EstimateFlags {
  std::string returns;
  std::optional<int> annualize;
  std::string output = "-";
};

int cmd_estimate(const EstimateFlags& f, std::ostream& out) {
  Json cfg = {{"returns", f.returns}};
  if (f.annualize) cfg["annualize"] = *f.annualize;
  const auto sample = moments::load_csv(f.returns);
  const auto market = moments::estimate(sample, f.annualize);

  Json doc;
  doc["manifest"] = manifest("estimate", cfg, {f.returns});
  doc["assets"] = sample.asset_names;
  doc["observations"] = sample.observations();
  doc["mu"] = to_json(market.mu());
  doc["sigma"] = rows_to_json(market.sigma());
  emit(f.output, doc.dump(2) + "\n", out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mean-variance portfolios for groups of investors with a mimicking penalty", "mvmimic"};
  app.require_subcommand(1);

  SolveFlags solve_flags;
  auto* solve = app.add_subcommand("solve", "Closed-form optimal weights for one investor group");
  solve->add_option("--config", solve_flags.config, "JSON config file");
  solve->add_option("--returns", solve_flags.returns, "CSV of per-period returns (header = asset names)");
  solve->add_option("--annualize", solve_flags.annualize, "Periods per year used to scale moments");
  solve->add_option("--mu", solve_flags.mu, "Expected returns as a JSON array");
  solve->add_option("--sigma", solve_flags.sigma, "Covariance as a JSON array of rows");
  solve->add_option("--alpha", solve_flags.alpha, "Risk aversions as a JSON array");
  solve->add_option("--beta", solve_flags.beta, "Wealth shares as a JSON array");
  solve->add_option("--phi", solve_flags.phi, "Mimicking coefficients as a JSON array");
  solve->add_option("-o,--output", solve_flags.output, "Output file, '-' for stdout");
  solve->add_flag("-q,--quiet", solve_flags.quiet, "Suppress the summary on stderr");

  VerifyFlags verify_flags;
  auto* verify = app.add_subcommand("verify", "Compare the closed form with the KKT oracle");
  verify->add_option("--count", verify_flags.count, "Number of random instances")->capture_default_str();
  verify->add_option("--max-k", verify_flags.max_k, "Largest asset count")->capture_default_str();
  verify->add_option("--max-n", verify_flags.max_n, "Largest investor count")->capture_default_str();
  verify->add_option("--seed", verify_flags.seed, "Random seed")->capture_default_str();

  StudyFlags study_flags;
  auto* study_cmd = app.add_subcommand("study", "Two-asset, two-investor parameter sweeps");
  study_cmd->add_option("--config", study_flags.config, "JSON config overriding the defaults");
  study_cmd->add_option("-d,--output-dir", study_flags.output_dir, "Directory for figure1.csv and figure2.csv")
      ->capture_default_str();

  EstimateFlags estimate_flags;
  auto* estimate = app.add_subcommand("estimate", "Sample moments from a returns CSV");
  estimate->add_option("--returns", estimate_flags.returns, "CSV of per-period returns")->required();
  estimate->add_option("--annualize", estimate_flags.annualize, "Periods per year used to scale moments");
  estimate->add_option("-o,--output", estimate_flags.output, "Output file, '-' for stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*solve) return cmd_solve(solve_flags, out, err);
    if (*verify) return cmd_verify(verify_flags, out);
    if (*study_cmd) return cmd_study(study_flags, err);
    if (*estimate) return cmd_estimate(estimate_flags, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kValidation;
}

}  // namespace mvmimic::cli
