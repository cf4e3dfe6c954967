// rwm: randomized weighted majority over s-score mean-reversion experts.
//
// Exit codes: 0 success, 1 validation error, 2 runtime or I/O error,
// 3 a regret bound failed certification.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rwm/backtest.hpp"
#include "rwm/errors.hpp"
#include "rwm/market_data.hpp"
#include "rwm/report_io.hpp"
#include "rwm/verify.hpp"

namespace {

using nlohmann::json;

enum ExitCode : int { kOk = 0, kValidation = 1, kRuntime = 2, kCertification = 3 };

void print_line(const json& j) { std::cout << j.dump() << std::endl; }

void add_ou_flags(CLI::App* cmd, rwm::OuParams& ou) {
  cmd->add_option("--theta", ou.theta, "Mean-reversion speed");
  cmd->add_option("--mu", ou.mu_level, "Long-run level of the log price");
  cmd->add_option("--sigma", ou.sigma_noise, "Volatility of the log price");
  cmd->add_option("--x0", ou.x0, "Initial log price");
  cmd->add_option("--dt", ou.dt, "Time step (theta * dt must be < 1)");
  cmd->add_option("--steps", ou.n_steps, "Number of observations")->check(CLI::PositiveNumber);
}

struct SimulateArgs {
  rwm::OuParams ou{.theta = 0.5, .mu_level = 0.0, .sigma_noise = 0.1, .x0 = 0.0,
                   .dt = 0.01, .n_steps = 1000, .seed = 0};
  std::string symbol = "OU";
  std::string output;
};

int run_simulate(const SimulateArgs& args) {
  const rwm::PriceSeries series = rwm::generate_ou(args.ou, args.symbol);
  rwm::save_csv(series, args.output);
  print_line({{"command", "simulate"},
              {"output", args.output},
              {"length", series.size()},
              {"first_price", series.prices.front()},
              {"last_price", series.prices.back()}});
  return kOk;
}

struct BacktestArgs {
  std::string input;
  std::string price_column = "price";
  std::string output = "rwm_report";
  std::string loss_mode = "continuous";
  std::string horizon = "known";
  std::string allocation = "blend";
  std::optional<double> beta;
  rwm::BacktestConfig config;
};

rwm::BacktestConfig finish_config(rwm::BacktestConfig config, const std::string& loss_mode,
                                  const std::string& horizon, const std::string& allocation,
                                  std::optional<double> beta) {
  config.loss_mode = rwm::loss_mode_from_string(loss_mode);
  config.horizon_policy = rwm::horizon_policy_from_string(horizon);
  config.allocation = rwm::allocation_from_string(allocation);
  config.beta_override = beta;
  config.validate();
  return config;
}

int run_backtest(const BacktestArgs& args) {
  const rwm::BacktestConfig config =
      finish_config(args.config, args.loss_mode, args.horizon, args.allocation, args.beta);
  const rwm::PriceSeries series = rwm::load_csv(args.input, args.price_column);
  const rwm::BacktestReport report = rwm::run_backtest(series, config);
  const auto files = rwm::emit_report(report, args.output);
  print_line({{"command", "backtest"},
              {"n_experts", report.experts.size()},
              {"horizon", report.final.horizon},
              {"regret", report.final.regret},
              {"cum_algo_loss", report.final.cum_algo_loss},
              {"min_expert_loss", report.final.min_expert_loss},
              {"best_expert_index", report.final.best_expert_index},
              {"bound_sqrt", report.final.bound_sqrt},
              {"ensemble_return", report.ensemble.cum_return},
              {"report", files.report_json.string()}});
  return kOk;
}

struct VerifyArgs {
  std::string kind = "bernoulli";
  double p = 0.5;
  double p_good = 0.1;
  double p_bad = 0.5;
  std::size_t n = 10;
  std::size_t t = 1000;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::optional<double> beta;
  std::string json_out;
};

rwm::LossGenerator make_generator(const VerifyArgs& args) {
  if (args.kind == "bernoulli") return rwm::IidBernoulli{args.p};
  if (args.kind == "single-good") return rwm::SingleGoodExpert{args.p_good, args.p_bad};
  if (args.kind == "alternating") return rwm::AdversarialAlternating{};
  throw std::invalid_argument("unknown generator kind '" + args.kind + "'");
}

int run_verify(const VerifyArgs& args) {
  if (args.trials == 0) throw std::invalid_argument("--trials must be >= 1");
  if (args.n == 0 || args.t == 0) throw std::invalid_argument("-n and -t must be >= 1");
  const rwm::LossGenerator generator = make_generator(args);

  std::ofstream certificates;
  if (!args.json_out.empty()) {
    certificates.open(args.json_out, std::ios::binary | std::ios::trunc);
    if (!certificates) throw rwm::IoError("cannot write '" + args.json_out + "'");
  }

  std::size_t satisfied = 0;
  double max_regret = -INFINITY;
  double max_residual = 0.0;
  double min_slack = INFINITY;
  rwm::BoundCertificate last;
  for (std::size_t trial = 0; trial < args.trials; ++trial) {
    const auto matrix = rwm::generate_losses(generator, args.n, args.t, args.seed + trial);
    last = rwm::certify(matrix, args.beta);
    if (last.all_satisfied()) ++satisfied;
    max_regret = std::max(max_regret, last.cum_algo_loss - last.min_expert_loss);
    max_residual = std::max(max_residual, last.max_identity_residual);
    min_slack = std::min(min_slack, last.min_lower_bound_slack);
    if (certificates.is_open()) certificates << rwm::certificate_json(last) << '\n';
  }
  if (certificates.is_open() && !certificates.flush()) {
    throw rwm::IoError("write failed for '" + args.json_out + "'");
  }

  print_line({{"command", "verify"},
              {"kind", args.kind},
              {"n_experts", args.n},
              {"horizon", args.t},
              {"beta", last.beta},
              {"trials", args.trials},
              {"satisfied", satisfied},
              {"summary", std::to_string(satisfied) + "/" + std::to_string(args.trials) +
                              " satisfied"},
              {"min_expert_loss", last.min_expert_loss},
              {"cum_algo_loss", last.cum_algo_loss},
              {"max_regret", max_regret},
              {"max_identity_residual", max_residual},
              {"min_lower_bound_slack", min_slack}});
  return satisfied == args.trials ? kOk : kCertification;
}

struct SweepArgs {
  std::string input;
  std::string price_column = "price";
  rwm::OuParams ou{.theta = 0.5, .mu_level = 0.0, .sigma_noise = 0.1, .x0 = 0.0,
                   .dt = 0.01, .n_steps = 5000, .seed = 0};
  std::vector<std::size_t> sides{1, 3, 9};
  std::vector<double> gamma1_range{0.25, 0.75};
  std::vector<double> gamma2_range{1.0, 1.5};
  std::size_t window = rwm::kDefaultStatsWindow;
  std::string loss_mode = "continuous";
  double cap = rwm::kDefaultReturnCap;
  std::string output;
};

std::vector<double> linspace(const std::vector<double>& range, std::size_t count) {
  if (range.size() != 2) throw std::invalid_argument("ranges take exactly two values lo,hi");
  if (count == 1) return {0.5 * (range[0] + range[1])};
  std::vector<double> values(count);
  for (std::size_t k = 0; k < count; ++k) {
    values[k] = range[0] + (range[1] - range[0]) * static_cast<double>(k) /
                               static_cast<double>(count - 1);
  }
  return values;
}

int run_sweep(const SweepArgs& args) {
  if (args.sides.empty()) throw std::invalid_argument("--sides lists no grid sizes");
  const rwm::PriceSeries series = args.input.empty()
                                      ? rwm::generate_ou(args.ou)
                                      : rwm::load_csv(args.input, args.price_column);

  std::vector<rwm::BacktestReport> rows;
  for (const std::size_t side : args.sides) {
    if (side == 0) throw std::invalid_argument("grid sides must be >= 1");
    rwm::BacktestConfig config;
    config.gamma1_values = linspace(args.gamma1_range, side);
    config.gamma2_values = linspace(args.gamma2_range, side);
    config.window = args.window;
    config.loss_mode = rwm::loss_mode_from_string(args.loss_mode);
    config.return_cap = args.cap;
    config.validate();
    rows.push_back(rwm::run_backtest(series, config));
  }

  std::ofstream out(args.output, std::ios::binary | std::ios::trunc);
  if (!out) throw rwm::IoError("cannot write '" + args.output + "'");
  out << "n_experts,horizon,regret,regret_bound\n";
  json summary = json::array();
  for (const auto& report : rows) {
    const std::size_t n = report.experts.size();
    const double bound =
        2.0 * std::sqrt(static_cast<double>(report.final.horizon) * std::log(double(n)));
    char line[128];
    std::snprintf(line, sizeof line, "%zu,%zu,%.17g,%.17g\n", n, report.final.horizon,
                  report.final.regret, bound);
    out << line;
    summary.push_back({{"n_experts", n}, {"regret", report.final.regret}, {"bound", bound}});
  }
  out.close();
  if (!out) throw rwm::IoError("write failed for '" + args.output + "'");
  print_line({{"command", "sweep"}, {"output", args.output}, {"rows", summary}});
  return kOk;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const rwm::BoundViolation& e) {
    std::cerr << "certification failure: " << e.what() << '\n';
    return kCertification;
  } catch (const rwm::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  } catch (const rwm::CsvError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const rwm::NotEnoughData& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized weighted majority over mean-reversion trading experts"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Write a seeded log-OU price series as CSV");
  add_ou_flags(simulate, sim.ou);
  simulate->add_option("--seed", sim.ou.seed, "Generator seed");
  simulate->add_option("--symbol", sim.symbol, "Series label");
  simulate->add_option("-o,--output", sim.output, "Output CSV path")->required();

  BacktestArgs bt;
  auto* backtest = app.add_subcommand("backtest", "Run the expert ensemble over a price CSV");
  backtest->add_option("-i,--input", bt.input, "Input CSV (timestamp,price)")->required();
  backtest->add_option("--price-column", bt.price_column, "Price column name");
  backtest->add_option("--gamma1", bt.config.gamma1_values, "Close thresholds")->delimiter(',');
  backtest->add_option("--gamma2", bt.config.gamma2_values, "Open thresholds")->delimiter(',');
  backtest->add_option("--window", bt.config.window, "Rolling statistics window");
  backtest->add_option("--loss-mode", bt.loss_mode, "continuous | zero-one");
  backtest->add_option("--cap", bt.config.return_cap, "Return cap of the continuous loss");
  backtest->add_option("--beta", bt.beta, "Fixed beta in (0,1); default tuned to the horizon");
  backtest->add_option("--horizon", bt.horizon, "known | doubling");
  backtest->add_option("--allocation", bt.allocation, "blend | sample");
  backtest->add_option("--seed", bt.config.seed, "Seed for sampled allocation");
  backtest->add_option("-o,--output", bt.output, "Report directory");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Certify the regret bounds on generated losses");
  verify->add_option("--kind", ver.kind, "bernoulli | single-good | alternating");
  verify->add_option("-p", ver.p, "Mistake probability for bernoulli");
  verify->add_option("--p-good", ver.p_good, "Mistake probability of expert 0 (single-good)");
  verify->add_option("--p-bad", ver.p_bad, "Mistake probability of the others (single-good)");
  verify->add_option("-n,--experts", ver.n, "Number of experts");
  verify->add_option("-t,--rounds", ver.t, "Rounds per matrix");
  verify->add_option("--trials", ver.trials, "Matrices to certify (trial k uses seed + k)");
  verify->add_option("--seed", ver.seed, "Base seed");
  verify->add_option("--beta", ver.beta, "Fixed beta in [1/2,1); default tuned");
  verify->add_option("--json", ver.json_out, "Write one certificate per line to this file");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Regret against grid size on one series");
  sweep->add_option("-i,--input", sw.input, "Input CSV; omit to generate an OU series");
  sweep->add_option("--price-column", sw.price_column, "Price column name");
  add_ou_flags(sweep, sw.ou);
  sweep->add_option("--seed", sw.ou.seed, "OU generator seed");
  sweep->add_option("--sides", sw.sides, "Grid sides k; each run uses k*k experts")
      ->delimiter(',');
  sweep->add_option("--gamma1-range", sw.gamma1_range, "lo,hi of gamma1")->delimiter(',');
  sweep->add_option("--gamma2-range", sw.gamma2_range, "lo,hi of gamma2")->delimiter(',');
  sweep->add_option("--window", sw.window, "Rolling statistics window");
  sweep->add_option("--loss-mode", sw.loss_mode, "continuous | zero-one");
  sweep->add_option("--cap", sw.cap, "Return cap of the continuous loss");
  sweep->add_option("-o,--output", sw.output, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return kValidation;
  }

  if (*simulate) return guarded([&] { return run_simulate(sim); });
  if (*backtest) return guarded([&] { return run_backtest(bt); });
  if (*verify) return guarded([&] { return run_verify(ver); });
  return guarded([&] { return run_sweep(sw); });
}
