#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rwm/doubling.hpp"
#include "rwm/ensemble.hpp"
#include "rwm/experts.hpp"
#include "rwm/market_data.hpp"

namespace rwm {

enum class HorizonPolicy { KnownHorizon, Doubling };
/// Blend: the ensemble holds every expert's position weighted by p_t.
/// Sample: one expert drawn from p_t per round carries the ensemble's return.
enum class Allocation { Blend, Sample };

const char* to_string(HorizonPolicy policy);
const char* to_string(Allocation allocation);
HorizonPolicy horizon_policy_from_string(std::string_view name);
Allocation allocation_from_string(std::string_view name);

struct BacktestConfig {
  std::vector<double> gamma1_values{0.25, 0.5, 0.75};
  std::vector<double> gamma2_values{1.0, 1.25, 1.5};
  std::size_t window = kDefaultStatsWindow;
  LossMode loss_mode = LossMode::Continuous;
  double return_cap = kDefaultReturnCap;
  std::optional<double> beta_override;
  HorizonPolicy horizon_policy = HorizonPolicy::KnownHorizon;
  Allocation allocation = Allocation::Blend;
  std::uint64_t seed = 0;

  void validate() const;
  std::vector<ExpertSpec> grid() const;

  bool operator==(const BacktestConfig&) const = default;
};

enum class TradeAction { OpenLong, CloseLong, OpenShort, CloseShort };
const char* to_string(TradeAction action);
TradeAction trade_action_from_string(std::string_view name);

struct TradeEvent {
  std::size_t index = 0;  // series index where the signal fired
  std::int64_t timestamp = 0;
  TradeAction action = TradeAction::OpenLong;
  double price = 0.0;
  double s_score = 0.0;

  bool operator==(const TradeEvent&) const = default;
};

/// Running totals after round t.
struct CurvePoint {
  std::size_t t = 0;
  double algo_loss = 0.0;
  double min_loss = 0.0;
  double regret = 0.0;
  double sqrt_bound = 0.0;  // theoretical_bound_sqrt(N, t, min_loss)

  bool operator==(const CurvePoint&) const = default;
};

/// Per-round returns and losses of every expert, plus their trade logs.
/// Round t (1-based) covers series indices [window - 2 + t, window - 1 + t]:
/// positions decided on the signal at the first index earn the move to the second.
struct ExpertSimulation {
  std::size_t first_signal_index = 0;
  std::vector<std::vector<double>> returns;  // [round][expert]
  std::vector<std::vector<double>> losses;   // [round][expert]
  std::vector<std::vector<TradeEvent>> trades;  // [expert]
  std::vector<ExpertState> final_states;
};

ExpertSimulation simulate_experts(const PriceSeries& series, std::span<const ExpertSpec> specs,
                                  LossMode mode, double return_cap);

struct ExpertSummary {
  ExpertSpec spec;
  double cum_loss = 0.0;
  double cum_return = 0.0;
  double final_probability = 0.0;
  std::vector<TradeEvent> trades;

  bool operator==(const ExpertSummary&) const = default;
};

struct EnsembleSummary {
  double cum_return = 0.0;
  double beta = 0.0;  // beta in force at the end of the run
  std::vector<double> final_distribution;
  std::vector<EpochRecord> epochs;             // Doubling only
  std::vector<std::size_t> sample_counts;      // Sample allocation only

  bool operator==(const EnsembleSummary&) const = default;
};

inline constexpr std::string_view kReportSchemaVersion = "rwm.backtest/1";

struct BacktestReport {
  std::string schema_version{kReportSchemaVersion};
  BacktestConfig config;
  std::string symbol;
  std::size_t series_length = 0;
  RegretReport final;
  std::vector<CurvePoint> curve;
  std::vector<ExpertSummary> experts;
  EnsembleSummary ensemble;

  bool operator==(const BacktestReport&) const = default;
};

/// Runs the expert grid over the series and feeds every round's loss vector
/// to the learner. Requires series.size() > window. With zero-one losses and
/// the tuned beta of a known horizon, the final loss is checked against
/// theoretical_bound_sqrt and a violation throws BoundViolation.
BacktestReport run_backtest(const PriceSeries& series, const BacktestConfig& config);

}  // namespace rwm
