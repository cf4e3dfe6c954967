#include "rwm/backtest.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <variant>

#include "rwm/errors.hpp"

namespace rwm {

const char* to_string(HorizonPolicy policy) {
  return policy == HorizonPolicy::KnownHorizon ? "known" : "doubling";
}

const char* to_string(Allocation allocation) {
  return allocation == Allocation::Blend ? "blend" : "sample";
}

HorizonPolicy horizon_policy_from_string(std::string_view name) {
  if (name == "known") return HorizonPolicy::KnownHorizon;
  if (name == "doubling") return HorizonPolicy::Doubling;
  throw std::invalid_argument("unknown horizon policy '" + std::string(name) + "'");
}

Allocation allocation_from_string(std::string_view name) {
  if (name == "blend") return Allocation::Blend;
  if (name == "sample") return Allocation::Sample;
  throw std::invalid_argument("unknown allocation '" + std::string(name) + "'");
}

const char* to_string(TradeAction action) {
  switch (action) {
    case TradeAction::OpenLong: return "open_long";
    case TradeAction::CloseLong: return "close_long";
    case TradeAction::OpenShort: return "open_short";
    case TradeAction::CloseShort: return "close_short";
  }
  return "?";
}

TradeAction trade_action_from_string(std::string_view name) {
  for (auto action : {TradeAction::OpenLong, TradeAction::CloseLong, TradeAction::OpenShort,
                      TradeAction::CloseShort}) {
    if (name == to_string(action)) return action;
  }
  throw std::invalid_argument("unknown trade action '" + std::string(name) + "'");
}

void BacktestConfig::validate() const {
  if (beta_override && !(*beta_override > 0.0 && *beta_override < 1.0)) {
    throw std::invalid_argument("beta override must lie in (0, 1)");
  }
  if (!(return_cap > 0.0)) throw std::invalid_argument("return cap must be positive");
  if (window < 2) throw std::invalid_argument("stats window must be >= 2");
  if (horizon_policy == HorizonPolicy::Doubling && beta_override) {
    throw std::invalid_argument("beta override is incompatible with the doubling policy");
  }
  (void)grid();
}

std::vector<ExpertSpec> BacktestConfig::grid() const {
  return expert_grid(gamma1_values, gamma2_values, window);
}

namespace {

std::optional<TradeAction> transition(Position before, Position after) {
  if (before == after) return std::nullopt;
  if (after == Position::Long) return TradeAction::OpenLong;
  if (after == Position::Short) return TradeAction::OpenShort;
  return before == Position::Long ? TradeAction::CloseLong : TradeAction::CloseShort;
}

}  // namespace

ExpertSimulation simulate_experts(const PriceSeries& series, std::span<const ExpertSpec> specs,
                                  LossMode mode, double return_cap) {
  series.validate();
  if (specs.empty()) throw std::invalid_argument("no experts to simulate");
  const std::size_t window = specs.front().stats_window;
  for (const auto& spec : specs) {
    spec.validate();
    if (spec.stats_window != window) {
      throw std::invalid_argument("all experts must share one stats window");
    }
  }
  if (series.size() <= window) {
    throw std::invalid_argument("series of length " + std::to_string(series.size()) +
                                " leaves no signal round for window " + std::to_string(window));
  }

  const std::size_t n = specs.size();
  const auto& prices = series.prices;
  ExpertSimulation sim;
  sim.first_signal_index = window - 1;
  sim.final_states.assign(n, ExpertState{});
  sim.trades.assign(n, {});

  auto apply_signal = [&](std::size_t k) {
    const RollingStats stats = rolling_stats(prices, k, window);
    if (stats.std == 0.0) return;  // no-signal round: positions held
    const double s = s_score(prices[k], stats.mean, stats.std);
    for (std::size_t i = 0; i < n; ++i) {
      ExpertState& state = sim.final_states[i];
      const ExpertState next = step_position(state, s, specs[i], prices[k]);
      if (auto action = transition(state.position, next.position)) {
        sim.trades[i].push_back({k, series.timestamps[k], *action, prices[k], s});
      }
      state = next;
    }
  };

  apply_signal(sim.first_signal_index);
  const std::size_t rounds = series.size() - window;
  sim.returns.reserve(rounds);
  sim.losses.reserve(rounds);
  for (std::size_t k = window; k < series.size(); ++k) {
    std::vector<double> r(n);
    std::vector<double> l(n);
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = round_return(sim.final_states[i].position, prices[k - 1], prices[k]);
      l[i] = return_to_loss(r[i], mode, return_cap);
    }
    sim.returns.push_back(std::move(r));
    sim.losses.push_back(std::move(l));
    apply_signal(k);
  }
  return sim;
}

BacktestReport run_backtest(const PriceSeries& series, const BacktestConfig& config) {
  config.validate();
  const std::vector<ExpertSpec> specs = config.grid();
  const std::size_t n = specs.size();
  const ExpertSimulation sim =
      simulate_experts(series, specs, config.loss_mode, config.return_cap);
  const std::size_t horizon = sim.losses.size();

  using Learner = std::variant<Ensemble, DoublingLearner>;
  Learner learner = config.horizon_policy == HorizonPolicy::Doubling
                        ? Learner{std::in_place_type<DoublingLearner>, n, config.loss_mode}
                        : Learner{std::in_place_type<Ensemble>, n,
                                  config.beta_override.value_or(optimal_beta(n, horizon)),
                                  config.loss_mode};

  BacktestReport report;
  report.config = config;
  report.symbol = series.symbol;
  report.series_length = series.size();
  report.curve.reserve(horizon);

  Rng rng(config.seed);
  std::vector<double> expert_returns(n, 0.0);
  std::vector<std::size_t> sample_counts(n, 0);
  double ensemble_return = 0.0;

  for (std::size_t t = 0; t < horizon; ++t) {
    const auto& r = sim.returns[t];
    const auto& l = sim.losses[t];
    std::visit(
        [&](auto& learn) {
          const auto p = learn.distribution();
          if (config.allocation == Allocation::Blend) {
            for (std::size_t i = 0; i < n; ++i) ensemble_return += p[i] * r[i];
          } else {
            const std::size_t pick = learn.sample_expert(rng);
            ++sample_counts[pick];
            ensemble_return += r[pick];
          }
          learn.update(l);
          const RegretReport now = learn.regret();
          report.curve.push_back(
              {t + 1, now.cum_algo_loss, now.min_expert_loss, now.regret, now.bound_sqrt});
        },
        learner);
    for (std::size_t i = 0; i < n; ++i) expert_returns[i] += r[i];
  }

  std::visit(
      [&](auto& learn) {
        report.final = learn.regret();
        const auto p = learn.distribution();
        report.ensemble.final_distribution.assign(p.begin(), p.end());
        const auto losses = learn.cum_expert_losses();
        for (std::size_t i = 0; i < n; ++i) {
          report.experts.push_back(
              {specs[i], losses[i], expert_returns[i], p[i], sim.trades[i]});
        }
      },
      learner);

  if (auto* doubling = std::get_if<DoublingLearner>(&learner)) {
    report.ensemble.beta = doubling->current_beta();
    report.ensemble.epochs = doubling->epochs();
  } else {
    report.ensemble.beta = std::get<Ensemble>(learner).beta();
  }
  report.ensemble.cum_return = ensemble_return;
  if (config.allocation == Allocation::Sample) report.ensemble.sample_counts = sample_counts;

  if (config.loss_mode == LossMode::ZeroOne &&
      config.horizon_policy == HorizonPolicy::KnownHorizon && !config.beta_override &&
      !(report.final.cum_algo_loss <= report.final.bound_sqrt)) {
    throw BoundViolation("zero-one loss " + std::to_string(report.final.cum_algo_loss) +
                           " exceeds the tuned-beta bound " +
                           std::to_string(report.final.bound_sqrt));
  }
  return report;
}

}  // namespace rwm
