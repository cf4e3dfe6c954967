#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rwm/ensemble.hpp"

namespace rwm {

struct EpochRecord {
  std::size_t epoch = 0;
  std::size_t first_round = 1;  // 1-based global round index
  std::size_t planned_length = 0;
  std::size_t length = 0;       // rounds actually played (last epoch may be partial)
  double beta = 0.5;
  double algo_loss = 0.0;
  double min_expert_loss = 0.0;

  bool operator==(const EpochRecord&) const = default;
};

/// Horizon-free RWM: epoch k spans 2^k rounds and runs a fresh learner tuned
/// with optimal_beta(n, 2^k). Losses and regret are aggregated over the whole
/// stream and measured against the single best expert overall.
class DoublingLearner {
 public:
  DoublingLearner(std::size_t n, LossMode mode);

  double update(std::span<const double> losses);

  std::size_t n_experts() const { return n_; }
  std::size_t horizon() const { return horizon_; }

  /// Distribution the next round will be played with.
  std::span<const double> distribution() const;
  double current_beta() const;
  std::size_t sample_expert(Rng& rng) const;

  std::span<const double> cum_expert_losses() const { return cum_expert_losses_; }
  double cum_algo_loss() const { return cum_algo_loss_; }
  const std::vector<EpochRecord>& epochs() const { return epochs_; }

  /// Bound fields use the beta of the epoch in force.
  RegretReport regret() const;

 private:
  void start_epoch();

  std::size_t n_;
  LossMode mode_;
  std::size_t horizon_ = 0;
  std::optional<Ensemble> learner_;
  std::vector<EpochRecord> epochs_;
  std::vector<double> cum_expert_losses_;
  std::vector<double> epoch_expert_losses_;
  double cum_algo_loss_ = 0.0;
};

struct DoublingResult {
  RegretReport final;
  std::vector<EpochRecord> epochs;
};

DoublingResult run_doubling(std::size_t n, std::span<const std::vector<double>> stream,
                            LossMode mode);

}  // namespace rwm
