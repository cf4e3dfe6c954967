#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "rwm/random.hpp"

namespace rwm {

enum class LossMode { ZeroOne, Continuous };

const char* to_string(LossMode mode);
LossMode loss_mode_from_string(const std::string_view name);

/// Throws std::invalid_argument unless every entry is in [0, 1]
/// (and in {0, 1} for ZeroOne) and the length matches `n`.
void validate_losses(std::span<const double> losses, std::size_t n, LossMode mode);

/// Regret summary at the current horizon T.
struct RegretReport {
  std::size_t horizon = 0;
  double cum_algo_loss = 0.0;
  double min_expert_loss = 0.0;
  std::size_t best_expert_index = 0;
  double regret = 0.0;
  double bound_general = 0.0;
  double bound_sqrt = 0.0;

  bool operator==(const RegretReport&) const = default;
};

/// max{1/2, 1 - sqrt(ln n / horizon)}, clamped below 1 by kBetaCeilingGap.
double optimal_beta(std::size_t n, std::size_t horizon);
inline constexpr double kBetaCeilingGap = 1e-9;

/// ln(n)/(1 - beta) + (2 - beta) * min_loss. Valid as a loss bound for beta in [1/2, 1).
double theoretical_bound_general(std::size_t n, double beta, double min_loss);

/// min_loss + 2 sqrt(horizon * ln n).
double theoretical_bound_sqrt(std::size_t n, std::size_t horizon, double min_loss);

/// Randomized weighted majority over N experts.
///
/// Weights follow w <- w * beta^l each round (beta * w on a zero-one mistake)
/// and the distribution is renormalized after every update. Weights are held
/// as a mantissa vector times a shared power of two; the exponent is shifted
/// whenever the largest mantissa drops below 2^-256, which keeps long
/// horizons out of underflow without perturbing any ratio. Experts trailing
/// the leader by more than about 1074 * ln 2 / |ln beta| units of loss flush
/// to zero weight.
class Ensemble {
 public:
  Ensemble(std::size_t n, double beta, LossMode mode);

  /// Plays one round: returns the expected loss sum_i p_i l_i under the
  /// distribution in force before the update.
  double update(std::span<const double> losses);

  std::size_t n_experts() const { return scaled_weights_.size(); }
  double beta() const { return beta_; }
  LossMode loss_mode() const { return mode_; }

  /// Index of the next round to be played (starts at 1).
  std::size_t round() const { return round_; }
  /// Rounds played so far.
  std::size_t horizon() const { return round_ - 1; }

  std::span<const double> distribution() const { return distribution_; }
  std::span<const double> cum_expert_losses() const { return cum_expert_losses_; }
  double cum_algo_loss() const { return cum_algo_loss_; }

  /// Absolute weights w_{t,i}; entries underflow to 0 on long horizons.
  std::vector<double> weights() const;
  double log_weight(std::size_t i) const;

  /// Potential W_t = sum_i w_{t,i}. potential() underflows like weights().
  double potential() const;
  double log_potential() const;

  /// W_{t+1} / W_t for the most recent update (1 before any update).
  double last_potential_ratio() const { return last_potential_ratio_; }

  RegretReport regret() const;

  /// Draws an expert index with probability p_{t,i} using one rng.uniform().
  std::size_t sample_expert(Rng& rng) const;

 private:
  void renormalize();

  double beta_;
  LossMode mode_;
  std::size_t round_ = 1;
  std::vector<double> scaled_weights_;
  std::int64_t weight_exponent_ = 0;
  double scaled_sum_ = 0.0;
  std::vector<double> distribution_;
  std::vector<double> cum_expert_losses_;
  double cum_algo_loss_ = 0.0;
  double last_potential_ratio_ = 1.0;
};

/// Regret report for externally accumulated totals.
RegretReport make_regret_report(std::size_t n, double beta, std::size_t horizon,
                                double cum_algo_loss,
                                std::span<const double> cum_expert_losses);

}  // namespace rwm
