#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rwm/ensemble.hpp"

namespace rwm {

/// Mean-reversion expert thresholds: open beyond +/-gamma2, close once the
/// s-score re-enters the band on the far side of -/+gamma1.
struct ExpertSpec {
  double gamma1 = 0.5;
  double gamma2 = 1.25;
  std::size_t stats_window = 60;

  /// Throws std::invalid_argument unless 0 < gamma1 < gamma2 and window >= 2.
  void validate() const;

  bool operator==(const ExpertSpec&) const = default;
};

enum class Position { Flat, Long, Short };

const char* to_string(Position position);

struct ExpertState {
  Position position = Position::Flat;
  std::optional<double> entry_price;  // set iff position != Flat

  bool operator==(const ExpertState&) const = default;
};

struct RollingStats {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, divisor window - 1
};

/// Statistics over prices[end_index - window + 1 .. end_index]. A window of
/// identical prices reports std == 0 exactly.
RollingStats rolling_stats(std::span<const double> prices, std::size_t end_index,
                           std::size_t window);

struct SScore {
  double value = 0.0;
  double mean = 0.0;
  double std = 1.0;
  double price = 0.0;
};

/// (price - mean) / std. Throws DegenerateVolatility when std == 0.
double s_score(double price, double mean, double std);
SScore make_s_score(double price, const RollingStats& stats);

/// One step of the position machine. Close rules are evaluated first and a
/// step never flips Long <-> Short.
ExpertState step_position(const ExpertState& state, double s, const ExpertSpec& spec,
                          double price);

/// Cartesian product restricted to gamma1 < gamma2, sorted by (gamma1, gamma2)
/// with duplicates removed. Throws std::invalid_argument on an empty result.
std::vector<ExpertSpec> expert_grid(std::span<const double> gamma1_values,
                                    std::span<const double> gamma2_values,
                                    std::size_t window);

/// Simple return earned over one round by the position held going into it.
double round_return(Position held, double price_prev, double price_now);

/// ZeroOne: 1 for a negative return, else 0.
/// Continuous: clamp(0.5 - r / (2 cap), 0, 1).
double return_to_loss(double r, LossMode mode, double cap);

inline constexpr double kDefaultReturnCap = 0.05;
inline constexpr std::size_t kDefaultStatsWindow = 60;

}  // namespace rwm
