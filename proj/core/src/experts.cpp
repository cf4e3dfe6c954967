#include "rwm/experts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

#include "rwm/errors.hpp"

namespace rwm {

void ExpertSpec::validate() const {
  if (!(gamma1 > 0.0 && gamma1 < gamma2)) {
    throw std::invalid_argument("expert thresholds need 0 < gamma1 < gamma2, got (" +
                                std::to_string(gamma1) + ", " + std::to_string(gamma2) + ")");
  }
  if (stats_window < 2) throw std::invalid_argument("stats window must be >= 2");
}

const char* to_string(Position position) {
  switch (position) {
    case Position::Flat: return "flat";
    case Position::Long: return "long";
    case Position::Short: return "short";
  }
  return "?";
}

RollingStats rolling_stats(std::span<const double> prices, std::size_t end_index,
                           std::size_t window) {
  if (window < 2) throw std::invalid_argument("rolling window must be >= 2");
  if (end_index >= prices.size()) throw std::invalid_argument("end_index past series end");
  if (end_index + 1 < window) {
    throw NotEnoughData("need " + std::to_string(window) + " observations ending at index " +
                        std::to_string(end_index));
  }
  const auto slice = prices.subspan(end_index + 1 - window, window);
  const auto [lo, hi] = std::minmax_element(slice.begin(), slice.end());
  if (*lo == *hi) return {*lo, 0.0};

  double sum = 0.0;
  for (const double p : slice) sum += p;
  const double mean = sum / static_cast<double>(window);
  double ss = 0.0;
  for (const double p : slice) ss += (p - mean) * (p - mean);
  return {mean, std::sqrt(ss / static_cast<double>(window - 1))};
}

double s_score(double price, double mean, double std) {
  if (!(std > 0.0)) throw DegenerateVolatility("s-score undefined for zero volatility");
  return (price - mean) / std;
}

SScore make_s_score(double price, const RollingStats& stats) {
  return {s_score(price, stats.mean, stats.std), stats.mean, stats.std, price};
}

ExpertState step_position(const ExpertState& state, double s, const ExpertSpec& spec,
                          double price) {
  switch (state.position) {
    case Position::Long:
      if (s > -spec.gamma1) return {};
      return state;
    case Position::Short:
      if (s < spec.gamma1) return {};
      return state;
    case Position::Flat:
      if (s < -spec.gamma2) return {Position::Long, price};
      if (s > spec.gamma2) return {Position::Short, price};
      return state;
  }
  return state;
}

std::vector<ExpertSpec> expert_grid(std::span<const double> gamma1_values,
                                    std::span<const double> gamma2_values,
                                    std::size_t window) {
  std::vector<ExpertSpec> grid;
  for (const double g1 : gamma1_values) {
    for (const double g2 : gamma2_values) {
      if (!(g1 > 0.0) || !(g2 > 0.0)) {
        throw std::invalid_argument("gamma values must be positive");
      }
      if (g1 < g2) grid.push_back({g1, g2, window});
    }
  }
  if (grid.empty()) {
    throw std::invalid_argument("expert grid is empty after enforcing gamma1 < gamma2");
  }
  auto key = [](const ExpertSpec& e) { return std::tie(e.gamma1, e.gamma2); };
  std::sort(grid.begin(), grid.end(),
            [&](const ExpertSpec& a, const ExpertSpec& b) { return key(a) < key(b); });
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (const auto& spec : grid) spec.validate();
  return grid;
}

double round_return(Position held, double price_prev, double price_now) {
  if (!(price_prev > 0.0) || !(price_now > 0.0)) {
    throw std::invalid_argument("prices must be positive");
  }
  const double r = (price_now - price_prev) / price_prev;
  switch (held) {
    case Position::Long: return r;
    case Position::Short: return -r;
    case Position::Flat: return 0.0;
  }
  return 0.0;
}

double return_to_loss(double r, LossMode mode, double cap) {
  if (!(cap > 0.0)) throw std::invalid_argument("return cap must be positive");
  if (mode == LossMode::ZeroOne) return r < 0.0 ? 1.0 : 0.0;
  return std::clamp(0.5 - r / (2.0 * cap), 0.0, 1.0);
}

}  // namespace rwm
