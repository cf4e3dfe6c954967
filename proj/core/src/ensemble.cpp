#include "rwm/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rwm {
namespace {

constexpr int kRescaleThresholdExponent = -256;

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("beta must lie in (0, 1), got " + std::to_string(beta));
  }
}

}  // namespace

const char* to_string(LossMode mode) {
  return mode == LossMode::ZeroOne ? "zero-one" : "continuous";
}

LossMode loss_mode_from_string(const std::string_view name) {
  if (name == "zero-one" || name == "zeroone" || name == "01") return LossMode::ZeroOne;
  if (name == "continuous") return LossMode::Continuous;
  throw std::invalid_argument("unknown loss mode '" + std::string(name) + "'");
}

void validate_losses(std::span<const double> losses, std::size_t n, LossMode mode) {
  if (losses.size() != n) {
    throw std::invalid_argument("loss vector has length " + std::to_string(losses.size()) +
                                ", expected " + std::to_string(n));
  }
  for (std::size_t i = 0; i < losses.size(); ++i) {
    const double l = losses[i];
    if (!(l >= 0.0 && l <= 1.0)) {
      throw std::invalid_argument("loss[" + std::to_string(i) + "] = " + std::to_string(l) +
                                  " outside [0, 1]");
    }
    if (mode == LossMode::ZeroOne && l != 0.0 && l != 1.0) {
      throw std::invalid_argument("loss[" + std::to_string(i) + "] = " + std::to_string(l) +
                                  " is not zero-one");
    }
  }
}

double optimal_beta(std::size_t n, std::size_t horizon) {
  if (n == 0 || horizon == 0) {
    throw std::invalid_argument("optimal_beta requires n >= 1 and horizon >= 1");
  }
  const double tuned = 1.0 - std::sqrt(std::log(static_cast<double>(n)) /
                                       static_cast<double>(horizon));
  return std::min(std::max(0.5, tuned), 1.0 - kBetaCeilingGap);
}

double theoretical_bound_general(std::size_t n, double beta, double min_loss) {
  check_beta(beta);
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  return std::log(static_cast<double>(n)) / (1.0 - beta) + (2.0 - beta) * min_loss;
}

double theoretical_bound_sqrt(std::size_t n, std::size_t horizon, double min_loss) {
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  return min_loss +
         2.0 * std::sqrt(static_cast<double>(horizon) * std::log(static_cast<double>(n)));
}

RegretReport make_regret_report(std::size_t n, double beta, std::size_t horizon,
                                double cum_algo_loss,
                                std::span<const double> cum_expert_losses) {
  RegretReport report;
  report.horizon = horizon;
  report.cum_algo_loss = cum_algo_loss;
  const auto best = std::min_element(cum_expert_losses.begin(), cum_expert_losses.end());
  if (best != cum_expert_losses.end()) {
    report.best_expert_index = static_cast<std::size_t>(best - cum_expert_losses.begin());
    report.min_expert_loss = *best;
  }
  report.regret = report.cum_algo_loss - report.min_expert_loss;
  report.bound_general = theoretical_bound_general(n, beta, report.min_expert_loss);
  report.bound_sqrt = theoretical_bound_sqrt(n, horizon, report.min_expert_loss);
  return report;
}

Ensemble::Ensemble(std::size_t n, double beta, LossMode mode) : beta_(beta), mode_(mode) {
  if (n == 0) throw std::invalid_argument("ensemble needs at least one expert");
  check_beta(beta);
  scaled_weights_.assign(n, 1.0);
  scaled_sum_ = static_cast<double>(n);
  distribution_.assign(n, 1.0 / static_cast<double>(n));
  cum_expert_losses_.assign(n, 0.0);
}

double Ensemble::update(std::span<const double> losses) {
  validate_losses(losses, n_experts(), mode_);

  double expected = 0.0;
  for (std::size_t i = 0; i < losses.size(); ++i) expected += distribution_[i] * losses[i];

  if (mode_ == LossMode::ZeroOne) {
    for (std::size_t i = 0; i < losses.size(); ++i) {
      if (losses[i] == 1.0) scaled_weights_[i] *= beta_;
    }
  } else {
    for (std::size_t i = 0; i < losses.size(); ++i) {
      scaled_weights_[i] *= std::pow(beta_, losses[i]);
    }
  }
  for (std::size_t i = 0; i < losses.size(); ++i) cum_expert_losses_[i] += losses[i];

  const double previous_sum = scaled_sum_;
  scaled_sum_ = 0.0;
  for (const double w : scaled_weights_) scaled_sum_ += w;
  last_potential_ratio_ = scaled_sum_ / previous_sum;

  cum_algo_loss_ += expected;
  ++round_;
  renormalize();
  return expected;
}

void Ensemble::renormalize() {
  const double largest = *std::max_element(scaled_weights_.begin(), scaled_weights_.end());
  int exponent = 0;
  std::frexp(largest, &exponent);
  if (exponent < kRescaleThresholdExponent) {
    // Power-of-two scaling is exact, so ratios and the potential identity are untouched.
    for (double& w : scaled_weights_) w = std::ldexp(w, -exponent);
    scaled_sum_ = std::ldexp(scaled_sum_, -exponent);
    weight_exponent_ += exponent;
  }
  for (std::size_t i = 0; i < scaled_weights_.size(); ++i) {
    distribution_[i] = scaled_weights_[i] / scaled_sum_;
  }
}

std::vector<double> Ensemble::weights() const {
  std::vector<double> out(scaled_weights_.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::ldexp(scaled_weights_[i], static_cast<int>(weight_exponent_));
  }
  return out;
}

double Ensemble::log_weight(std::size_t i) const {
  return std::log(scaled_weights_.at(i)) +
         static_cast<double>(weight_exponent_) * std::numbers::ln2;
}

double Ensemble::potential() const {
  return std::ldexp(scaled_sum_, static_cast<int>(weight_exponent_));
}

double Ensemble::log_potential() const {
  return std::log(scaled_sum_) + static_cast<double>(weight_exponent_) * std::numbers::ln2;
}

RegretReport Ensemble::regret() const {
  return make_regret_report(n_experts(), beta_, horizon(), cum_algo_loss_, cum_expert_losses_);
}

std::size_t Ensemble::sample_expert(Rng& rng) const {
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < distribution_.size(); ++i) {
    if (distribution_[i] <= 0.0) continue;
    last_positive = i;
    cumulative += distribution_[i];
    if (u < cumulative) return i;
  }
  // Rounding can leave the cumulative sum a hair below u.
  return last_positive;
}

}  // namespace rwm
