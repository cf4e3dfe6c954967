#include "rwm/doubling.hpp"

#include <algorithm>
#include <stdexcept>

namespace rwm {

DoublingLearner::DoublingLearner(std::size_t n, LossMode mode) : n_(n), mode_(mode) {
  if (n == 0) throw std::invalid_argument("ensemble needs at least one expert");
  cum_expert_losses_.assign(n, 0.0);
  start_epoch();
}

void DoublingLearner::start_epoch() {
  EpochRecord record;
  record.epoch = epochs_.size();
  record.first_round = horizon_ + 1;
  record.planned_length = std::size_t{1} << record.epoch;
  record.beta = optimal_beta(n_, record.planned_length);
  learner_.emplace(n_, record.beta, mode_);
  epoch_expert_losses_.assign(n_, 0.0);
  epochs_.push_back(record);
}

double DoublingLearner::update(std::span<const double> losses) {
  if (epochs_.back().length == epochs_.back().planned_length) start_epoch();

  const double expected = learner_->update(losses);
  for (std::size_t i = 0; i < n_; ++i) {
    cum_expert_losses_[i] += losses[i];
    epoch_expert_losses_[i] += losses[i];
  }
  cum_algo_loss_ += expected;
  ++horizon_;

  EpochRecord& record = epochs_.back();
  ++record.length;
  record.algo_loss += expected;
  record.min_expert_loss =
      *std::min_element(epoch_expert_losses_.begin(), epoch_expert_losses_.end());
  return expected;
}

std::span<const double> DoublingLearner::distribution() const {
  return learner_->distribution();
}

double DoublingLearner::current_beta() const { return learner_->beta(); }

std::size_t DoublingLearner::sample_expert(Rng& rng) const {
  return learner_->sample_expert(rng);
}

RegretReport DoublingLearner::regret() const {
  return make_regret_report(n_, current_beta(), horizon_, cum_algo_loss_, cum_expert_losses_);
}

DoublingResult run_doubling(std::size_t n, std::span<const std::vector<double>> stream,
                            LossMode mode) {
  DoublingLearner learner(n, mode);
  for (const auto& losses : stream) learner.update(losses);

  DoublingResult result;
  result.final = learner.regret();
  result.epochs = learner.epochs();
  // An untouched first epoch carries no information.
  if (learner.horizon() == 0) result.epochs.clear();
  return result;
}

}  // namespace rwm
